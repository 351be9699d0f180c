// Assignment state shared by the terrestrial (user <-> BS-subchannel unit)
// and backhaul (TST <-> satellite-subchannel unit) matchings.
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace leo {

inline constexpr int kNone = -1;

class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct TerrestrialPair {
  int user = kNone;
  int cell = kNone;
  int subch = kNone;
  bool operator==(const TerrestrialPair&) const = default;
};

/// One-to-one matching Psi between users and (cell, subchannel) units.
/// Holds X implicitly: x[m][j][k] = 1 iff unit_user(m, k) == j.
class TerrestrialMatching {
 public:
  TerrestrialMatching() = default;
  TerrestrialMatching(std::size_t cells, std::size_t users, std::size_t subch)
      : cells_(cells),
        users_(users),
        subch_(subch),
        unit_user_(cells * subch, kNone),
        user_unit_(users, kNone) {}

  std::size_t cell_count() const { return cells_; }
  std::size_t user_count() const { return users_; }
  std::size_t subch_count() const { return subch_; }

  int unit_user(std::size_t m, std::size_t k) const {
    return unit_user_[m * subch_ + k];
  }
  bool unit_free(std::size_t m, std::size_t k) const {
    return unit_user(m, k) == kNone;
  }
  bool user_matched(std::size_t j) const { return user_unit_[j] != kNone; }
  int user_cell(std::size_t j) const {
    return user_unit_[j] == kNone ? kNone
                                  : user_unit_[j] / static_cast<int>(subch_);
  }
  int user_subch(std::size_t j) const {
    return user_unit_[j] == kNone ? kNone
                                  : user_unit_[j] % static_cast<int>(subch_);
  }
  bool has(std::size_t m, std::size_t j, std::size_t k) const {
    return unit_user(m, k) == static_cast<int>(j);
  }

  void assign(std::size_t j, std::size_t m, std::size_t k) {
    if (user_matched(j) || !unit_free(m, k)) {
      throw ContractError("assignment would break the one-to-one matching");
    }
    unit_user_[m * subch_ + k] = static_cast<int>(j);
    user_unit_[j] = static_cast<int>(m * subch_ + k);
  }
  void unassign(std::size_t j) {
    if (!user_matched(j)) return;
    unit_user_[static_cast<std::size_t>(user_unit_[j])] = kNone;
    user_unit_[j] = kNone;
  }

  std::size_t accessed_count() const {
    std::size_t n = 0;
    for (int u : user_unit_) n += u != kNone;
    return n;
  }
  std::vector<TerrestrialPair> pairs() const;
  std::vector<int> unmatched_users() const;

  bool operator==(const TerrestrialMatching&) const = default;

 private:
  std::size_t cells_ = 0;
  std::size_t users_ = 0;
  std::size_t subch_ = 0;
  std::vector<int> unit_user_;
  std::vector<int> user_unit_;
};

struct BackhaulLink {
  int tst = kNone;
  int sat = kNone;
  int subch = kNone;
  double power_w = 0.0;
  bool operator==(const BackhaulLink&) const = default;
};

/// Many-to-one matching Phi between TSTs and (satellite, subchannel) units
/// with per-link transmit powers. Houses B and p^T.
class BackhaulMatching {
 public:
  BackhaulMatching() = default;
  BackhaulMatching(std::size_t tsts, std::size_t sats, std::size_t subch,
                   double max_power_w)
      : tsts_(tsts),
        sats_(sats),
        subch_(subch),
        max_power_w_(max_power_w),
        unit_link_(sats * subch, kNone) {}

  std::size_t tst_count() const { return tsts_; }
  std::size_t sat_count() const { return sats_; }
  std::size_t subch_count() const { return subch_; }
  double max_power_w() const { return max_power_w_; }

  const std::vector<BackhaulLink>& links() const { return links_; }
  // Holder of unit (n, q), or kNone.
  int unit_tst(std::size_t n, std::size_t q) const {
    const int l = unit_link_[n * subch_ + q];
    return l == kNone ? kNone : links_[static_cast<std::size_t>(l)].tst;
  }
  bool unit_free(std::size_t n, std::size_t q) const {
    return unit_link_[n * subch_ + q] == kNone;
  }
  std::optional<BackhaulLink> link_at(std::size_t n, std::size_t q) const {
    const int l = unit_link_[n * subch_ + q];
    if (l == kNone) return std::nullopt;
    return links_[static_cast<std::size_t>(l)];
  }
  std::vector<BackhaulLink> links_of(std::size_t t) const;
  std::vector<BackhaulLink> links_on(std::size_t q) const;
  std::size_t link_count(std::size_t t) const;
  double allocated_power(std::size_t t) const;
  double unallocated_power(std::size_t t) const {
    return max_power_w_ - allocated_power(t);
  }

  void add(const BackhaulLink& link);
  void remove(std::size_t n, std::size_t q);
  void set_power(std::size_t n, std::size_t q, double power_w);

  bool operator==(const BackhaulMatching&) const = default;

 private:
  void reindex();

  std::size_t tsts_ = 0;
  std::size_t sats_ = 0;
  std::size_t subch_ = 0;
  double max_power_w_ = 0.0;
  std::vector<BackhaulLink> links_;  // sorted by (subch, sat)
  std::vector<int> unit_link_;
};

}  // namespace leo
