#include "leo/matching.hpp"

#include <algorithm>
#include <tuple>

namespace leo {

std::vector<TerrestrialPair> TerrestrialMatching::pairs() const {
  std::vector<TerrestrialPair> out;
  for (std::size_t j = 0; j < users_; ++j) {
    if (user_matched(j)) {
      out.push_back({static_cast<int>(j), user_cell(j), user_subch(j)});
    }
  }
  return out;
}

std::vector<int> TerrestrialMatching::unmatched_users() const {
  std::vector<int> out;
  for (std::size_t j = 0; j < users_; ++j) {
    if (!user_matched(j)) out.push_back(static_cast<int>(j));
  }
  return out;
}

std::vector<BackhaulLink> BackhaulMatching::links_of(std::size_t t) const {
  std::vector<BackhaulLink> out;
  for (const auto& l : links_) {
    if (l.tst == static_cast<int>(t)) out.push_back(l);
  }
  return out;
}

std::vector<BackhaulLink> BackhaulMatching::links_on(std::size_t q) const {
  std::vector<BackhaulLink> out;
  for (const auto& l : links_) {
    if (l.subch == static_cast<int>(q)) out.push_back(l);
  }
  return out;
}

std::size_t BackhaulMatching::link_count(std::size_t t) const {
  return static_cast<std::size_t>(
      std::count_if(links_.begin(), links_.end(),
                    [&](const auto& l) { return l.tst == static_cast<int>(t); }));
}

double BackhaulMatching::allocated_power(std::size_t t) const {
  double p = 0.0;
  for (const auto& l : links_) {
    if (l.tst == static_cast<int>(t)) p += l.power_w;
  }
  return p;
}

void BackhaulMatching::add(const BackhaulLink& link) {
  if (link.tst < 0 || static_cast<std::size_t>(link.tst) >= tsts_ ||
      link.sat < 0 || static_cast<std::size_t>(link.sat) >= sats_ ||
      link.subch < 0 || static_cast<std::size_t>(link.subch) >= subch_) {
    throw ContractError("backhaul link index out of range");
  }
  if (!unit_free(static_cast<std::size_t>(link.sat),
                 static_cast<std::size_t>(link.subch))) {
    throw ContractError("satellite-subchannel unit already held");
  }
  if (link.power_w < 0.0) throw ContractError("negative link power");
  links_.push_back(link);
  reindex();
}

void BackhaulMatching::remove(std::size_t n, std::size_t q) {
  const int l = unit_link_[n * subch_ + q];
  if (l == kNone) return;
  links_.erase(links_.begin() + l);
  reindex();
}

void BackhaulMatching::set_power(std::size_t n, std::size_t q, double power_w) {
  const int l = unit_link_[n * subch_ + q];
  if (l == kNone) throw ContractError("no link on this unit");
  if (power_w < 0.0) throw ContractError("negative link power");
  links_[static_cast<std::size_t>(l)].power_w = power_w;
}

void BackhaulMatching::reindex() {
  std::sort(links_.begin(), links_.end(), [](const auto& a, const auto& b) {
    return std::tie(a.subch, a.sat) < std::tie(b.subch, b.sat);
  });
  std::fill(unit_link_.begin(), unit_link_.end(), kNone);
  for (std::size_t i = 0; i < links_.size(); ++i) {
    unit_link_[static_cast<std::size_t>(links_[i].sat) * subch_ +
               static_cast<std::size_t>(links_[i].subch)] = static_cast<int>(i);
  }
}

}  // namespace leo
