// Continuous power control on one or two Ka-band subchannels. Every solver
// maximizes the weighted subchannel utility of a SubchannelModel over the
// powers of one or two of its links; all other powers stay fixed.
#pragma once

#include <cstddef>
#include <vector>

#include "leo/channel.hpp"

namespace leo {

struct ScalarResult {
  double p = 0.0;
  double value = 0.0;
};

struct PairResult {
  double p1 = 0.0;
  double p2 = 0.0;
  double value = 0.0;
  bool converged = true;
};

/// All local maximizers of the utility in power[i] on [lo, hi], boundary
/// points included.
std::vector<double> local_maximizers(const SubchannelModel& model,
                                     std::size_t i, double lo, double hi);

/// One link's power on [lo, hi]: stationary points plus both boundaries.
ScalarResult solve_pc3(const SubchannelModel& model, std::size_t i, double lo,
                       double hi);

/// Links on two different subchannels sharing p1 + p2 <= budget. `value` is
/// the sum of both subchannel utilities.
PairResult solve_pc1(const SubchannelModel& a, std::size_t ia,
                     const SubchannelModel& b, std::size_t ib, double budget);

struct DcOptions {
  double tolerance = 1e-8;
  int max_iterations = 100;
};

/// Two links on one subchannel with p1 + p2 <= budget, by the concave-convex
/// iteration started from both corners and the midpoint.
PairResult solve_pc2(const SubchannelModel& model, std::size_t i1,
                     std::size_t i2, double budget, const DcOptions& opt = {});

/// Same objective with separate limits p1 <= cap1, p2 <= cap2.
PairResult solve_pc2_box(const SubchannelModel& model, std::size_t i1,
                         std::size_t i2, double cap1, double cap2,
                         const DcOptions& opt = {});

}  // namespace leo
