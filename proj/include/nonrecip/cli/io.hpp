#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nonrecip/oracle.hpp"
#include "nonrecip/response.hpp"

namespace nonrecip::cli {

/// Shortest-safe lossless text form of a double (17 significant digits).
std::string format_double(double v);

inline constexpr const char *kSweepHeader = "x,T_LR,T_RL,re_tLR,im_tLR,re_tRL,im_tRL";
inline constexpr const char *kTrajectoryHeader = "t,re_c1,im_c1,re_c2,im_c2,re_b,im_b";
inline constexpr const char *kFig3Header = "theta,G_over_gamma,x_over_gamma";

void write_sweep_csv(std::ostream &os, const std::vector<ScatteringPointd> &points);

/// Parses a sweep CSV written by write_sweep_csv. Throws std::runtime_error
/// on a malformed header or row.
std::vector<ScatteringPointd> read_sweep_csv(std::istream &is);

void write_trajectory_csv(std::ostream &os, const TimeSeriesd &ts);

} // namespace nonrecip::cli
