#include "nonrecip/cli/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nonrecip::cli {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_sweep_csv(std::ostream &os, const std::vector<ScatteringPointd> &points) {
  os << kSweepHeader << '\n';
  for (const auto &p : points) {
    os << format_double(p.x) << ',' << format_double(p.T_LR) << ','
       << format_double(p.T_RL) << ',' << format_double(p.t_LR.real()) << ','
       << format_double(p.t_LR.imag()) << ',' << format_double(p.t_RL.real()) << ','
       << format_double(p.t_RL.imag()) << '\n';
  }
}

std::vector<ScatteringPointd> read_sweep_csv(std::istream &is) {
  std::string line;
  if (!std::getline(is, line) || line != kSweepHeader)
    throw std::runtime_error("unexpected sweep CSV header");
  std::vector<ScatteringPointd> out;
  while (std::getline(is, line)) {
    if (line.empty())
      continue;
    std::istringstream row(line);
    double v[7];
    for (int i = 0; i < 7; ++i) {
      std::string cell;
      if (!std::getline(row, cell, ','))
        throw std::runtime_error("short sweep CSV row: " + line);
      std::size_t used = 0;
      v[i] = std::stod(cell, &used);
      if (used != cell.size())
        throw std::runtime_error("bad number in sweep CSV: " + cell);
    }
    ScatteringPointd p;
    p.x = v[0];
    p.T_LR = v[1];
    p.T_RL = v[2];
    p.t_LR = {v[3], v[4]};
    p.t_RL = {v[5], v[6]};
    out.push_back(p);
  }
  return out;
}

void write_trajectory_csv(std::ostream &os, const TimeSeriesd &ts) {
  os << kTrajectoryHeader << '\n';
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const auto &y = ts.samples[k];
    os << format_double(ts.time(k));
    for (int m = 0; m < 3; ++m)
      os << ',' << format_double(y(m).real()) << ',' << format_double(y(m).imag());
    os << '\n';
  }
}

} // namespace nonrecip::cli
