#pragma once

#include <string>
#include <vector>

namespace driftfit {

// Discrete observations (t_i, X_{t_i}); times strictly increasing from 0.
struct SamplePath {
  std::vector<double> times;
  std::vector<double> values;

  std::size_t size() const { return times.size(); }
  void validate() const;

  // CSV with header "t,x", full double precision.
  std::string to_csv() const;
  static SamplePath from_csv(const std::string& text);

  void save_csv(const std::string& filename) const;
  static SamplePath load_csv(const std::string& filename);
};

}  // namespace driftfit
