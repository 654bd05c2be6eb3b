#include "driftfit/sample_path.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace driftfit {

void SamplePath::validate() const {
  if (times.size() != values.size())
    throw std::invalid_argument("SamplePath: times/values length mismatch");
  if (times.empty()) throw std::invalid_argument("SamplePath: empty path");
  if (times.front() != 0.0) throw std::invalid_argument("SamplePath: times must start at 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] <= times[i - 1])
      throw std::invalid_argument("SamplePath: times must be strictly increasing");
}

std::string SamplePath::to_csv() const {
  std::string out = "t,x\n";
  char buf[64];
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", times[i], values[i]);
    out += buf;
  }
  return out;
}

SamplePath SamplePath::from_csv(const std::string& text) {
  SamplePath path;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("t,", 0) == 0 || line.rfind("t ,", 0) == 0) continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("SamplePath::from_csv: malformed row '" + line + "'");
    path.times.push_back(std::stod(line.substr(0, comma)));
    path.values.push_back(std::stod(line.substr(comma + 1)));
  }
  path.validate();
  return path;
}

void SamplePath::save_csv(const std::string& filename) const {
  std::ofstream out(filename, std::ios::binary);
  if (!out) throw std::runtime_error("SamplePath::save_csv: cannot open " + filename);
  out << to_csv();
}

SamplePath SamplePath::load_csv(const std::string& filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) throw std::runtime_error("SamplePath::load_csv: cannot open " + filename);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_csv(ss.str());
}

}  // namespace driftfit
