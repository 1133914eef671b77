#pragma once

#include <map>
#include <string>
#include <vector>

#include "bifluid/harness.hpp"

namespace bifluid {

// INI-style configuration: [section] headers, key = value lines,
// '#' comments.
class Config {
public:
  static Config load(const std::string& path);
  static Config parse(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  int get_int(const std::string& section, const std::string& key,
              int fallback) const;
  std::vector<double> get_list(const std::string& section,
                               const std::string& key,
                               const std::vector<double>& fallback) const;

private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

// Everything a CLI run needs, assembled from one config file.
struct Setup {
  Grid grid;
  FluidParams params;
  WellPreparedSpec ic;
  PrepMode mode;
  SolverConfig solver;
  LimitConfig limit;
  std::vector<double> eps_list;
  std::string out_dir;
  std::vector<double> snapshot_times;
};

Setup parse_setup(const Config& cfg);

}  // namespace bifluid
