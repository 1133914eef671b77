#include "bifluid/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bifluid {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config: malformed section at line " +
                                 std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected key = value at line " +
                               std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config: empty key at line " +
                               std::to_string(lineno));
    cfg.sections_[section][key] = value;
  }
  return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return fallback;
  const auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  if (!has(section, key)) return fallback;
  return std::stod(get(section, key, ""));
}

int Config::get_int(const std::string& section, const std::string& key,
                    int fallback) const {
  if (!has(section, key)) return fallback;
  return std::stoi(get(section, key, ""));
}

std::vector<double> Config::get_list(const std::string& section,
                                     const std::string& key,
                                     const std::vector<double>& fallback) const {
  if (!has(section, key)) return fallback;
  std::vector<double> out;
  std::istringstream in(get(section, key, ""));
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

Setup parse_setup(const Config& cfg) {
  const int dim = cfg.get_int("grid", "dimension", 2);
  const int nx = cfg.get_int("grid", "nx", 64);
  const double lx = cfg.get_double("grid", "length_x", 1.0);

  Grid grid = [&]() {
    if (dim == 1) {
      const std::string bc = cfg.get("grid", "bc", "periodic");
      if (bc == "periodic") return Grid::make_1d(nx, lx, Boundary::periodic);
      if (bc == "dirichlet") return Grid::make_1d(nx, lx, Boundary::dirichlet);
      throw std::runtime_error("config: unknown bc '" + bc + "'");
    }
    if (dim == 2) {
      const int ny = cfg.get_int("grid", "ny", nx);
      const double ly = cfg.get_double("grid", "length_y", lx);
      return Grid::make_2d(nx, ny, lx, ly);
    }
    throw std::runtime_error("config: dimension must be 1 or 2");
  }();

  FluidParams params(cfg.get_double("params", "gamma_plus", 4.0),
                     cfg.get_double("params", "gamma_minus", 2.0),
                     cfg.get_double("params", "mu", 1e-2),
                     cfg.get_double("params", "lambda", 0.0),
                     cfg.get_double("params", "eps", 0.1),
                     cfg.get_double("params", "c0", 1.0));

  WellPreparedSpec ic;
  ic.alpha_mean = cfg.get_double("ic", "alpha_mean", ic.alpha_mean);
  ic.alpha_contrast = cfg.get_double("ic", "alpha_contrast", ic.alpha_contrast);
  ic.velocity_amplitude =
      cfg.get_double("ic", "velocity_amplitude", ic.velocity_amplitude);
  ic.perturb_amplitude =
      cfg.get_double("ic", "perturb_amplitude", ic.perturb_amplitude);

  const std::string mode_name = cfg.get("ic", "mode", "exact");
  PrepMode mode;
  if (mode_name == "exact") {
    mode = PrepMode::exact;
  } else if (mode_name == "quadratic") {
    mode = PrepMode::quadratic;
  } else {
    throw std::runtime_error("config: unknown ic mode '" + mode_name + "'");
  }

  SolverConfig solver;
  solver.cfl = cfg.get_double("solver", "cfl", solver.cfl);
  solver.floor = cfg.get_double("solver", "floor", solver.floor);
  solver.t_end = cfg.get_double("solver", "t_end", solver.t_end);
  solver.diag_dt = cfg.get_double("solver", "diag_dt", solver.diag_dt);
  const std::string lim_name = cfg.get("solver", "limiter", "minmod");
  if (lim_name == "minmod") {
    solver.limiter = Limiter::minmod;
  } else if (lim_name == "none") {
    solver.limiter = Limiter::none;
  } else {
    throw std::runtime_error("config: unknown limiter '" + lim_name + "'");
  }

  LimitConfig limit;
  limit.cfl = solver.cfl;
  limit.t_end = solver.t_end;
  limit.snapshot_dt = solver.diag_dt;
  limit.limiter = solver.limiter;
  limit.poisson_tol =
      cfg.get_double("solver", "poisson_tol", limit.poisson_tol);
  limit.poisson_max_iter =
      cfg.get_int("solver", "poisson_max_iter", limit.poisson_max_iter);

  Setup setup{std::move(grid), params, ic, mode, solver, limit,
              cfg.get_list("sweep", "eps_list", {0.2, 0.1, 0.05}),
              cfg.get("output", "dir", "out"),
              cfg.get_list("output", "snapshots", {})};
  return setup;
}

}  // namespace bifluid
