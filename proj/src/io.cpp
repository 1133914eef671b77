#include "bifluid/io.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "bifluid/closure.hpp"

namespace bifluid {

namespace {

std::ofstream open_out(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("io: cannot open " + path + " for write");
  out << std::setprecision(17);
  return out;
}

}  // namespace

void write_snapshot(const std::string& path, const ConservedField& state,
                    const FluidParams& params) {
  const Grid& g = state.r_plus.grid();
  auto out = open_out(path);
  if (g.dim() == 1) {
    out << "x,r_plus,r_minus,mx,alpha_plus,rho_plus,rho_minus,rho,ux,pressure\n";
  } else {
    out << "x,y,r_plus,r_minus,mx,my,alpha_plus,rho_plus,rho_minus,rho,ux,uy,"
           "pressure\n";
  }
  const int ny = g.dim() == 1 ? 1 : g.n(1);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < g.n(0); ++i) {
      const std::size_t k = g.index(i, j);
      const double m[2] = {state.m.comp(0)[k],
                           g.dim() == 1 ? 0.0 : state.m.comp(1)[k]};
      const PrimitiveState ps =
          reconstruct(state.r_plus[k], state.r_minus[k], m, g.dim(), params);
      out << g.center(0, i) << ',';
      if (g.dim() == 2) out << g.center(1, j) << ',';
      out << state.r_plus[k] << ',' << state.r_minus[k] << ',' << m[0] << ',';
      if (g.dim() == 2) out << m[1] << ',';
      out << ps.alpha_plus << ',' << ps.rho_plus << ',' << ps.rho_minus << ','
          << ps.rho << ',' << ps.u[0] << ',';
      if (g.dim() == 2) out << ps.u[1] << ',';
      out << ps.p << '\n';
    }
  }
}

void write_limit_snapshot(const std::string& path, const LimitState& state,
                          const FluidParams& params) {
  (void)params;
  const Grid& g = state.alpha_plus.grid();
  auto out = open_out(path);
  if (g.dim() == 1) {
    out << "x,alpha_plus,ux,rho\n";
  } else {
    out << "x,y,alpha_plus,ux,uy,rho\n";
  }
  const int ny = g.dim() == 1 ? 1 : g.n(1);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < g.n(0); ++i) {
      const std::size_t k = g.index(i, j);
      const double a = state.alpha_plus[k];
      const double rho = a * state.rho_plus + (1.0 - a) * state.rho_minus;
      out << g.center(0, i) << ',';
      if (g.dim() == 2) out << g.center(1, j) << ',';
      out << a << ',' << state.u.comp(0)[k] << ',';
      if (g.dim() == 2) out << state.u.comp(1)[k] << ',';
      out << rho << '\n';
    }
  }
}

void write_entropy_csv(const std::string& path,
                       const std::vector<DiagnosticRow>& rows) {
  auto out = open_out(path);
  out << "time,e1,e2,e_total,energy,dissipation,drp_l1,drm_l1,drp_l2,drm_l2,"
         "du_l2,div_l2_sq,floor_plus,floor_minus,ckp_ok,l2l1_ratio\n";
  for (const DiagnosticRow& r : rows) {
    out << r.time << ',' << r.e1 << ',' << r.e2 << ',' << r.e_total << ','
        << r.energy << ',' << r.dissipation << ',' << r.drp_l1 << ','
        << r.drm_l1 << ',' << r.drp_l2 << ',' << r.drm_l2 << ',' << r.du_l2
        << ',' << r.div_l2_sq << ',' << r.floor_plus << ',' << r.floor_minus
        << ',' << (r.ckp_ok ? 1 : 0) << ',' << r.l2l1_ratio << '\n';
  }
}

void write_sweep_csv(const std::string& path, const SweepReport& report) {
  auto out = open_out(path);
  out << "eps,sup_e1,sup_e2,int_div_l2_sq,sup_drp_l1,sup_drm_l1,sup_drp_l2,"
         "sup_drm_l2,int_du_l2_sq,max_l2l1_ratio,ckp_all_ok,aborted,steps,"
         "seconds\n";
  for (const SweepRow& r : report.rows) {
    out << r.eps << ',' << r.sup_e1 << ',' << r.sup_e2 << ','
        << r.int_div_l2_sq << ',' << r.sup_drp_l1 << ',' << r.sup_drm_l1 << ','
        << r.sup_drp_l2 << ',' << r.sup_drm_l2 << ',' << r.int_du_l2_sq << ','
        << r.max_l2l1_ratio << ',' << (r.ckp_all_ok ? 1 : 0) << ','
        << (r.aborted ? 1 : 0) << ',' << r.steps << ',' << r.seconds << '\n';
  }
}

void write_json(const std::string& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

nlohmann::json describe(const Grid& grid) {
  nlohmann::json j;
  j["dimension"] = grid.dim();
  j["nx"] = grid.n(0);
  j["length_x"] = grid.length(0);
  j["bc_x"] = grid.bc(0) == Boundary::periodic ? "periodic" : "dirichlet";
  if (grid.dim() == 2) {
    j["ny"] = grid.n(1);
    j["length_y"] = grid.length(1);
    j["bc_y"] = grid.bc(1) == Boundary::periodic ? "periodic" : "dirichlet";
  }
  return j;
}

nlohmann::json describe(const FluidParams& params) {
  return nlohmann::json{{"gamma_plus", params.gamma_plus},
                        {"gamma_minus", params.gamma_minus},
                        {"mu", params.mu},
                        {"lambda", params.lambda},
                        {"eps", params.eps},
                        {"c0", params.c0},
                        {"rho_plus_limit", params.rho_plus_limit()},
                        {"rho_minus_limit", params.rho_minus_limit()}};
}

nlohmann::json describe(const DiagnosticRow& row) {
  return nlohmann::json{{"time", row.time},
                        {"e1", row.e1},
                        {"e2", row.e2},
                        {"e_total", row.e_total},
                        {"energy", row.energy},
                        {"dissipation", row.dissipation},
                        {"drp_l1", row.drp_l1},
                        {"drm_l1", row.drm_l1},
                        {"drp_l2", row.drp_l2},
                        {"drm_l2", row.drm_l2},
                        {"du_l2", row.du_l2},
                        {"div_l2_sq", row.div_l2_sq},
                        {"floor_plus", row.floor_plus},
                        {"floor_minus", row.floor_minus},
                        {"ckp_ok", row.ckp_ok},
                        {"l2l1_ratio", row.l2l1_ratio}};
}

nlohmann::json describe(const SweepRow& row) {
  return nlohmann::json{{"eps", row.eps},
                        {"sup_e1", row.sup_e1},
                        {"sup_e2", row.sup_e2},
                        {"int_div_l2_sq", row.int_div_l2_sq},
                        {"sup_drp_l1", row.sup_drp_l1},
                        {"sup_drm_l1", row.sup_drm_l1},
                        {"sup_drp_l2", row.sup_drp_l2},
                        {"sup_drm_l2", row.sup_drm_l2},
                        {"int_du_l2_sq", row.int_du_l2_sq},
                        {"max_l2l1_ratio", row.max_l2l1_ratio},
                        {"ckp_all_ok", row.ckp_all_ok},
                        {"aborted", row.aborted},
                        {"steps", row.steps},
                        {"seconds", row.seconds}};
}

nlohmann::json describe(const RunResult& result) {
  nlohmann::json j;
  j["steps"] = result.steps;
  j["aborted"] = result.aborted;
  if (result.aborted) j["abort_reason"] = result.abort_reason;
  j["floor_added_plus"] = result.floor_added_plus;
  j["floor_added_minus"] = result.floor_added_minus;
  j["max_pressure_residual"] = result.max_pressure_residual;
  j["int_div_l2_sq"] = result.int_div_l2_sq;
  if (result.has_limit) j["int_du_l2_sq"] = result.int_du_l2_sq;
  j["diagnostics"] = nlohmann::json::array();
  for (const DiagnosticRow& r : result.rows) j["diagnostics"].push_back(describe(r));
  return j;
}

nlohmann::json describe(const LimitRunResult& result) {
  return nlohmann::json{{"steps", result.steps},
                        {"ke_initial", result.ke_initial},
                        {"ke_final", result.ke_final},
                        {"ke_monotone", result.ke_monotone},
                        {"max_div_l2", result.max_div_l2},
                        {"alpha_integral_drift", result.alpha_integral_drift},
                        {"snapshots", result.trajectory.times.size()}};
}

nlohmann::json describe(const SweepReport& report) {
  nlohmann::json j;
  j["slope_e1"] = report.slope_e1;
  j["slope_du"] = report.slope_du;
  j["partial"] = report.partial;
  j["limit"] = describe(report.limit);
  j["rows"] = nlohmann::json::array();
  for (const SweepRow& r : report.rows) j["rows"].push_back(describe(r));
  bool monotone = true;
  for (std::size_t k = 1; k < report.rows.size(); ++k)
    monotone = monotone && report.rows[k].sup_e1 < report.rows[k - 1].sup_e1;
  j["sup_e1_monotone"] = monotone && !report.partial;
  return j;
}

nlohmann::json describe(const InequalityReport& report) {
  return nlohmann::json{
      {"trials", report.trials},
      {"vacuous", report.vacuous},
      {"ckp_factor1_failures", report.ckp_factor1_failures},
      {"ckp_factor2_failures", report.ckp_factor2_failures},
      {"ckp_factor3_failures", report.ckp_factor3_failures},
      {"counterexample_factor1_fails", report.counterexample_factor1_fails},
      {"counterexample_factor2_holds", report.counterexample_factor2_holds},
      {"counterexample_l1", report.counterexample_l1},
      {"counterexample_entropy", report.counterexample_entropy},
      {"sandwich_ok", report.sandwich_ok},
      {"sandwich_c1", report.sandwich_c1},
      {"sandwich_c2", report.sandwich_c2},
      {"lipschitz_ok", report.lipschitz_ok},
      {"alpha_stability_max_ratio", report.alpha_stability_max_ratio},
      {"alpha_stability_bound", report.alpha_stability_bound},
      {"alpha_stability_ok", report.alpha_stability_ok},
      {"l2l1_max_ratio", report.l2l1_max_ratio},
      {"l2l1_ok", report.l2l1_ok},
      {"all_ok", report.all_ok()}};
}

std::string ensure_dir(const std::string& path) {
  std::string p = path;
  while (p.size() > 1 && p.back() == '/') p.pop_back();
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace bifluid
