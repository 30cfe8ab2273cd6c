#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

#include "gpbog/errors.hpp"
#include "gpbog/homogeneous.hpp"
#include "gpbog/homogeneous_trial.hpp"
#include "gpbog/many_body.hpp"
#include "gpbog/quadratic.hpp"

namespace gpbog::cli {

namespace {

using Cell = CsvWriter::Cell;

void log(const RunConfig& cfg, const std::string& msg) {
  if (cfg.verbose) std::cerr << "[gpbog " << cfg.subcommand << "] " << msg << '\n';
}

// Scattering length from "a" when given, else from the configured potential.
double scattering_length(const json& j) {
  if (j.contains("a")) return number(j, "a", 0.0);
  if (j.contains("potential")) return scattering_from(j)->a;
  throw ValidationError("config needs either 'a' or a 'potential'");
}

Output scatter(const RunConfig& cfg) {
  const auto sol = scattering_from(cfg.body);
  const double ivf = scale(sol, 1.0).integral_vf();
  Output o;
  o.doc = {{"a", sol->a},
           {"a_quadrature", sol->a_quadrature},
           {"integral_vf", ivf},
           {"eight_pi_a", 8.0 * std::numbers::pi * sol->a},
           {"fitted_C", sol->fitted_C},
           {"potential", to_json(sol->potential)}};
  if (flag(cfg.body, "include_solution", false)) o.doc["solution"] = to_json(*sol);
  o.header = {"a", "a_quadrature", "integral_vf", "fitted_C"};
  o.rows.push_back({sol->a, sol->a_quadrature, ivf, sol->fitted_C});
  return o;
}

Output gp_like(const RunConfig& cfg, bool with_gap) {
  const TrapPotential trap = trap_from(cfg.body);
  const double a = scattering_length(cfg.body);
  GpOptions opt;
  opt.compute_gap = with_gap || flag(cfg.body, "compute_gap", false);
  opt.max_iterations = integer(cfg.body, "max_iterations", opt.max_iterations);
  log(cfg, "minimizing on " + std::to_string(trap.M) + "^3 grid");
  const GpState st = minimize_gp(trap, a, number(cfg.body, "tolerance", 1e-8), opt);
  Output o;
  o.doc = gp_state_header(st);
  if (cfg.body.contains("grid_dump")) {
    const std::string path = cfg.body.at("grid_dump").get<std::string>();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open grid dump " + path);
    write_raw_grid(out, st.phi);
    o.doc["grid"]["file"] = path;
  }
  if (with_gap && trap.boundary == Boundary::periodic_torus && flag(cfg.body, "window_boundary", false))
    o.doc["torus_window_boundary"] = torus_window_boundary(integer(cfg.body, "boundary_grid_points", 16));
  o.header = {"e_gp", "mu", "residual", "iterations"};
  std::vector<Cell> row{st.e_gp, st.mu, st.residual, static_cast<long long>(st.iterations)};
  if (st.gap_report) {
    for (const char* h : {"mu1", "mu2", "margin", "holds"}) o.header.emplace_back(h);
    row.insert(row.end(), {st.gap_report->mu1, st.gap_report->mu2, st.gap_report->margin,
                           static_cast<long long>(st.gap_report->holds)});
  }
  o.rows.push_back(std::move(row));
  return o;
}

Output quad_verify(const RunConfig& cfg) {
  SweepOptions opt;
  opt.seed = cfg.seed;
  opt.threads = cfg.threads;
  opt.n_instances = integer(cfg.body, "instances", opt.n_instances);
  opt.dim_min = integer(cfg.body, "dim_min", opt.dim_min);
  opt.dim_max = integer(cfg.body, "dim_max", opt.dim_max);
  opt.eps_min = number(cfg.body, "eps_min", opt.eps_min);
  opt.eps_max = number(cfg.body, "eps_max", opt.eps_max);
  log(cfg, "sweeping " + std::to_string(opt.n_instances) + " instances");
  const SweepReport rep = verify_theorem(opt);
  Output o;
  o.preferred = Format::csv;
  o.header = {"seed", "dim", "eps", "exact", "bound_half", "bound_quarter", "min_c_eps"};
  json buckets = json::array();
  for (const auto& b : rep.buckets)
    buckets.push_back({{"lo", b.lo}, {"hi", b.hi}, {"count", b.count}, {"max_c_eps", b.max_c_eps}});
  o.doc = {{"seed", cfg.seed},
           {"instances", rep.rows.size()},
           {"fitted_c_eps", rep.fitted_c_eps},
           {"violations_half", rep.violations_half},
           {"violations_quarter", rep.violations_quarter},
           {"buckets", buckets}};
  json rows = json::array();
  for (const auto& r : rep.rows) {
    o.rows.push_back({static_cast<long long>(r.seed), static_cast<long long>(r.dim), r.eps, r.exact, r.bound_half,
                      r.bound_quarter, r.min_c_eps});
    rows.push_back({{"seed", r.seed}, {"dim", r.dim}, {"eps", r.eps}, {"exact", r.exact}, {"bound_half", r.bound_half},
                    {"bound_quarter", r.bound_quarter}, {"min_c_eps", r.min_c_eps}});
  }
  o.doc["rows"] = rows;
  return o;
}

Output quad_assemble(const RunConfig& cfg) {
  const TrapPotential trap = trap_from(cfg.body);
  const auto sol = scattering_from(cfg.body);
  const double N = number(cfg.body, "N", 1.0);
  const int M = integer(cfg.body, "modes", 12);
  const GpState st = minimize_gp(trap, sol->a, number(cfg.body, "tolerance", 1e-8));
  const GapReport gap = gap_check(st, trap, sol->a);
  const double mu = number(cfg.body, "mu_energy", 0.5 * (gap.mu1 + gap.mu2));
  const ScaledScattering sc = scale(sol, N);
  const QuadraticHamiltonian qh = assemble_from_gp(st, trap, sc, mu, M);
  const double exact = ground_energy_exact(qh);
  const double reference = bogoliubov_reference(st, trap, sc);
  Output o;
  o.doc = {{"hamiltonian", to_json(qh)}, {"N", N},          {"mu", mu},
           {"exact", exact},              {"reference", reference},
           {"k_op", qh.k_op},             {"k_bound", qh.k_bound},
           {"lambda_min_H", qh.lambda_min_H}, {"admissible", qh.admissible}};
  if (qh.admissible) {
    const EnergyReport er = energy_report(qh, number(cfg.body, "c_eps", kDefaultCEps));
    o.doc["bound_half"] = er.bound_half;
    o.doc["bound_quarter"] = er.bound_quarter;
  }
  o.header = {"N", "mu", "exact", "reference", "k_op", "k_bound", "lambda_min_H"};
  o.rows.push_back({N, mu, exact, reference, qh.k_op, qh.k_bound, qh.lambda_min_H});
  return o;
}

Output homog(const RunConfig& cfg) {
  const auto sol = scattering_from(cfg.body);
  const auto Ns = number_list(cfg.body, "N_list", {50, 100, 200});
  std::optional<double> mu;
  if (cfg.body.contains("mu_energy")) mu = number(cfg.body, "mu_energy", 0.0);
  log(cfg, "lattice sums for " + std::to_string(Ns.size()) + " values of N");
  const DefectReport rep = plancherel_defect_sweep(sol, Ns, mu, cfg.threads);
  Output o;
  o.preferred = Format::csv;
  o.header = {"N", "sum", "reference", "defect", "tail_estimate", "mu"};
  json rows = json::array();
  for (const auto& r : rep.rows) {
    o.rows.push_back({r.N, r.sum, r.reference, r.defect, r.tail_estimate, r.mu});
    rows.push_back({{"N", r.N}, {"sum", r.sum}, {"reference", r.reference}, {"defect", r.defect},
                    {"tail_estimate", r.tail_estimate}, {"mu", r.mu}});
  }
  o.doc = {{"a", sol->a},
           {"slope", rep.slope},
           {"slope_stderr", rep.slope_stderr},
           {"max_abs_defect", rep.max_abs_defect},
           {"slope_consistent_with_zero", rep.slope_consistent_with_zero},
           {"bounded", rep.bounded},
           {"rows", rows}};
  return o;
}

Output trial_bound(const RunConfig& cfg) {
  const TrapPotential trap = trap_from(cfg.body);
  const auto sol = scattering_from(cfg.body);
  const GpState st = minimize_gp(trap, sol->a, number(cfg.body, "tolerance", 1e-8));
  TorusTrialOptions opt;
  opt.cut_factor = number(cfg.body, "cut_factor", opt.cut_factor);
  opt.radial_nodes = integer(cfg.body, "radial_nodes", opt.radial_nodes);
  const TrialReport rep =
      trial_upper_bound(st, trap, sol, integer(cfg.body, "modes", 0), number_list(cfg.body, "N_list", {8, 16, 32}), opt);
  Output o;
  o.preferred = Format::csv;
  o.header = {"N", "wick_energy", "N_e_gp", "defect", "trace_defect"};
  json rows = json::array();
  for (const auto& r : rep.rows) {
    o.rows.push_back({r.N, r.wick_energy, r.n_e_gp, r.defect, r.trace_defect});
    rows.push_back({{"N", r.N}, {"wick_energy", r.wick_energy}, {"N_e_gp", r.n_e_gp}, {"defect", r.defect},
                    {"trace_defect", r.trace_defect}, {"young_lhs", r.young_lhs}, {"young_rhs", r.young_rhs},
                    {"young_holds", r.young_holds}});
  }
  o.doc = {{"e_gp", st.e_gp},
           {"slope", rep.slope},
           {"slope_stderr", rep.slope_stderr},
           {"slope_nonpositive", rep.slope_nonpositive},
           {"young_all", rep.young_all},
           {"rows", rows}};
  return o;
}

ManyBodyProblem toy_problem(const json& j, int N, double coupling) {
  const std::string basis = j.contains("basis") ? j.at("basis").get<std::string>() : "torus_1d";
  const int M = integer(j, "modes", 5);
  const double width = number(j, "width_length", basis == "oscillator_modes" ? 0.5 : 0.1);
  switch (basis_kind_from_string(basis)) {
    case BasisKind::torus_1d: return torus_1d_problem(M, N, coupling, width, number(j, "box_length", 1.0));
    case BasisKind::torus_3d: return torus_3d_problem(M, N, coupling, width);
    case BasisKind::oscillator_modes: return oscillator_problem(M, N, coupling, width);
    case BasisKind::custom: break;
  }
  throw ValidationError("toy problems need basis torus_1d, torus_3d or oscillator_modes");
}

std::vector<ManyBodyProblem> problems(const RunConfig& cfg) {
  std::vector<ManyBodyProblem> out;
  if (cfg.body.contains("problem_path")) {
    std::ifstream in(cfg.body.at("__base").get<std::string>() + "/" + cfg.body.at("problem_path").get<std::string>());
    try {
      out.push_back(many_body_from_json(json::parse(in)));
    } catch (const json::exception& e) {
      throw ValidationError(std::string("problem file is not valid JSON: ") + e.what());
    }
    return out;
  }
  for (double N : number_list(cfg.body, "N_list", {number(cfg.body, "N", 4)}))
    for (double l : number_list(cfg.body, "coupling_list", {number(cfg.body, "coupling", 1.0)})) {
      if (N != std::floor(N) || N < 1) throw ValidationError("particle numbers must be positive integers");
      out.push_back(toy_problem(cfg.body, static_cast<int>(N), l));
    }
  return out;
}

EdOptions ed_options(const RunConfig& cfg) {
  EdOptions o;
  o.threads = cfg.threads;
  o.tol = number(cfg.body, "tolerance", o.tol);
  return o;
}

Output ed(const RunConfig& cfg) {
  Output o;
  o.preferred = Format::csv;
  o.header = {"N", "M", "lambda", "E_N", "depletion"};
  json rows = json::array();
  for (const auto& p : problems(cfg)) {
    log(cfg, "N = " + std::to_string(p.N) + ", M = " + std::to_string(p.modes()));
    const EdResult r = exact_diagonalize(p, ed_options(cfg));
    const double dep = p.condensate.size() ? condensation_report(p, r).depletion : std::nan("");
    o.rows.push_back({static_cast<long long>(p.N), static_cast<long long>(p.modes()), p.coupling, r.energy, dep});
    rows.push_back({{"N", p.N}, {"M", p.modes()}, {"lambda", p.coupling}, {"E_N", r.energy}, {"depletion", dep},
                    {"dim", r.dim}, {"gamma1_trace", r.gamma1.trace()}});
  }
  o.doc = {{"rows", rows}};
  return o;
}

Output sandwich_cmd(const RunConfig& cfg) {
  Output o;
  o.preferred = Format::csv;
  o.header = {"N", "M", "lambda", "E_N", "depletion", "trial_energy", "c", "C"};
  json rows = json::array();
  SandwichOptions so;
  so.C = number(cfg.body, "C_energy", 1.0);
  if (cfg.body.contains("c_energy")) so.c = number(cfg.body, "c_energy", 0.0);
  so.ed = ed_options(cfg);
  for (const auto& p : problems(cfg)) {
    const double e = hartree_energy(p);
    const QuasiFreePair pair = from_kernel({toy_kernel(p), static_cast<double>(p.N)}, p.condensate);
    const SandwichReport r = sandwich(p, e, pair, so);
    const double dep = condensation_report(p, exact_diagonalize(p, so.ed)).depletion;
    o.rows.push_back({static_cast<long long>(p.N), static_cast<long long>(p.modes()), p.coupling, r.E_N, dep,
                      r.trial_energy, r.c_best, r.C});
    rows.push_back({{"N", p.N},
                    {"M", p.modes()},
                    {"lambda", p.coupling},
                    {"E_N", r.E_N},
                    {"depletion", dep},
                    {"trial_energy", r.trial_energy},
                    {"wick_energy", r.wick_energy},
                    {"trace_defect", r.trace_defect},
                    {"variational_holds", r.variational_holds},
                    {"gp_energy_analog", e},
                    {"c", r.c_best},
                    {"C", r.C},
                    {"c_supplied", r.c_supplied},
                    {"supplied_holds", r.supplied_holds},
                    {"one_body_gap", r.one_body_gap}});
  }
  o.doc = {{"rows", rows}};
  return o;
}

}  // namespace

const std::map<std::string, std::pair<std::string, Command>>& commands() {
  static const std::map<std::string, std::pair<std::string, Command>> table = {
      {"scatter", {"scattering length of a radial potential", scatter}},
      {"gp", {"GP ground state on a trap or the torus", [](const RunConfig& c) { return gp_like(c, false); }}},
      {"gap", {"GP state with the chemical-potential window", [](const RunConfig& c) { return gp_like(c, true); }}},
      {"quad-verify", {"random sweep of the quadratic lower bounds", quad_verify}},
      {"quad-assemble", {"Bogoliubov quadratic form from a GP state", quad_assemble}},
      {"homog", {"homogeneous lattice sum against the Plancherel reference", homog}},
      {"ed", {"exact diagonalization of a toy many-body problem", ed}},
      {"trial-bound", {"quasi-free trial energy sweep", trial_bound}},
      {"sandwich", {"ED energy between trial and shifted lower bounds", sandwich_cmd}},
  };
  return table;
}

}  // namespace gpbog::cli
