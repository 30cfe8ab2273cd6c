#include "gpbog/serialization.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>

#include "gpbog/errors.hpp"

namespace gpbog {

namespace {

const json& field(const json& j, const std::string& name) {
  if (!j.is_object() || !j.contains(name)) throw ValidationError("missing JSON field '" + name + "'");
  return j.at(name);
}

template <class T>
T get(const json& j, const std::string& name) {
  try {
    return field(j, name).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError("JSON field '" + name + "' has the wrong type: " + e.what());
  }
}

json vec(const std::vector<double>& v) { return json(v); }

std::vector<double> vec_from(const json& j, const std::string& name) { return get<std::vector<double>>(j, name); }

}  // namespace

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
    rows.push_back(std::move(r));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& name) {
  if (!j.is_array()) throw ValidationError("JSON field '" + name + "' is not an array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  Eigen::MatrixXd m;
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& r = j[static_cast<std::size_t>(i)];
    if (!r.is_array()) throw ValidationError("JSON field '" + name + "' row is not an array");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(r.size());
      m.resize(n, cols);
    }
    if (static_cast<Eigen::Index>(r.size()) != cols) throw ValidationError("JSON field '" + name + "' is ragged");
    for (Eigen::Index k = 0; k < cols; ++k) {
      if (!r[static_cast<std::size_t>(k)].is_number())
        throw ValidationError("JSON field '" + name + "' holds a non-number");
      m(i, k) = r[static_cast<std::size_t>(k)].get<double>();
    }
  }
  return m;
}

// ---------------------------------------------------------------------------------------------------

json to_json(const RadialPotential& v) {
  json samples = json::array();
  for (const auto& [r, val] : v.samples) samples.push_back({r, val});
  return {{"kind", to_string(v.kind)}, {"V0", v.V0}, {"R0", v.R0}, {"samples", samples}};
}

RadialPotential radial_potential_from_json(const json& j) {
  RadialPotential v;
  v.kind = potential_kind_from_string(get<std::string>(j, "kind"));
  v.V0 = get<double>(j, "V0");
  v.R0 = get<double>(j, "R0");
  if (j.contains("samples"))
    for (const auto& s : field(j, "samples")) {
      if (!s.is_array() || s.size() != 2) throw ValidationError("potential sample must be an (r, V) pair");
      v.samples.emplace_back(s[0].get<double>(), s[1].get<double>());
    }
  v.validate();
  return v;
}

json to_json(const ScatteringSolution& s) {
  return {{"potential", to_json(s.potential)},
          {"r_grid", vec(s.r_grid)},
          {"u", vec(s.u)},
          {"du", vec(s.du)},
          {"a", s.a},
          {"a_quadrature", s.a_quadrature},
          {"match_radius", s.match_radius},
          {"step", s.step},
          {"support_index", s.support_index},
          {"fitted_C", s.fitted_C},
          {"node_r", vec(s.node_r)},
          {"node_w", vec(s.node_w)},
          {"node_v", vec(s.node_v)},
          {"node_f", vec(s.node_f)}};
}

ScatteringSolution scattering_from_json(const json& j) {
  ScatteringSolution s;
  s.potential = radial_potential_from_json(field(j, "potential"));
  s.r_grid = vec_from(j, "r_grid");
  s.u = vec_from(j, "u");
  s.du = vec_from(j, "du");
  s.a = get<double>(j, "a");
  s.a_quadrature = get<double>(j, "a_quadrature");
  s.match_radius = get<double>(j, "match_radius");
  s.step = get<double>(j, "step");
  s.support_index = get<std::size_t>(j, "support_index");
  s.fitted_C = get<double>(j, "fitted_C");
  s.node_r = vec_from(j, "node_r");
  s.node_w = vec_from(j, "node_w");
  s.node_v = vec_from(j, "node_v");
  s.node_f = vec_from(j, "node_f");
  if (s.u.size() != s.r_grid.size() || s.du.size() != s.r_grid.size())
    throw ValidationError("scattering arrays differ in length");
  for (std::size_t i = 1; i < s.r_grid.size(); ++i)
    if (!(s.r_grid[i] > s.r_grid[i - 1])) throw ValidationError("scattering radii are not ascending");
  if (s.support_index >= s.r_grid.size() && !s.r_grid.empty())
    throw ValidationError("support_index outside the radial grid");
  const std::size_t nn = s.node_r.size();
  if (s.node_w.size() != nn || s.node_v.size() != nn || s.node_f.size() != nn)
    throw ValidationError("quadrature node arrays differ in length");
  return s;
}

json to_json(const GapReport& g) {
  return {{"mu1", g.mu1},
          {"mu2", g.mu2},
          {"margin", g.margin},
          {"holds", g.holds},
          {"one_body_energy", g.one_body_energy},
          {"phi_inf2", g.phi_inf2},
          {"lambda_perp", g.lambda_perp},
          {"smallness_condition", g.smallness_condition},
          {"window_lo", g.window_lo},
          {"window_hi", g.window_hi}};
}

GapReport gap_report_from_json(const json& j) {
  GapReport g;
  g.mu1 = get<double>(j, "mu1");
  g.mu2 = get<double>(j, "mu2");
  g.margin = get<double>(j, "margin");
  g.holds = get<bool>(j, "holds");
  g.one_body_energy = get<double>(j, "one_body_energy");
  g.phi_inf2 = get<double>(j, "phi_inf2");
  g.lambda_perp = get<double>(j, "lambda_perp");
  g.smallness_condition = get<bool>(j, "smallness_condition");
  g.window_lo = get<double>(j, "window_lo");
  g.window_hi = get<double>(j, "window_hi");
  return g;
}

json gp_state_header(const GpState& s) {
  json j = {{"trap_kind", to_string(s.trap_kind)},
            {"boundary", to_string(s.boundary)},
            {"M", s.M},
            {"box_length", s.box_length},
            {"box_origin", s.box_origin},
            {"e_gp", s.e_gp},
            {"mu", s.mu},
            {"a", s.a},
            {"residual", s.residual},
            {"iterations", s.iterations},
            {"gap_report", s.gap_report ? to_json(*s.gap_report) : json(nullptr)},
            {"grid", {{"count", s.phi.size()}, {"dtype", "float64"}, {"byte_order", "little"}, {"axis_order", "x,y,z"}}}};
  return j;
}

GpState gp_state_from_json(const json& j, Eigen::VectorXd phi) {
  GpState s;
  s.trap_kind = trap_kind_from_string(get<std::string>(j, "trap_kind"));
  const auto b = get<std::string>(j, "boundary");
  if (b == to_string(Boundary::decaying_trap))
    s.boundary = Boundary::decaying_trap;
  else if (b == to_string(Boundary::periodic_torus))
    s.boundary = Boundary::periodic_torus;
  else
    throw ValidationError("unknown boundary '" + b + "'");
  s.M = get<int>(j, "M");
  s.box_length = get<double>(j, "box_length");
  s.box_origin = get<double>(j, "box_origin");
  s.e_gp = get<double>(j, "e_gp");
  s.mu = get<double>(j, "mu");
  s.a = get<double>(j, "a");
  s.residual = get<double>(j, "residual");
  s.iterations = get<int>(j, "iterations");
  const json& g = field(j, "gap_report");
  if (!g.is_null()) s.gap_report = gap_report_from_json(g);
  if (phi.size() != 0 && phi.size() != static_cast<Eigen::Index>(s.M) * s.M * s.M)
    throw ValidationError("grid dump does not hold M³ values");
  s.phi = std::move(phi);
  return s;
}

void write_raw_grid(std::ostream& out, const Eigen::VectorXd& values) {
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(values(i));
    unsigned char bytes[8];
    for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>(bits >> (8 * b));
    out.write(reinterpret_cast<const char*>(bytes), 8);
  }
  if (!out) throw ResourceError("failed writing grid dump", static_cast<std::size_t>(values.size()) * 8);
}

Eigen::VectorXd read_raw_grid(std::istream& in, std::size_t count) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw ValidationError("grid dump is truncated");
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
    v(static_cast<Eigen::Index>(i)) = std::bit_cast<double>(bits);
  }
  return v;
}

json to_json(const QuadraticHamiltonian& q) {
  return {{"dim", q.dim()},
          {"H", matrix_to_json(q.H)},
          {"K", matrix_to_json(q.K)},
          {"epsilon", q.epsilon},
          {"provenance", to_string(q.provenance)}};
}

QuadraticHamiltonian quadratic_from_json(const json& j) {
  const auto n = get<Eigen::Index>(j, "dim");
  Eigen::MatrixXd H = matrix_from_json(field(j, "H"), "H"), K = matrix_from_json(field(j, "K"), "K");
  if (H.rows() != n || K.rows() != n) throw ValidationError("matrix size disagrees with dim");
  const Provenance p = j.contains("provenance") ? provenance_from_string(get<std::string>(j, "provenance"))
                                                : Provenance::manual;
  return QuadraticHamiltonian::make(std::move(H), std::move(K), get<double>(j, "epsilon"), p);
}

json to_json(const QuasiFreePair& p) {
  return {{"dim", p.dim()}, {"gamma", matrix_to_json(p.gamma)}, {"alpha", matrix_to_json(p.alpha)}};
}

QuasiFreePair pair_from_json(const json& j) {
  const auto n = get<Eigen::Index>(j, "dim");
  Eigen::MatrixXd g = matrix_from_json(field(j, "gamma"), "gamma"), a = matrix_from_json(field(j, "alpha"), "alpha");
  if (g.rows() != n || a.rows() != n) throw ValidationError("matrix size disagrees with dim");
  return QuasiFreePair::make(std::move(g), std::move(a));
}

json to_json(const ManyBodyProblem& p) {
  return {{"basis", to_string(p.basis)},
          {"N", p.N},
          {"M", p.modes()},
          {"coupling", p.coupling},
          {"one_body", matrix_to_json(p.one_body)},
          {"two_body", p.two_body.data()},
          {"condensate", std::vector<double>(p.condensate.data(), p.condensate.data() + p.condensate.size())}};
}

ManyBodyProblem many_body_from_json(const json& j) {
  ManyBodyProblem p;
  p.basis = basis_kind_from_string(get<std::string>(j, "basis"));
  p.N = get<int>(j, "N");
  const int M = get<int>(j, "M");
  p.coupling = j.contains("coupling") ? get<double>(j, "coupling") : 0.0;
  p.one_body = matrix_from_json(field(j, "one_body"), "one_body");
  const auto w = vec_from(j, "two_body");
  if (w.size() != static_cast<std::size_t>(M) * M * M * M) throw ValidationError("two_body must hold M⁴ values");
  p.two_body = InteractionTensor(M);
  p.two_body.data() = w;
  const auto c = j.contains("condensate") ? vec_from(j, "condensate") : std::vector<double>{};
  p.condensate = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------------------------------

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_) throw ValidationError("CSV row has the wrong number of cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>)
            out_ << format_double(v);
          else
            out_ << v;
        },
        cells[i]);
  }
  out_ << '\n';
  ++rows_;
}

}  // namespace gpbog
