#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <variant>
#include <vector>

#include "gpbog/gp_solver.hpp"
#include "gpbog/many_body.hpp"
#include "gpbog/quadratic.hpp"
#include "gpbog/quasifree.hpp"
#include "gpbog/scattering.hpp"

namespace gpbog {

using json = nlohmann::json;

// Malformed documents raise ValidationError naming the offending field.

json to_json(const RadialPotential& v);
RadialPotential radial_potential_from_json(const json& j);

json to_json(const ScatteringSolution& s);
ScatteringSolution scattering_from_json(const json& j);

json to_json(const GapReport& g);
GapReport gap_report_from_json(const json& j);

/// Scalar header of a GP state; the grid itself goes to a raw dump.
json gp_state_header(const GpState& s);
/// Header plus grid; `phi` must hold M³ values (or be empty when no dump exists).
GpState gp_state_from_json(const json& header, Eigen::VectorXd phi = {});

/// Row-major M³ grid, axis order x, y, z, little-endian IEEE 754 binary64.
void write_raw_grid(std::ostream& out, const Eigen::VectorXd& values);
Eigen::VectorXd read_raw_grid(std::istream& in, std::size_t count);

json to_json(const QuadraticHamiltonian& q);
QuadraticHamiltonian quadratic_from_json(const json& j);

json to_json(const QuasiFreePair& p);
QuasiFreePair pair_from_json(const json& j);

json to_json(const ManyBodyProblem& p);
ManyBodyProblem many_body_from_json(const json& j);

/// Row-major nested arrays.
json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j, const std::string& field);

/// 17 significant digits, so the text reads back to the same double.
std::string format_double(double x);

/// Comma-separated rows with a header, '\n' line ends and round-trip precision floats.
class CsvWriter {
 public:
  using Cell = std::variant<double, long long, std::string>;
  CsvWriter(std::ostream& out, std::vector<std::string> header);
  void row(const std::vector<Cell>& cells);
  std::size_t rows() const { return rows_; }

 private:
  std::ostream& out_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

}  // namespace gpbog
