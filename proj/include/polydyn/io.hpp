#ifndef POLYDYN_IO_HPP
#define POLYDYN_IO_HPP

#include "polydyn/dynamics.hpp"
#include "polydyn/inverse_design.hpp"
#include "polydyn/scenarios.hpp"
#include "polydyn/types.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace polydyn {

/// Malformed input file; the message carries path and line number.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shortest-17-significant-digit decimal form; round-trips bit-exactly.
std::string format_double(double v);

// Matrices travel as CSV (one row per line, '.' decimal point regardless of
// locale) or JSON {"n", "m", "entries"} with row-major entries. read_matrix
// dispatches on the .json extension.
Matrix read_matrix_csv(const std::string& path);
Matrix read_matrix_json(const std::string& path);
Matrix read_matrix(const std::string& path);
void write_matrix_csv(const std::string& path, const Matrix& m);
void write_matrix_json(const std::string& path, const Matrix& m);

// A damping or centrality vector is a single CSV line (a single column is
// also accepted) or a JSON array. Centrality vectors export as one value
// per line.
Vector read_vector(const std::string& path);
void write_vector_csv(const std::string& path, const Vector& v);
void write_vector_csv_column(const std::string& path, const Vector& v);
void write_vector_json(const std::string& path, const Vector& v);

/// Columns k, node, dim, value (0-based indices), one line per recorded
/// entry, header included.
void write_trajectory_csv(const std::string& path, const Trajectory& t);

/// {"method", "v" (row-major or null), "x_inf", "diagnostics"}; iteration
/// diagnostics are included when a trajectory is supplied.
void write_limit_json(const std::string& path, const LimitResult& limit,
                      const Trajectory* trajectory = nullptr);

void write_classification_json(const std::string& path,
                               const ConvergenceClass& c);

/// {"feasible", "a" (or null), "per_node": [{"node", "code", "a"?}, ...]}.
void write_feasibility_json(const std::string& path,
                            const FeasibilityReport& report);

/// {"a", "X0" (nested rows), "residual"}.
void write_design_json(const std::string& path, const DesignSolution& sol);

/// Rows of bin_lo, bin_hi, count.
void write_histogram_csv(const std::string& path, const Histogram& h);

/// Strict parse of a scenario spec JSON file: unknown keys are rejected.
ScenarioSpec read_scenario_spec(const std::string& path);
void write_scenario_spec_json(const std::string& path, const ScenarioSpec& s);

}  // namespace polydyn

#endif
