#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gksec/specfun.hpp"

namespace gksec {

/// Output columns, in CSV order.
enum class Column { closed, quadrature, asymptotic, mc, conventional };

/// Flat description of one figure-style run. Field names double as the
/// config-file keys and the CLI flag names. SNRs are in dB.
struct SweepSpec {
    double d_k = 3.0;
    int d_m = 2;
    double d_gamma_bar_db = 20.0;
    double e_k = 3.0;
    int e_m = 2;
    double e_gamma_bar_db = 0.0;
    double rate_rs = 1.0;
    double mu = 3.0;
    int L = 15;
    std::uint64_t mc_samples = 10'000'000;
    std::uint64_t seed = 1;
    unsigned mc_workers = 1;
    std::vector<std::string> methods = {"closed"};
    // Swept variable: d_gamma_bar_db, e_gamma_bar_db, rate_rs or mu.
    std::string sweep;
    double sweep_start = 0.0;
    double sweep_end = 0.0;
    double sweep_step = 1.0;
    unsigned threads = 0;  // 0: hardware concurrency
};

std::vector<Column> parse_methods(const std::vector<std::string>& names);

/// Throws InvalidArgument on any malformed field. A sweep spec must name
/// exactly one swept variable with start < end and step > 0.
void validate_spec(const SweepSpec& spec, bool require_sweep);

/// Grid start, start + step, ... up to end (inclusive within 1e-9 step).
std::vector<double> sweep_values(const SweepSpec& spec);

/// Copy of spec with the swept variable set to value.
SweepSpec at_value(const SweepSpec& spec, double value);

struct SweepRow {
    double x = 0.0;  // swept-variable value in its input unit
    std::optional<double> closed;
    std::optional<double> quadrature;
    std::optional<double> asymptotic;
    std::optional<double> mc;
    std::optional<double> mc_stderr;
    std::optional<double> conventional;
    std::optional<double> gap;  // |conventional - closed| when both requested
    std::string error;          // non-empty when the point failed
    int exit_code = 0;
};

/// Quadrature settings used for the quadrature column.
QuadratureSpec cli_quadrature_spec();

/// Evaluates every requested method at the point described by spec (the
/// swept variable, if any, is ignored). Errors propagate.
SweepRow run_point(const SweepSpec& spec);

std::vector<std::string> csv_header(const SweepSpec& spec);
void write_csv_header(std::ostream& out, const SweepSpec& spec);
void write_csv_row(std::ostream& out, const SweepSpec& spec, const SweepRow& row);

/// Shortest decimal form with 17 significant digits.
std::string format_double(double value);

struct SweepResult {
    std::vector<SweepRow> rows;
    std::size_t failures = 0;
    int exit_code = 0;  // 0, or the most severe code among failed points
};

/// Evaluates every grid point on a bounded worker pool and writes the CSV
/// (header first, rows in ascending swept value). Failed points become
/// empty cells.
SweepResult run_sweep(const SweepSpec& spec, std::ostream& csv);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::optional<double>>> rows;
};

CsvTable read_csv(std::istream& in);

/// Process exit code for an error: 1 for configuration problems
/// (InvalidArgument, DomainError, Unsupported), 2 for numerical failures.
int exit_code_for(const std::exception& error);

}  // namespace gksec
