#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gksec/channel.hpp"
#include "gksec/secrecy.hpp"

namespace gksec {

/// One parameter tuple of the closed-form/quadrature equivalence grid.
struct GridPoint {
    ChannelParams d;
    ChannelParams e;
    SecrecyConfig cfg;
};

/// Pseudo-random tuples with k in {2,3,5}, m in {1,2,4} (drawn separately
/// for each link), gamma_bar_d log-uniform on [1, 1e4], gamma_bar_e uniform
/// on [0.5, 4], R_s on [0.5, 3] and mu on [0, 6].
std::vector<GridPoint> equivalence_grid(std::size_t count = 50, std::uint64_t seed = 2019);

/// Kolmogorov-Smirnov distance between the model CDF and the empirical CDF
/// of samples (sorted in place).
double ks_distance(const MixedGammaModel& model, std::vector<double>& samples);

/// Least-squares slope of log10(f) against log10(gamma_bar_d) over the dB
/// points given.
double loglog_slope(const std::function<double(double)>& sop_at_db,
                    const std::vector<double>& db_points);

enum class ValidationLevel { fast, full };

struct ValidateOptions {
    ValidationLevel level = ValidationLevel::fast;
    // Test hook: inflate one CDF weight of the normalization model.
    bool corrupt_mixture_coefficient = false;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

/// Runs the cross-method checks and writes one line per check:
///   check=<name> status=PASS|FAIL value=<v> tol=<t> detail="..."
std::vector<CheckResult> run_validate(const ValidateOptions& options, std::ostream& report);

}  // namespace gksec
