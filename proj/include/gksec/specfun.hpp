#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace gksec {

inline constexpr int kMaxLaguerreOrder = 64;

/// L-point Gauss-Laguerre rule for the weight e^{-x} on [0, inf).
struct GaussLaguerreRule {
    int order = 0;
    std::vector<double> nodes;    // strictly increasing, > 0
    std::vector<double> weights;  // > 0, summing to one
};

/// Nodes by Newton iteration on the three-term Laguerre recurrence, carried
/// out in extended precision. Throws InvalidArgument unless 1 <= L <= 64.
GaussLaguerreRule gauss_laguerre(int order);

/// ln Gamma(x) for x > 0; DomainError otherwise.
double ln_gamma(double x);

/// Regularized lower incomplete gamma P(s, x).
double gamma_p(double s, double x);

/// Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x), evaluated
/// without forming the difference where Q is the small quantity.
double gamma_q(double s, double x);

/// Non-regularized upper incomplete gamma Gamma(s, x), s > 0, x >= 0.
/// Series for x < s + 1, continued fraction otherwise.
double upper_inc_gamma(double s, double x);

/// ln Gamma(s, x); finite wherever Gamma(s, x) would underflow.
double log_upper_inc_gamma(double s, double x);

/// log(exp(a) + exp(b)) with -inf treated as an empty term.
inline double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_refinements = 5000;  // interval bisections
};

using Integrand = std::function<double(double)>;

/// Adaptive 15-point Gauss-Kronrod integration of f over [lower, inf).
///
/// The half line is mapped onto [0, 1) by x = lower + t / (1 - t), so the
/// integrand becomes f(x(t)) / (1 - t)^2. Intervals with the largest
/// Kronrod-Gauss discrepancy are bisected until the summed error is below
/// max(abs_tol, rel_tol * |estimate|). Throws ConvergenceError carrying the
/// best estimate when max_refinements is exhausted.
double integrate_semi_infinite(const Integrand& f, double lower, const QuadratureSpec& spec = {});

/// Same scheme on a finite interval [a, b].
double integrate_interval(const Integrand& f, double a, double b, const QuadratureSpec& spec = {});

}  // namespace gksec
