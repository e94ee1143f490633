#pragma once

#include <optional>
#include <string_view>

#include "gksec/channel.hpp"
#include "gksec/specfun.hpp"

namespace gksec {

/// Secrecy code rate R_s (bits per channel use) and reliability threshold
/// mu (linear SNR). lambda = 2^{R_s}.
class SecrecyConfig {
public:
    /// Throws InvalidArgument unless rate_rs >= 0 and mu >= 0 (both finite).
    SecrecyConfig(double rate_rs, double mu);

    double rate_rs() const { return rate_rs_; }
    double mu() const { return mu_; }
    double lambda() const { return lambda_; }
    /// lambda - 1 without cancellation for small rates.
    double lambda_minus_one() const;
    /// Smallest eavesdropper SNR that can produce a leakage event given
    /// gamma_d > mu: max(0, (mu + 1) / lambda - 1).
    double leakage_threshold() const;

private:
    double rate_rs_;
    double mu_;
    double lambda_;
};

enum class Method { closed_form, quadrature, monte_carlo, asymptotic };

std::string_view to_string(Method method);

struct SopEstimate {
    double value = 0.0;
    Method method = Method::closed_form;
    std::optional<double> std_error;  // monte_carlo only
};

struct AsymptoteReport {
    double diversity_order = 0.0;  // v = min(k_d, m_d)
    double coefficient = 0.0;      // C in SOP^inf = C gamma_bar_d^{-v}
    double array_gain = 0.0;       // C^{-1/v}
};

/// Secrecy outage probability Pr{C_e > C_d - R_s | gamma_d > mu} over the
/// two mixture models, in closed form (finite sums of upper incomplete
/// gamma functions).
///
/// Each (j_d, j_e) component pair contributes either the finite sum over
/// n < m_d of the closed form or its complementary Poisson tail n >= m_d,
/// whichever does not cancel; both are exact rearrangements of the same
/// expression. Terms are carried as logarithms.
SopEstimate sop_closed_form(const MixedGammaModel& d_model, const MixedGammaModel& e_model,
                            const SecrecyConfig& cfg);

/// Same probability by adaptive quadrature of
///   int_c^inf [F_d(lambda - 1 + lambda x) - F_d(mu)] f_e(x) dx / CCDF_d(mu).
/// spec.abs_tol applies to the unnormalized integral; pass a tiny abs_tol
/// when the outage probability itself is tiny.
SopEstimate sop_quadrature(const MixedGammaModel& d_model, const MixedGammaModel& e_model,
                           const SecrecyConfig& cfg, const QuadratureSpec& spec = {});

/// Unconditional outage Pr{gamma_d < lambda - 1 + lambda gamma_e}: the
/// closed form with mu = 0.
SopEstimate sop_conventional(const MixedGammaModel& d_model, const MixedGammaModel& e_model,
                             double rate_rs);

/// High-SNR asymptote C gamma_bar_d^{-v} from the leading term of the
/// main-link CDF. Requires k_d != m_d and an integer v = min(k_d, m_d).
/// The result is not clamped to [0, 1].
SopEstimate asop_closed_form(const ChannelParams& d_params, const MixedGammaModel& e_model,
                             const SecrecyConfig& cfg);

/// Asymptote by quadrature; any real v > 0 (k_d != m_d still required).
SopEstimate asop_quadrature(const ChannelParams& d_params, const MixedGammaModel& e_model,
                            const SecrecyConfig& cfg, const QuadratureSpec& spec = {});

/// Diversity order, coefficient and array gain. Uses the closed form for
/// integer v and quadrature otherwise.
AsymptoteReport asymptote_report(const ChannelParams& d_params, const MixedGammaModel& e_model,
                                 const SecrecyConfig& cfg);

}  // namespace gksec
