#include "gksec/secrecy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "gksec/error.hpp"

namespace gksec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kRangeSlack = 1e-9;
constexpr double kNullEvent = 1e-300;
constexpr int kMaxTailTerms = 100000;

}  // namespace

SecrecyConfig::SecrecyConfig(double rate_rs, double mu) : rate_rs_(rate_rs), mu_(mu) {
    if (!(rate_rs >= 0.0) || !std::isfinite(rate_rs)) {
        std::ostringstream os;
        os << "secrecy: rate R_s must be finite and >= 0, got " << rate_rs;
        throw InvalidArgument(os.str());
    }
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        std::ostringstream os;
        os << "secrecy: threshold mu must be finite and >= 0, got " << mu;
        throw InvalidArgument(os.str());
    }
    lambda_ = std::pow(2.0, rate_rs);
}

double SecrecyConfig::lambda_minus_one() const { return std::expm1(rate_rs_ * std::log(2.0)); }

double SecrecyConfig::leakage_threshold() const {
    return std::max(0.0, (mu_ + 1.0) / lambda_ - 1.0);
}

std::string_view to_string(Method method) {
    switch (method) {
        case Method::closed_form: return "closed_form";
        case Method::quadrature: return "quadrature";
        case Method::monte_carlo: return "monte_carlo";
        case Method::asymptotic: return "asymptotic";
    }
    return "unknown";
}

namespace {

double checked_probability(double value, const char* who) {
    if (!std::isfinite(value) || value < -kRangeSlack || value > 1.0 + kRangeSlack) {
        std::ostringstream os;
        os << who << ": result " << value << " is not a probability";
        throw EvaluationError(os.str());
    }
    return std::clamp(value, 0.0, 1.0);
}

double checked_denominator(const MixedGammaModel& d_model, double mu, const char* who) {
    const double ccdf = eval_ccdf(d_model, mu);
    if (!(ccdf >= kNullEvent)) {
        std::ostringstream os;
        os << who << ": Pr{gamma_d > mu} = " << ccdf
           << " is numerically zero; the conditional outage is undefined";
        throw EvaluationError(os.str());
    }
    return ccdf;
}

// e^{-z} sum_{n<m} z^n / n!, i.e. Q(m, z) for integer m.
double poisson_head(int m, double z) {
    double term = std::exp(-z);
    double sum = term;
    for (int n = 1; n < m; ++n) {
        term *= z / n;
        sum += term;
    }
    return sum;
}

[[noreturn]] void throw_bad_term(int jd, int nd, int je, int f, double log_value) {
    std::ostringstream os;
    os << "sop_closed_form: non-finite term (j_d=" << jd << ", n_d=" << nd << ", j_e=" << je
       << ", f=" << f << "), log value " << log_value;
    throw EvaluationError(os.str());
}

// Closed-form contribution of one (j_d, j_e) pair, normalized so that the
// outage numerator is sum A_{d,j_d} A_{e,j_e} * value.
//
// With y(x) = lambda - 1 + lambda x and X ~ Gamma(m_e, rate zeta_e),
//   T_n = E[ e^{-zeta_d y(X)} (zeta_d y(X))^n / n! ; X > c ]
//       = zeta_d^n e^{-zeta_d (lambda-1)} sum_f lambda^f (lambda-1)^{n-f} / (f! (n-f)!)
//         * Gamma(m_e + f, B c) zeta_e^{m_e} / (Gamma(m_e) B^{m_e + f}),
// B = zeta_e + lambda zeta_d. The pair value is
//   Q(m_d, zeta_d mu) Q(m_e, zeta_e c) - sum_{n < m_d} T_n
// or equivalently
//   sum_{n >= m_d} T_n - P(m_d, zeta_d mu) Q(m_e, zeta_e c).
class PairTerms {
public:
    PairTerms(int jd, int je, double zeta_d, int m_d, double zeta_e, int m_e,
              const SecrecyConfig& cfg)
        : jd_(jd), je_(je), zeta_d_(zeta_d), m_d_(m_d), m_e_(m_e), c_(cfg.leakage_threshold()) {
        const double lambda = cfg.lambda();
        const double lm1 = cfg.lambda_minus_one();
        log_lambda_ = std::log(lambda);
        log_lm1_ = lm1 > 0.0 ? std::log(lm1) : kNegInf;
        b_ = zeta_e + lambda * zeta_d;
        log_b_ = std::log(b_);
        bc_ = b_ * c_;
        log_bc_ = bc_ > 0.0 ? std::log(bc_) : kNegInf;
        prefix_ = -zeta_d * lm1;
        log_zeta_d_ = std::log(zeta_d);
        log_norm_e_ = m_e * std::log(zeta_e) - ln_gamma(m_e);
    }

    double log_term(int n) {
        while (static_cast<int>(u_.size()) <= n) extend_u();
        while (static_cast<int>(v_.size()) <= n) {
            const int j = static_cast<int>(v_.size());
            v_.push_back(j == 0 ? 0.0 : j * log_lm1_ - ln_gamma(j + 1.0));
        }
        double hi = kNegInf;
        for (int f = 0; f <= n; ++f) hi = std::max(hi, u_[f] + v_[n - f]);
        if (hi == kNegInf) return kNegInf;
        double acc = 0.0;
        for (int f = 0; f <= n; ++f) {
            const double e = u_[f] + v_[n - f];
            if (std::isnan(e)) throw_bad_term(jd_, n, je_, f, e);
            acc += std::exp(e - hi);
        }
        const double result = n * log_zeta_d_ + prefix_ + hi + std::log(acc);
        if (std::isnan(result) || result == std::numeric_limits<double>::infinity()) {
            throw_bad_term(jd_, n, je_, -1, result);
        }
        return result;
    }

private:
    // u_f = ln[ lambda^f Gamma(m_e + f, B c) zeta_e^{m_e} / (f! Gamma(m_e) B^{m_e + f}) ]
    void extend_u() {
        const int f = static_cast<int>(u_.size());
        const double s = m_e_ + f;
        if (f == 0) {
            log_upper_ = log_upper_inc_gamma(s, bc_);
        } else {
            // Gamma(s, x) = (s - 1) Gamma(s - 1, x) + x^{s-1} e^{-x}; every term is positive.
            const double prev = s - 1.0;
            const double power = bc_ > 0.0 ? prev * log_bc_ - bc_ : kNegInf;
            log_upper_ = log_add_exp(std::log(prev) + log_upper_, power);
        }
        const double u = f * log_lambda_ + log_upper_ - s * log_b_ - ln_gamma(f + 1.0) + log_norm_e_;
        if (std::isnan(u) || u == std::numeric_limits<double>::infinity()) {
            throw_bad_term(jd_, -1, je_, f, u);
        }
        u_.push_back(u);
    }

    int jd_;
    int je_;
    double zeta_d_;
    int m_d_;
    int m_e_;
    double c_;
    double log_lambda_ = 0.0;
    double log_lm1_ = 0.0;
    double b_ = 0.0;
    double log_b_ = 0.0;
    double bc_ = 0.0;
    double log_bc_ = 0.0;
    double prefix_ = 0.0;
    double log_zeta_d_ = 0.0;
    double log_norm_e_ = 0.0;
    double log_upper_ = 0.0;
    std::vector<double> u_;
    std::vector<double> v_;
};

double pair_value(int jd, int je, const MixtureTerm& d, int m_d, const MixtureTerm& e, int m_e,
                  const SecrecyConfig& cfg) {
    const double c = cfg.leakage_threshold();
    const double mu = cfg.mu();
    const double e_tail = poisson_head(m_e, e.zeta * c);
    PairTerms terms(jd, je, d.zeta, m_d, e.zeta, m_e, cfg);

    // Representative main-link SNR at the eavesdropper's typical leakage
    // point decides which side of the Poisson split is small.
    const double y_typ = cfg.lambda_minus_one() + cfg.lambda() * (c + m_e / e.zeta);
    const bool tail_small = gamma_p(m_d, d.zeta * y_typ) < 0.5;

    if (!tail_small) {
        CompensatedSum head;
        for (int n = 0; n < m_d; ++n) head += std::exp(terms.log_term(n));
        return poisson_head(m_d, d.zeta * mu) * e_tail - head.value();
    }

    CompensatedSum tail;
    double previous = std::numeric_limits<double>::infinity();
    for (int n = m_d;; ++n) {
        if (n - m_d > kMaxTailTerms) {
            std::ostringstream os;
            os << "sop_closed_form: Poisson tail for pair (j_d=" << jd << ", j_e=" << je
               << ") did not converge";
            throw EvaluationError(os.str());
        }
        const double term = std::exp(terms.log_term(n));
        tail += term;
        const bool settled = n > m_d + 1 && term <= previous && term <= 1e-18 * tail.value();
        previous = term;
        if (settled) break;
    }
    return tail.value() - gamma_p(m_d, d.zeta * mu) * e_tail;
}

}  // namespace

SopEstimate sop_closed_form(const MixedGammaModel& d_model, const MixedGammaModel& e_model,
                            const SecrecyConfig& cfg) {
    const double denominator = checked_denominator(d_model, cfg.mu(), "sop_closed_form");
    const int m_d = d_model.m();
    const int m_e = e_model.m();
    const auto& dt = d_model.terms();
    const auto& et = e_model.terms();

    CompensatedSum numerator;
    for (int jd = 0; jd < static_cast<int>(dt.size()); ++jd) {
        for (int je = 0; je < static_cast<int>(et.size()); ++je) {
            const double weight = dt[jd].A * et[je].A;
            if (weight == 0.0) continue;
            numerator += weight * pair_value(jd, je, dt[jd], m_d, et[je], m_e, cfg);
        }
    }
    return {checked_probability(numerator.value() / denominator, "sop_closed_form"),
            Method::closed_form, std::nullopt};
}

SopEstimate sop_conventional(const MixedGammaModel& d_model, const MixedGammaModel& e_model,
                             double rate_rs) {
    return sop_closed_form(d_model, e_model, SecrecyConfig(rate_rs, 0.0));
}

namespace {

// F_d(y) - F_d(mu), each component differenced on whichever of P or Q is
// the small side at mu.
class CdfIncrement {
public:
    CdfIncrement(const MixedGammaModel& model, double mu) : model_(model) {
        for (const auto& t : model.terms()) {
            const double p = gamma_p(model.m(), t.zeta * mu);
            use_lower_.push_back(p < 0.5);
            at_mu_.push_back(p < 0.5 ? p : gamma_q(model.m(), t.zeta * mu));
        }
    }

    double operator()(double y) const {
        CompensatedSum sum;
        const auto& terms = model_.terms();
        for (std::size_t j = 0; j < terms.size(); ++j) {
            const double z = terms[j].zeta * y;
            const double diff = use_lower_[j] ? gamma_p(model_.m(), z) - at_mu_[j]
                                              : at_mu_[j] - gamma_q(model_.m(), z);
            sum += terms[j].A * diff;
        }
        return sum.value();
    }

private:
    const MixedGammaModel& model_;
    std::vector<bool> use_lower_;
    std::vector<double> at_mu_;
};

}  // namespace

SopEstimate sop_quadrature(const MixedGammaModel& d_model, const MixedGammaModel& e_model,
                           const SecrecyConfig& cfg, const QuadratureSpec& spec) {
    const double denominator = checked_denominator(d_model, cfg.mu(), "sop_quadrature");
    const double lm1 = cfg.lambda_minus_one();
    const double lambda = cfg.lambda();
    const CdfIncrement increment(d_model, cfg.mu());
    auto integrand = [&](double x) {
        return increment(lm1 + lambda * x) * eval_pdf(e_model, x);
    };
    const double numerator = integrate_semi_infinite(integrand, cfg.leakage_threshold(), spec);
    return {checked_probability(numerator / denominator, "sop_quadrature"), Method::quadrature,
            std::nullopt};
}

namespace {

struct AsymptoticLaw {
    double order;  // v
    double scale;  // Gamma(|k-m|) (k m)^v / (Gamma(k) Gamma(m) v)
};

AsymptoticLaw asymptotic_law(const ChannelParams& d, const char* who) {
    const double k = d.k();
    const double m = d.m();
    if (k == m) {
        std::ostringstream os;
        os << who << ": unsupported case k_d == m_d (= " << k
           << "); the high-SNR CDF expansion used here only covers m_d != k_d. "
              "The exact SOP (closed form or quadrature) is still available.";
        throw Unsupported(os.str());
    }
    const double v = std::min(k, m);
    const double log_scale =
        ln_gamma(std::abs(k - m)) + v * std::log(k * m) - ln_gamma(k) - ln_gamma(m) - std::log(v);
    return {v, std::exp(log_scale)};
}

double asop_coefficient_closed(const ChannelParams& d_params, const MixedGammaModel& e_model,
                               const SecrecyConfig& cfg) {
    const AsymptoticLaw law = asymptotic_law(d_params, "asop_closed_form");
    if (law.order != std::floor(law.order)) {
        std::ostringstream os;
        os << "asop_closed_form: diversity order v = " << law.order
           << " is not an integer, so the binomial expansion does not terminate; "
              "use asop_quadrature";
        throw Unsupported(os.str());
    }
    const int v = static_cast<int>(law.order);
    const int m_e = e_model.m();
    const double c = cfg.leakage_threshold();
    const double lambda = cfg.lambda();
    const double lm1 = cfg.lambda_minus_one();
    const double lgm_e = ln_gamma(m_e);

    CompensatedSum bracket;
    double binom = 1.0;
    for (int f = 0; f <= v; ++f) {
        if (f > 0) binom = binom * (v - f + 1) / f;
        // sum_je a_je Gamma(m_e + f, zeta c) / zeta^{m_e + f}, written with A_je.
        CompensatedSum moment;
        for (const auto& t : e_model.terms()) {
            moment += t.A * std::exp(log_upper_inc_gamma(m_e + f, t.zeta * c) - lgm_e -
                                     f * std::log(t.zeta));
        }
        bracket += binom * std::pow(lm1, v - f) * std::pow(lambda, f) * moment.value();
    }
    bracket += -std::pow(cfg.mu(), v) * eval_ccdf(e_model, c);
    return law.scale * bracket.value();
}

double asop_coefficient_quadrature(const ChannelParams& d_params, const MixedGammaModel& e_model,
                                   const SecrecyConfig& cfg, const QuadratureSpec& spec) {
    const AsymptoticLaw law = asymptotic_law(d_params, "asop_quadrature");
    const double lm1 = cfg.lambda_minus_one();
    const double lambda = cfg.lambda();
    const double mu_pow = std::pow(cfg.mu(), law.order);
    auto integrand = [&](double x) {
        return (std::pow(lm1 + lambda * x, law.order) - mu_pow) * eval_pdf(e_model, x);
    };
    return law.scale * integrate_semi_infinite(integrand, cfg.leakage_threshold(), spec);
}

SopEstimate scaled_asymptote(double coefficient, const ChannelParams& d_params, const char* who) {
    const double v = std::min(d_params.k(), static_cast<double>(d_params.m()));
    const double value = coefficient * std::pow(d_params.gamma_bar(), -v);
    if (!std::isfinite(value)) {
        std::ostringstream os;
        os << who << ": non-finite asymptote " << value;
        throw EvaluationError(os.str());
    }
    return {value, Method::asymptotic, std::nullopt};
}

}  // namespace

SopEstimate asop_closed_form(const ChannelParams& d_params, const MixedGammaModel& e_model,
                             const SecrecyConfig& cfg) {
    return scaled_asymptote(asop_coefficient_closed(d_params, e_model, cfg), d_params,
                            "asop_closed_form");
}

SopEstimate asop_quadrature(const ChannelParams& d_params, const MixedGammaModel& e_model,
                            const SecrecyConfig& cfg, const QuadratureSpec& spec) {
    return scaled_asymptote(asop_coefficient_quadrature(d_params, e_model, cfg, spec), d_params,
                            "asop_quadrature");
}

AsymptoteReport asymptote_report(const ChannelParams& d_params, const MixedGammaModel& e_model,
                                 const SecrecyConfig& cfg) {
    const AsymptoticLaw law = asymptotic_law(d_params, "asymptote_report");
    const bool integer_order = law.order == std::floor(law.order);
    QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    spec.abs_tol = 1e-300;

    auto evaluate = [&](double gamma_bar) {
        const ChannelParams at = d_params.with_gamma_bar(gamma_bar);
        return integer_order ? asop_closed_form(at, e_model, cfg).value
                             : asop_quadrature(at, e_model, cfg, spec).value;
    };
    constexpr double kRef1 = 1e5;
    constexpr double kRef2 = 1e6;
    const double c1 = evaluate(kRef1) * std::pow(kRef1, law.order);
    const double c2 = evaluate(kRef2) * std::pow(kRef2, law.order);
    if (!(std::abs(c1 - c2) <= 1e-10 * std::abs(c1))) {
        std::ostringstream os;
        os << "asymptote_report: coefficient not SNR-independent (" << c1 << " vs " << c2 << ")";
        throw ConsistencyError(os.str());
    }
    if (!(c1 > 0.0)) {
        std::ostringstream os;
        os << "asymptote_report: non-positive asymptotic coefficient " << c1;
        throw EvaluationError(os.str());
    }
    return {law.order, c1, std::pow(c1, -1.0 / law.order)};
}

}  // namespace gksec
