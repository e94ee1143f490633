#include "gksec/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gksec/error.hpp"
#include "gksec/specfun.hpp"

namespace gksec {

ChannelParams::ChannelParams(double k, int m, double gamma_bar) : k_(k), m_(m), gamma_bar_(gamma_bar) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        std::ostringstream os;
        os << "channel: shadowing shape k must be positive and finite, got " << k;
        throw InvalidArgument(os.str());
    }
    if (m < 1) {
        std::ostringstream os;
        os << "channel: multipath shape m must be an integer >= 1, got " << m;
        throw InvalidArgument(os.str());
    }
    if (!(gamma_bar > 0.0) || !std::isfinite(gamma_bar)) {
        std::ostringstream os;
        os << "channel: average SNR must be positive and finite, got " << gamma_bar;
        throw InvalidArgument(os.str());
    }
}

ChannelParams ChannelParams::from_db(double k, int m, double gamma_bar_db) {
    return {k, m, db_to_linear(gamma_bar_db)};
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

MixedGammaModel MixedGammaModel::unchecked(ChannelParams source, std::vector<MixtureTerm> terms) {
    return {source, std::move(terms)};
}

bool MixedGammaModel::has_negative_weights() const {
    for (const auto& t : terms_) {
        if (t.A < 0.0) return true;
    }
    return false;
}

MixedGammaModel fit_mixed_gamma(const ChannelParams& params, int order) {
    const GaussLaguerreRule rule = gauss_laguerre(order);
    const double k = params.k();
    const double m = params.m();
    const double km = k * m;
    const double lgm = ln_gamma(m);
    const double log_const = std::log(km) - std::log(params.gamma_bar()) - lgm - ln_gamma(k);

    // theta_j = k m w_j t_j^{k-m-1} / (gamma_bar Gamma(m) Gamma(k)), kept as logs;
    // the Laguerre weights of high nodes are far below the double range of
    // the unnormalized products.
    std::vector<double> log_theta(order);
    std::vector<double> log_mass(order);  // ln(theta_j Gamma(m) zeta_j^{-m})
    std::vector<MixtureTerm> terms(order);
    double log_norm = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < order; ++j) {
        const double t = rule.nodes[j];
        terms[j].zeta = km / (t * params.gamma_bar());
        log_theta[j] = log_const + std::log(rule.weights[j]) + (k - m - 1.0) * std::log(t);
        log_mass[j] = log_theta[j] + lgm - m * std::log(terms[j].zeta);
        log_norm = log_add_exp(log_norm, log_mass[j]);
    }
    for (int j = 0; j < order; ++j) {
        terms[j].a = std::exp(log_theta[j] - log_norm);
        terms[j].A = std::exp(log_mass[j] - log_norm);
    }

    MixedGammaModel model = MixedGammaModel::unchecked(params, std::move(terms));
    const NormalizationResiduals r = normalization_residuals(model);
    if (!(std::abs(r.weight_sum) <= 1e-10) || !(std::abs(r.pdf_integral) <= 1e-10)) {
        std::ostringstream os;
        os << "fit_mixed_gamma: normalization violated (sum A - 1 = " << r.weight_sum
           << ", pdf mass - 1 = " << r.pdf_integral << ")";
        throw ConsistencyError(os.str());
    }
    return model;
}

NormalizationResiduals normalization_residuals(const MixedGammaModel& model) {
    const double m = model.m();
    const double gm = std::exp(ln_gamma(m));
    CompensatedSum weights;
    CompensatedSum mass;
    for (const auto& t : model.terms()) {
        weights += t.A;
        mass += t.a * gm * std::pow(t.zeta, -m);
    }
    return {weights.value() - 1.0, mass.value() - 1.0};
}

namespace {

void require_nonnegative(double x, const char* who) {
    if (!(x >= 0.0)) {
        std::ostringstream os;
        os << who << ": argument must be >= 0, got " << x;
        throw DomainError(os.str());
    }
}

// e^{-z} sum_{n<m} z^n / n!
double poisson_head(int m, double z) {
    double term = std::exp(-z);
    double sum = term;
    for (int n = 1; n < m; ++n) {
        term *= z / n;
        sum += term;
    }
    return sum;
}

}  // namespace

double eval_pdf(const MixedGammaModel& model, double x) {
    require_nonnegative(x, "eval_pdf");
    const int m = model.m();
    const double xm1 = m == 1 ? 1.0 : std::pow(x, m - 1);
    CompensatedSum sum;
    for (const auto& t : model.terms()) sum += t.a * xm1 * std::exp(-t.zeta * x);
    return sum.value();
}

double eval_cdf(const MixedGammaModel& model, double x) {
    require_nonnegative(x, "eval_cdf");
    const int m = model.m();
    CompensatedSum sum;
    for (const auto& t : model.terms()) sum += t.A * gamma_p(m, t.zeta * x);
    const double value = sum.value();
    if (value < -1e-9 || value > 1.0 + 1e-9) {
        std::ostringstream os;
        os << "eval_cdf: value " << value << " at x = " << x << " outside [0, 1]";
        throw EvaluationError(os.str());
    }
    return std::clamp(value, 0.0, 1.0);
}

double eval_ccdf(const MixedGammaModel& model, double x) {
    require_nonnegative(x, "eval_ccdf");
    const int m = model.m();
    CompensatedSum sum;
    for (const auto& t : model.terms()) sum += t.A * poisson_head(m, t.zeta * x);
    return sum.value();
}

ExactGkSampler::ExactGkSampler(const ChannelParams& params)
    : scale_(params.gamma_bar() / (params.k() * params.m())),
      shadowing_(params.k(), 1.0),
      multipath_(params.m(), 1.0) {}

double ExactGkSampler::operator()(Rng& rng) {
    const double x = shadowing_(rng);
    const double y = multipath_(rng);
    return scale_ * x * y;
}

namespace {

std::vector<double> mixture_probabilities(const MixedGammaModel& model) {
    if (model.has_negative_weights()) {
        throw Unsupported(
            "surrogate sampling: mixture has negative weights A_j (signed measure), cannot sample");
    }
    std::vector<double> p;
    p.reserve(model.terms().size());
    for (const auto& t : model.terms()) p.push_back(t.A);
    return p;
}

}  // namespace

SurrogateSampler::SurrogateSampler(const MixedGammaModel& model) {
    const auto p = mixture_probabilities(model);
    component_ = std::discrete_distribution<std::size_t>(p.begin(), p.end());
    gammas_.reserve(model.terms().size());
    for (const auto& t : model.terms()) gammas_.emplace_back(model.m(), 1.0 / t.zeta);
}

double SurrogateSampler::operator()(Rng& rng) {
    const std::size_t j = component_(rng);
    return gammas_[j](rng);
}

namespace {

template <typename Sampler>
std::vector<double> draw(Sampler sampler, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw InvalidArgument("sampling: n must be >= 1");
    Rng rng = make_stream(seed);
    std::vector<double> out(n);
    for (auto& v : out) v = sampler(rng);
    return out;
}

}  // namespace

std::vector<double> sample_exact(const ChannelParams& params, std::size_t n, std::uint64_t seed) {
    return draw(ExactGkSampler(params), n, seed);
}

std::vector<double> sample_surrogate(const MixedGammaModel& model, std::size_t n,
                                     std::uint64_t seed) {
    return draw(SurrogateSampler(model), n, seed);
}

}  // namespace gksec
