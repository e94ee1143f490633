#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gksec/rng.hpp"

namespace gksec {

inline constexpr int kDefaultMixtureOrder = 15;

/// One generalized-K link: shadowing shape k, multipath shape m and
/// average SNR gamma_bar (linear).
class ChannelParams {
public:
    /// Throws InvalidArgument unless k > 0, m >= 1 and gamma_bar > 0.
    ChannelParams(double k, int m, double gamma_bar);

    static ChannelParams from_db(double k, int m, double gamma_bar_db);

    double k() const { return k_; }
    int m() const { return m_; }
    double gamma_bar() const { return gamma_bar_; }

    ChannelParams with_gamma_bar(double gamma_bar) const { return {k_, m_, gamma_bar}; }

private:
    double k_;
    int m_;
    double gamma_bar_;
};

double db_to_linear(double db);

struct MixtureTerm {
    double a;     // PDF coefficient
    double zeta;  // rate
    double A;     // CDF weight, Gamma(m) a zeta^{-m}
};

/// L-term Gamma mixture standing in for the generalized-K density:
///   f(x) = sum_j a_j x^{m-1} exp(-zeta_j x)
///   F(x) = 1 - sum_j sum_{n<m} A_j (zeta_j x)^n exp(-zeta_j x) / n!
/// Immutable once built.
class MixedGammaModel {
public:
    /// Wraps coefficients without checking any invariant. Meant for fault
    /// injection and hand-built models; use fit_mixed_gamma otherwise.
    static MixedGammaModel unchecked(ChannelParams source, std::vector<MixtureTerm> terms);

    const ChannelParams& source() const { return source_; }
    int m() const { return source_.m(); }
    int order() const { return static_cast<int>(terms_.size()); }
    const std::vector<MixtureTerm>& terms() const { return terms_; }

    /// True when some A_j < 0, i.e. the mixture is a signed measure.
    bool has_negative_weights() const;

private:
    MixedGammaModel(ChannelParams source, std::vector<MixtureTerm> terms)
        : source_(source), terms_(std::move(terms)) {}

    ChannelParams source_;
    std::vector<MixtureTerm> terms_;
};

/// Fits the mixture from the L-point Gauss-Laguerre rule. Throws
/// ConsistencyError if either normalization invariant fails by more
/// than 1e-10.
MixedGammaModel fit_mixed_gamma(const ChannelParams& params, int order = kDefaultMixtureOrder);

struct NormalizationResiduals {
    double weight_sum;    // sum_j A_j - 1
    double pdf_integral;  // sum_j a_j Gamma(m) zeta_j^{-m} - 1
};

NormalizationResiduals normalization_residuals(const MixedGammaModel& model);

double eval_pdf(const MixedGammaModel& model, double x);
/// Evaluated as sum_j A_j P(m, zeta_j x) so that tiny CDF values keep
/// full relative precision.
double eval_cdf(const MixedGammaModel& model, double x);
/// Direct finite sum, never 1 - eval_cdf.
double eval_ccdf(const MixedGammaModel& model, double x);

/// Draws from the exact generalized-K law gamma_bar X Y / (k m) with
/// X ~ Gamma(k, 1), Y ~ Gamma(m, 1).
class ExactGkSampler {
public:
    explicit ExactGkSampler(const ChannelParams& params);
    double operator()(Rng& rng);

private:
    double scale_;
    std::gamma_distribution<double> shadowing_;
    std::gamma_distribution<double> multipath_;
};

/// Draws component j with probability A_j, then Gamma(m, 1/zeta_j).
/// Throws Unsupported if any A_j < 0.
class SurrogateSampler {
public:
    explicit SurrogateSampler(const MixedGammaModel& model);
    double operator()(Rng& rng);

private:
    std::discrete_distribution<std::size_t> component_;
    std::vector<std::gamma_distribution<double>> gammas_;
};

std::vector<double> sample_exact(const ChannelParams& params, std::size_t n, std::uint64_t seed);
std::vector<double> sample_surrogate(const MixedGammaModel& model, std::size_t n,
                                     std::uint64_t seed);

}  // namespace gksec
