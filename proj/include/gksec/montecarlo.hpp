#pragma once

#include <cstdint>
#include <vector>

#include "gksec/channel.hpp"
#include "gksec/secrecy.hpp"

namespace gksec {

enum class SampleLaw { exact_gk, surrogate_mixture };

struct McConfig {
    std::uint64_t samples = 10'000'000;  // >= 1000
    std::uint64_t seed = 1;
    SampleLaw law = SampleLaw::exact_gk;
    unsigned workers = 1;
    int mixture_order = kDefaultMixtureOrder;  // used by surrogate_mixture only
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t accepted = 0;  // draws with gamma_d > mu
    std::uint64_t total = 0;
};

/// Conditional leakage frequency among draws with gamma_d > mu.
/// Worker w draws its share of the pairs from stream (seed, w), so results
/// are bit-identical for a fixed (seed, workers). Throws EvaluationError
/// when no draw satisfies gamma_d > mu.
McEstimate mc_sop(const ChannelParams& d_params, const ChannelParams& e_params,
                  const SecrecyConfig& cfg, const McConfig& mc);

/// Unconditional frequency of gamma_d < lambda - 1 + lambda gamma_e.
McEstimate mc_sop_conventional(const ChannelParams& d_params, const ChannelParams& e_params,
                               double rate_rs, const McConfig& mc);

struct GapPoint {
    double rate_rs = 0.0;
    McEstimate proposed;
    McEstimate conventional;
    double gap = 0.0;  // |conventional - proposed|
};

/// Both definitions at every rate from one shared set of draws.
/// rs_grid must be nonempty and strictly increasing.
std::vector<GapPoint> mc_gap_curve(const ChannelParams& d_params, const ChannelParams& e_params,
                                   double mu, const std::vector<double>& rs_grid,
                                   const McConfig& mc);

}  // namespace gksec
