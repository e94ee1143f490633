#include "gksec/montecarlo.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include "gksec/error.hpp"

namespace gksec {

namespace {

void validate(const McConfig& mc) {
    if (mc.samples < 1000) {
        std::ostringstream os;
        os << "monte carlo: samples must be >= 1000, got " << mc.samples;
        throw InvalidArgument(os.str());
    }
    if (mc.workers < 1) throw InvalidArgument("monte carlo: workers must be >= 1");
}

// Draws gamma_d and gamma_e from one worker stream.
class PairSource {
public:
    PairSource(const ChannelParams& d, const ChannelParams& e, const McConfig& mc) {
        if (mc.law == SampleLaw::exact_gk) {
            draw_d_ = [s = ExactGkSampler(d)](Rng& rng) mutable { return s(rng); };
            draw_e_ = [s = ExactGkSampler(e)](Rng& rng) mutable { return s(rng); };
        } else {
            draw_d_ = [s = SurrogateSampler(fit_mixed_gamma(d, mc.mixture_order))](
                          Rng& rng) mutable { return s(rng); };
            draw_e_ = [s = SurrogateSampler(fit_mixed_gamma(e, mc.mixture_order))](
                          Rng& rng) mutable { return s(rng); };
        }
    }

    std::pair<double, double> operator()(Rng& rng) {
        const double gd = draw_d_(rng);
        const double ge = draw_e_(rng);
        return {gd, ge};
    }

private:
    std::function<double(Rng&)> draw_d_;
    std::function<double(Rng&)> draw_e_;
};

// Runs `Counter` over the pair stream split across workers and merges the
// per-worker counters in worker order.
template <typename Counter>
Counter simulate(const ChannelParams& d, const ChannelParams& e, const McConfig& mc,
                 const Counter& prototype) {
    validate(mc);
    const unsigned workers = mc.workers;
    std::vector<Counter> partial(workers, prototype);
    // Build the samplers up front so fit errors surface on the caller's thread.
    std::vector<PairSource> sources;
    sources.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) sources.emplace_back(d, e, mc);

    auto run = [&](unsigned w) {
        const std::uint64_t share =
            mc.samples / workers + (w < mc.samples % workers ? 1 : 0);
        Rng rng = make_stream(mc.seed, w);
        Counter& counter = partial[w];
        PairSource& source = sources[w];
        for (std::uint64_t i = 0; i < share; ++i) {
            const auto [gd, ge] = source(rng);
            counter.add(gd, ge);
        }
    };

    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> threads;
        threads.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run, w);
    }

    Counter merged = prototype;
    for (const auto& c : partial) merged.merge(c);
    return merged;
}

McEstimate conditional_estimate(std::uint64_t leaks, std::uint64_t accepted,
                                std::uint64_t total) {
    if (accepted == 0) {
        throw EvaluationError(
            "mc_sop: no draw satisfied gamma_d > mu; the conditioning event is empty");
    }
    const double p = static_cast<double>(leaks) / static_cast<double>(accepted);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(accepted)), accepted, total};
}

struct GapCounter {
    double mu = 0.0;
    std::vector<double> lambda;
    std::vector<double> lambda_minus_one;
    std::uint64_t total = 0;
    std::uint64_t accepted = 0;
    std::vector<std::uint64_t> leaks_proposed;
    std::vector<std::uint64_t> leaks_conventional;

    void add(double gd, double ge) {
        ++total;
        const bool reliable = gd > mu;
        accepted += reliable;
        for (std::size_t r = 0; r < lambda.size(); ++r) {
            // C_e > C_d - R_s  <=>  gamma_d < lambda - 1 + lambda gamma_e
            const bool leak = gd < lambda_minus_one[r] + lambda[r] * ge;
            leaks_conventional[r] += leak;
            leaks_proposed[r] += leak && reliable;
        }
    }

    void merge(const GapCounter& other) {
        total += other.total;
        accepted += other.accepted;
        for (std::size_t r = 0; r < lambda.size(); ++r) {
            leaks_proposed[r] += other.leaks_proposed[r];
            leaks_conventional[r] += other.leaks_conventional[r];
        }
    }
};

GapCounter make_counter(double mu, const std::vector<double>& rates) {
    GapCounter c;
    c.mu = mu;
    for (double r : rates) {
        const SecrecyConfig cfg(r, mu);
        c.lambda.push_back(cfg.lambda());
        c.lambda_minus_one.push_back(cfg.lambda_minus_one());
    }
    c.leaks_proposed.assign(rates.size(), 0);
    c.leaks_conventional.assign(rates.size(), 0);
    return c;
}

}  // namespace

McEstimate mc_sop(const ChannelParams& d_params, const ChannelParams& e_params,
                  const SecrecyConfig& cfg, const McConfig& mc) {
    const GapCounter c =
        simulate(d_params, e_params, mc, make_counter(cfg.mu(), {cfg.rate_rs()}));
    return conditional_estimate(c.leaks_proposed[0], c.accepted, c.total);
}

McEstimate mc_sop_conventional(const ChannelParams& d_params, const ChannelParams& e_params,
                               double rate_rs, const McConfig& mc) {
    const GapCounter c = simulate(d_params, e_params, mc, make_counter(0.0, {rate_rs}));
    return conditional_estimate(c.leaks_conventional[0], c.total, c.total);
}

std::vector<GapPoint> mc_gap_curve(const ChannelParams& d_params, const ChannelParams& e_params,
                                   double mu, const std::vector<double>& rs_grid,
                                   const McConfig& mc) {
    if (rs_grid.empty()) throw InvalidArgument("mc_gap_curve: rate grid is empty");
    for (std::size_t i = 1; i < rs_grid.size(); ++i) {
        if (!(rs_grid[i] > rs_grid[i - 1])) {
            throw InvalidArgument("mc_gap_curve: rate grid must be strictly increasing");
        }
    }
    const GapCounter c = simulate(d_params, e_params, mc, make_counter(mu, rs_grid));
    std::vector<GapPoint> curve;
    curve.reserve(rs_grid.size());
    for (std::size_t r = 0; r < rs_grid.size(); ++r) {
        GapPoint p;
        p.rate_rs = rs_grid[r];
        p.proposed = conditional_estimate(c.leaks_proposed[r], c.accepted, c.total);
        p.conventional = conditional_estimate(c.leaks_conventional[r], c.total, c.total);
        p.gap = std::abs(p.conventional.value - p.proposed.value);
        curve.push_back(p);
    }
    return curve;
}

}  // namespace gksec
