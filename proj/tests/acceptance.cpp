// Acceptance gate: one PASS/FAIL line per criterion. Run with
// --criterion N for a single one, or without arguments for all.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gksec/channel.hpp"
#include "gksec/montecarlo.hpp"
#include "gksec/secrecy.hpp"
#include "gksec/specfun.hpp"
#include "gksec/validation.hpp"

using namespace gksec;

namespace {

constexpr double kK = 3.0;
constexpr int kL = 15;
const SecrecyConfig kFigCfg(1.0, 3.0);

struct Outcome {
    bool passed = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            detail << " [" << what << "]";
        }
    }
};

QuadratureSpec tight() {
    QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    spec.abs_tol = 1e-300;
    return spec;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Least-squares slope of log10(y) against x / 10 (x in dB).
double fitted_slope(const std::vector<double>& db, const std::vector<double>& y) {
    const double n = static_cast<double>(db.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < db.size(); ++i) {
        const double x = db[i] / 10.0;
        const double ly = std::log10(y[i]);
        sx += x;
        sy += ly;
        sxx += x * x;
        sxy += x * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void criterion_1(Outcome& out) {
    double worst = 0.0;
    for (const auto& pt : equivalence_grid(50, 2019)) {
        const auto d = fit_mixed_gamma(pt.d, kL);
        const auto e = fit_mixed_gamma(pt.e, kL);
        const double closed = sop_closed_form(d, e, pt.cfg).value;
        const double quad = sop_quadrature(d, e, pt.cfg, tight()).value;
        const double scaled = std::abs(closed - quad) / (1e-8 * std::max(closed, 1e-12));
        worst = std::max(worst, scaled);
        out.require(scaled <= 1.0, "closed " + fmt(closed) + " quad " + fmt(quad));
    }
    out.detail << " worst |diff|/tol=" << fmt(worst);
}

void criterion_2(Outcome& out) {
    for (int m : {1, 2, 4, 5}) {
        const ChannelParams e = ChannelParams::from_db(kK, m, 0.0);
        const auto e_model = fit_mixed_gamma(e, kL);
        for (double db : {0.0, 10.0, 20.0, 30.0}) {
            const ChannelParams d = ChannelParams::from_db(kK, m, db);
            McConfig mc;
            mc.samples = 10'000'000;
            mc.seed = 1000 + static_cast<std::uint64_t>(10 * m + db);
            mc.workers = 4;
            const auto est = mc_sop(d, e, kFigCfg, mc);
            const double closed = sop_closed_form(fit_mixed_gamma(d, kL), e_model, kFigCfg).value;
            const double tol = std::max(3.0 * est.std_error, 0.02 * closed);
            const std::string tag = "m=" + std::to_string(m) + " " + fmt(db) + "dB closed " + fmt(closed) +
                                    " mc " + fmt(est.value) + " tol " + fmt(tol);
            out.require(std::abs(closed - est.value) <= tol, tag);
        }
    }
}

void criterion_3(Outcome& out) {
    struct Point {
        int m;
        double db_d;
        double db_e;
        double rs;
        double mu;
    };
    for (const Point& p : {Point{2, 10.0, 0.0, 1.0, 3.0}, Point{1, 20.0, 0.0, 1.0, 3.0},
                           Point{4, 5.0, 2.0, 0.5, 1.0}}) {
        const ChannelParams d = ChannelParams::from_db(kK, p.m, p.db_d);
        const ChannelParams e = ChannelParams::from_db(kK, p.m, p.db_e);
        const SecrecyConfig cfg(p.rs, p.mu);
        McConfig mc;
        mc.samples = 10'000'000;
        mc.seed = 500 + static_cast<std::uint64_t>(p.m);
        mc.workers = 4;
        mc.law = SampleLaw::surrogate_mixture;
        const auto est = mc_sop(d, e, cfg, mc);
        const double closed = sop_closed_form(fit_mixed_gamma(d, kL), fit_mixed_gamma(e, kL), cfg).value;
        const double z = std::abs(closed - est.value) / est.std_error;
        out.detail << " m=" << p.m << ":z=" << fmt(z);
        out.require(z <= 3.0, "m=" + std::to_string(p.m) + " closed " + fmt(closed) + " mc " + fmt(est.value));
    }
}

void criterion_4(Outcome& out) {
    std::vector<double> dbs;
    for (double db = 50.0; db <= 60.0 + 1e-9; db += 2.0) dbs.push_back(db);
    double slope4 = 0.0, slope5 = 0.0;
    for (int m : {1, 2, 4, 5}) {
        const auto e_model = fit_mixed_gamma(ChannelParams::from_db(kK, m, 0.0), kL);
        std::vector<double> sop;
        for (double db : dbs) {
            sop.push_back(sop_closed_form(fit_mixed_gamma(ChannelParams::from_db(kK, m, db), kL), e_model,
                                          kFigCfg)
                              .value);
        }
        const double slope = fitted_slope(dbs, sop);
        const double v = std::min(kK, static_cast<double>(m));
        out.detail << " m=" << m << ":" << fmt(slope);
        out.require(std::abs(slope + v) <= 0.02 * v, "slope m=" + std::to_string(m));
        if (m == 4) slope4 = slope;
        if (m == 5) slope5 = slope;
    }
    out.require(std::abs(slope4 - slope5) <= 0.01 * std::abs(slope5), "slope m=4 vs m=5");
}

void criterion_5(Outcome& out) {
    for (int m : {1, 2, 4, 5}) {
        const auto e_model = fit_mixed_gamma(ChannelParams::from_db(kK, m, 0.0), kL);
        const ChannelParams d = ChannelParams::from_db(kK, m, 60.0);
        const double asym = asop_closed_form(d, e_model, kFigCfg).value;
        const double exact = sop_closed_form(fit_mixed_gamma(d, kL), e_model, kFigCfg).value;
        const double quad = asop_quadrature(d, e_model, kFigCfg, tight()).value;
        const double ratio = asym / exact;
        out.detail << " m=" << m << ":ratio=" << fmt(ratio);
        out.require(ratio >= 0.95 && ratio <= 1.05, "ratio m=" + std::to_string(m));
        out.require(std::abs(asym - quad) <= 1e-8 * asym, "asymptote closed vs quadrature m=" + std::to_string(m));
    }
}

void criterion_6(Outcome& out) {
    const ChannelParams p = ChannelParams::from_db(kK, 2, 0.0);
    const auto model = fit_mixed_gamma(p, kL);
    const SecrecyConfig cfg(0.0, 0.0);
    const double closed = sop_closed_form(model, model, cfg).value;
    const double quad = sop_quadrature(model, model, cfg, tight()).value;
    McConfig mc;
    mc.samples = 1'000'000;
    mc.seed = 6;
    const auto est = mc_sop(p, p, cfg, mc);
    out.detail << " closed=" << fmt(closed) << " quad=" << fmt(quad) << " mc=" << fmt(est.value);
    out.require(std::abs(closed - 0.5) <= 1e-9, "closed");
    out.require(std::abs(quad - 0.5) <= 1e-8, "quadrature");
    out.require(std::abs(est.value - 0.5) <= 3.0 * est.std_error, "monte carlo");
}

void criterion_7(Outcome& out) {
    for (int m : {1, 2, 4, 5}) {
        const ChannelParams p(kK, m, 1.0);
        const auto model = fit_mixed_gamma(p, kL);
        auto draws = sample_exact(p, 1'000'000, 70 + static_cast<std::uint64_t>(m));
        std::sort(draws.begin(), draws.end());
        const double n = static_cast<double>(draws.size());
        double ks = 0.0;
        for (std::size_t i = 0; i < draws.size(); ++i) {
            const double f = eval_cdf(model, draws[i]);
            ks = std::max({ks, std::abs(f - i / n), std::abs((i + 1) / n - f)});
        }
        double weight_sum = 0.0;
        for (const auto& t : model.terms()) weight_sum += t.A;
        const double mass = integrate_semi_infinite([&](double x) { return eval_pdf(model, x); }, 0.0);
        out.detail << " m=" << m << ":ks=" << fmt(ks);
        out.require(ks <= 0.01, "ks m=" + std::to_string(m));
        out.require(std::abs(weight_sum - 1.0) <= 1e-10, "sum A m=" + std::to_string(m));
        out.require(std::abs(mass - 1.0) <= 1e-9, "pdf mass m=" + std::to_string(m));
    }
}

void criterion_8(Outcome& out) {
    const auto d = fit_mixed_gamma(ChannelParams::from_db(kK, 2, 10.0), kL);
    const auto e = fit_mixed_gamma(ChannelParams::from_db(kK, 2, 1.0), kL);
    auto gap = [&](double rs) {
        return std::abs(sop_conventional(d, e, rs).value - sop_closed_form(d, e, SecrecyConfig(rs, 3.0)).value);
    };
    const double low = gap(0.5);
    const double high = gap(4.0);
    out.detail << " gap(0.5)=" << fmt(low) << " gap(4)=" << fmt(high);
    out.require(high < low, "gap did not shrink");
}

void criterion_9(Outcome& out) {
    for (int L : {1, 2, 15, 30}) {
        const auto rule = gauss_laguerre(L);
        double worst = 0.0;
        for (int n = 0; n <= 2 * L - 1; ++n) {
            long double sum = 0.0L;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                sum += static_cast<long double>(rule.weights[i]) *
                       std::pow(static_cast<long double>(rule.nodes[i]), n);
            }
            const long double factorial = std::tgamma(static_cast<long double>(n) + 1.0L);
            worst = std::max(worst, static_cast<double>(std::fabs(sum - factorial) / factorial));
        }
        out.detail << " L=" << L << ":" << fmt(worst);
        out.require(worst <= 1e-12, "moments L=" + std::to_string(L));
    }
    double worst = 0.0;
    for (double s : {0.5, 1.0, 2.5, 5.0}) {
        for (double x : {0.1, 1.0, 10.0}) {
            const double lhs = upper_inc_gamma(s + 1.0, x);
            const double rhs = s * upper_inc_gamma(s, x) + std::pow(x, s) * std::exp(-x);
            worst = std::max(worst, std::abs(lhs - rhs) / lhs);
        }
    }
    out.detail << " recurrence=" << fmt(worst);
    out.require(worst <= 1e-11, "incomplete gamma recurrence");
}

struct Criterion {
    const char* title;
    double limit_s;
    std::function<void(Outcome&)> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list{
        {"closed form equals quadrature on the 50-point grid", 30, criterion_1},
        {"closed form agrees with exact-law Monte Carlo", 300, criterion_2},
        {"closed form agrees with surrogate-law Monte Carlo", 120, criterion_3},
        {"high-SNR slope equals -min(k, m)", 10, criterion_4},
        {"asymptote tracks the closed form at 60 dB", 10, criterion_5},
        {"identical channels give outage one half", 10, criterion_6},
        {"mixture fidelity and normalization", 60, criterion_7},
        {"outage gap narrows with rate", 5, criterion_8},
        {"quadrature rule and incomplete gamma gates", 5, criterion_9},
    };
    return list;
}

bool run_one(int index) {
    const Criterion& c = criteria()[static_cast<std::size_t>(index - 1)];
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
        c.run(out);
    } catch (const std::exception& e) {
        out.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(elapsed <= c.limit_s, "runtime over " + fmt(c.limit_s) + " s");
    std::printf("%s criterion %d: %s (%.2f s / %.0f s)%s\n", out.passed ? "PASS" : "FAIL", index, c.title,
                elapsed, c.limit_s, out.detail.str().c_str());
    std::fflush(stdout);
    return out.passed;
}

}  // namespace

int main(int argc, char** argv) {
    const int count = static_cast<int>(criteria().size());
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            const int n = std::atoi(argv[++i]);
            if (n < 1 || n > count) {
                std::fprintf(stderr, "criterion must be in 1..%d\n", count);
                return 2;
            }
            selected.push_back(n);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
            return 2;
        }
    }
    if (selected.empty()) {
        for (int i = 1; i <= count; ++i) selected.push_back(i);
    }
    bool all = true;
    for (int n : selected) all = run_one(n) && all;
    return all ? 0 : 1;
}
