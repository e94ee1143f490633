#include "gksec/validation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "gksec/error.hpp"
#include "gksec/montecarlo.hpp"
#include "gksec/sweep.hpp"

namespace gksec {

std::vector<GridPoint> equivalence_grid(std::size_t count, std::uint64_t seed) {
    static constexpr double kShapes[] = {2.0, 3.0, 5.0};
    static constexpr int kMultipath[] = {1, 2, 4};
    Rng rng = make_stream(seed);
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_real_distribution<double> log_gd(0.0, 4.0);
    std::uniform_real_distribution<double> ge(0.5, 4.0);
    std::uniform_real_distribution<double> rs(0.5, 3.0);
    std::uniform_real_distribution<double> mu(0.0, 6.0);

    std::vector<GridPoint> grid;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double kd = kShapes[pick(rng)];
        const int md = kMultipath[pick(rng)];
        const double ke = kShapes[pick(rng)];
        const int me = kMultipath[pick(rng)];
        const double gd = std::pow(10.0, log_gd(rng));
        const double g_e = ge(rng);
        const double r = rs(rng);
        const double u = mu(rng);
        grid.push_back({ChannelParams(kd, md, gd), ChannelParams(ke, me, g_e), SecrecyConfig(r, u)});
    }
    return grid;
}

double ks_distance(const MixedGammaModel& model, std::vector<double>& samples) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = eval_cdf(model, samples[i]);
        worst = std::max({worst, std::abs(f - static_cast<double>(i) / n),
                          std::abs(static_cast<double>(i + 1) / n - f)});
    }
    return worst;
}

double loglog_slope(const std::function<double(double)>& sop_at_db,
                    const std::vector<double>& db_points) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(db_points.size());
    for (double db : db_points) {
        const double x = db / 10.0;
        const double y = std::log10(sop_at_db(db));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

class Reporter {
public:
    explicit Reporter(std::ostream& out) : out_(out) {}

    void record(std::string name, bool passed, double value, double tolerance,
                std::string detail = {}) {
        out_ << "check=" << name << " status=" << (passed ? "PASS" : "FAIL")
             << " value=" << format_double(value) << " tol=" << format_double(tolerance);
        if (!detail.empty()) out_ << " detail=\"" << detail << '"';
        out_ << '\n';
        out_.flush();
        results_.push_back({std::move(name), passed, value, tolerance, std::move(detail)});
    }

    // Runs body; an exception becomes a failed check.
    template <typename F>
    void guarded(const std::string& name, F&& body) {
        try {
            body();
        } catch (const std::exception& ex) {
            record(name, false, std::nan(""), 0.0, ex.what());
        }
    }

    std::vector<CheckResult> take() { return std::move(results_); }

private:
    std::ostream& out_;
    std::vector<CheckResult> results_;
};

constexpr int kFigureL = 15;
constexpr double kFigureK = 3.0;
constexpr int kFigureM[] = {1, 2, 4, 5};

QuadratureSpec tight_quadrature() {
    QuadratureSpec q;
    q.rel_tol = 1e-11;
    q.abs_tol = 1e-300;
    return q;
}

void special_function_checks(Reporter& rep) {
    for (int L : {1, 2, 15, 30}) {
        rep.guarded("gl_moments_L" + std::to_string(L), [&] {
            const auto rule = gauss_laguerre(L);
            double worst = 0.0;
            for (int n = 0; n <= 2 * L - 1; ++n) {
                CompensatedSum s;
                for (int i = 0; i < L; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], n);
                const double exact = std::exp(ln_gamma(n + 1.0));
                worst = std::max(worst, std::abs(s.value() - exact) / exact);
            }
            rep.record("gl_moments_L" + std::to_string(L), worst <= 1e-12, worst, 1e-12);
        });
    }
    rep.guarded("incgamma_recurrence", [&] {
        double worst = 0.0;
        for (double s : {0.5, 1.0, 2.5, 5.0}) {
            for (double x : {0.1, 1.0, 10.0}) {
                const double lhs = upper_inc_gamma(s + 1.0, x);
                const double rhs = s * upper_inc_gamma(s, x) + std::pow(x, s) * std::exp(-x);
                worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
            }
        }
        rep.record("incgamma_recurrence", worst <= 1e-11, worst, 1e-11);
    });
}

void mixture_checks(Reporter& rep, const ValidateOptions& options) {
    for (int m : kFigureM) {
        const std::string suffix = "_m" + std::to_string(m);
        rep.guarded("normalization" + suffix, [&] {
            MixedGammaModel model = fit_mixed_gamma(ChannelParams(kFigureK, m, 1.0), kFigureL);
            if (options.corrupt_mixture_coefficient) {
                auto terms = model.terms();
                terms.front().A *= 1.5;
                model = MixedGammaModel::unchecked(model.source(), std::move(terms));
            }
            const auto r = normalization_residuals(model);
            const double worst = std::max(std::abs(r.weight_sum), std::abs(r.pdf_integral));
            rep.record("normalization" + suffix, worst <= 1e-10, worst, 1e-10);
        });
        rep.guarded("pdf_integral" + suffix, [&] {
            const auto model = fit_mixed_gamma(ChannelParams(kFigureK, m, 1.0), kFigureL);
            const double mass =
                integrate_semi_infinite([&](double x) { return eval_pdf(model, x); }, 0.0);
            rep.record("pdf_integral" + suffix, std::abs(mass - 1.0) <= 1e-9, mass - 1.0, 1e-9);
        });
    }
}

void symmetry_checks(Reporter& rep, bool with_mc) {
    const ChannelParams p(kFigureK, 2, 1.0);
    const auto model = fit_mixed_gamma(p, kFigureL);
    const SecrecyConfig cfg(0.0, 0.0);
    rep.guarded("symmetry_closed", [&] {
        const double v = sop_closed_form(model, model, cfg).value;
        rep.record("symmetry_closed", std::abs(v - 0.5) <= 1e-9, v, 1e-9);
    });
    rep.guarded("symmetry_quadrature", [&] {
        const double v = sop_quadrature(model, model, cfg, tight_quadrature()).value;
        rep.record("symmetry_quadrature", std::abs(v - 0.5) <= 1e-8, v, 1e-8);
    });
    if (!with_mc) return;
    rep.guarded("symmetry_mc", [&] {
        McConfig mc;
        mc.samples = 1'000'000;
        mc.seed = 7;
        const auto est = mc_sop(p, p, cfg, mc);
        rep.record("symmetry_mc", std::abs(est.value - 0.5) <= 3.0 * est.std_error, est.value,
                   3.0 * est.std_error);
    });
}

void equivalence_check(Reporter& rep) {
    rep.guarded("closed_vs_quadrature_grid", [&] {
        double worst = 0.0;
        std::string where;
        for (const auto& pt : equivalence_grid()) {
            const auto d = fit_mixed_gamma(pt.d, kFigureL);
            const auto e = fit_mixed_gamma(pt.e, kFigureL);
            const double closed = sop_closed_form(d, e, pt.cfg).value;
            const double quad = sop_quadrature(d, e, pt.cfg, tight_quadrature()).value;
            const double err = std::abs(closed - quad) / std::max(closed, 1e-12);
            if (err > worst) {
                worst = err;
                std::ostringstream os;
                os << "k_d=" << pt.d.k() << " m_d=" << pt.d.m() << " gd=" << pt.d.gamma_bar()
                   << " closed=" << closed << " quad=" << quad;
                where = os.str();
            }
        }
        rep.record("closed_vs_quadrature_grid", worst <= 1e-8, worst, 1e-8, where);
    });
}

void figure_checks(Reporter& rep) {
    const SecrecyConfig cfg(1.0, 3.0);

    for (int m : kFigureM) {
        const ChannelParams e(kFigureK, m, 1.0);
        const auto e_model = fit_mixed_gamma(e, kFigureL);
        for (double db : {0.0, 10.0, 20.0, 30.0}) {
            std::ostringstream name;
            name << "mc_exact_m" << m << "_" << db << "dB";
            rep.guarded(name.str(), [&] {
                const ChannelParams d = ChannelParams::from_db(kFigureK, m, db);
                const double closed =
                    sop_closed_form(fit_mixed_gamma(d, kFigureL), e_model, cfg).value;
                McConfig mc;
                mc.seed = 11;
                const auto est = mc_sop(d, e, cfg, mc);
                const double bound = std::max(3.0 * est.std_error, 0.02 * closed);
                std::ostringstream detail;
                detail << "closed=" << format_double(closed) << " mc=" << format_double(est.value);
                rep.record(name.str(), std::abs(closed - est.value) <= bound,
                           std::abs(closed - est.value), bound, detail.str());
            });
        }
    }

    for (int m : kFigureM) {
        const std::string name = "slope_m" + std::to_string(m);
        rep.guarded(name, [&] {
            const auto e_model = fit_mixed_gamma(ChannelParams(kFigureK, m, 1.0), kFigureL);
            const double slope = loglog_slope(
                [&](double db) {
                    const auto d = fit_mixed_gamma(ChannelParams::from_db(kFigureK, m, db), kFigureL);
                    return sop_closed_form(d, e_model, cfg).value;
                },
                {50.0, 52.0, 54.0, 56.0, 58.0, 60.0});
            const double target = -std::min(kFigureK, static_cast<double>(m));
            const double rel = std::abs(slope - target) / std::abs(target);
            std::ostringstream detail;
            detail << "slope=" << format_double(slope) << " expected=" << target;
            rep.record(name, rel <= 0.02, rel, 0.02, detail.str());
        });
    }

    for (int m : kFigureM) {
        const std::string name = "asymptote_ratio_m" + std::to_string(m);
        rep.guarded(name, [&] {
            const auto e_model = fit_mixed_gamma(ChannelParams(kFigureK, m, 1.0), kFigureL);
            const ChannelParams d = ChannelParams::from_db(kFigureK, m, 60.0);
            const double exact = sop_closed_form(fit_mixed_gamma(d, kFigureL), e_model, cfg).value;
            const double asym = asop_closed_form(d, e_model, cfg).value;
            const double ratio = asym / exact;
            rep.record(name, ratio >= 0.95 && ratio <= 1.05, ratio, 0.05);
        });
    }
}

}  // namespace

std::vector<CheckResult> run_validate(const ValidateOptions& options, std::ostream& report) {
    Reporter rep(report);
    const bool full = options.level == ValidationLevel::full;
    special_function_checks(rep);
    mixture_checks(rep, options);
    symmetry_checks(rep, full);
    equivalence_check(rep);
    if (full) figure_checks(rep);
    return rep.take();
}

}  // namespace gksec
