// Command-line front end: single points, figure sweeps and the check suite.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "gksec/error.hpp"
#include "gksec/sweep.hpp"
#include "gksec/validation.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitChecks = 3;

void add_spec_options(CLI::App& app, gksec::SweepSpec& spec) {
    app.add_option("--d_k", spec.d_k, "main link shadowing shape k_d")->capture_default_str();
    app.add_option("--d_m", spec.d_m, "main link multipath shape m_d (integer)")
        ->capture_default_str();
    app.add_option("--d_gamma_bar_db", spec.d_gamma_bar_db, "main link average SNR [dB]")
        ->capture_default_str();
    app.add_option("--e_k", spec.e_k, "eavesdropper shadowing shape k_e")->capture_default_str();
    app.add_option("--e_m", spec.e_m, "eavesdropper multipath shape m_e (integer)")
        ->capture_default_str();
    app.add_option("--e_gamma_bar_db", spec.e_gamma_bar_db, "eavesdropper average SNR [dB]")
        ->capture_default_str();
    app.add_option("--rate_rs", spec.rate_rs, "secrecy rate R_s [bits]")->capture_default_str();
    app.add_option("--mu", spec.mu, "reliability threshold mu (linear SNR)")->capture_default_str();
    app.add_option("--L", spec.L, "mixture order (Gauss-Laguerre points)")->capture_default_str();
    app.add_option("--mc_samples", spec.mc_samples, "Monte Carlo draws per point")
        ->capture_default_str();
    app.add_option("--seed", spec.seed, "Monte Carlo seed")->capture_default_str();
    app.add_option("--mc_workers", spec.mc_workers, "Monte Carlo worker streams")
        ->capture_default_str();
    app.add_option("--methods", spec.methods,
                   "comma list of closed,quadrature,asymptotic,mc,conventional")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--sweep", spec.sweep,
                   "swept variable: d_gamma_bar_db, e_gamma_bar_db, rate_rs or mu");
    app.add_option("--sweep_start", spec.sweep_start, "first swept value");
    app.add_option("--sweep_end", spec.sweep_end, "last swept value (inclusive)");
    app.add_option("--sweep_step", spec.sweep_step, "sweep increment");
    app.add_option("--threads", spec.threads, "sweep worker pool size (0 = all cores)");
}

void print_report(std::ostream& out, const gksec::SweepSpec& spec, const gksec::SweepRow& row) {
    using gksec::format_double;
    out << "main link:    k=" << spec.d_k << " m=" << spec.d_m << " gamma_bar=" << spec.d_gamma_bar_db
        << " dB (" << format_double(gksec::db_to_linear(spec.d_gamma_bar_db)) << " linear)\n"
        << "eavesdropper: k=" << spec.e_k << " m=" << spec.e_m
        << " gamma_bar=" << spec.e_gamma_bar_db << " dB ("
        << format_double(gksec::db_to_linear(spec.e_gamma_bar_db)) << " linear)\n"
        << "secrecy:      R_s=" << spec.rate_rs << " mu=" << spec.mu << " L=" << spec.L << "\n";
    auto line = [&out](const char* name, const std::optional<double>& v) {
        if (v) out << "  " << name << " = " << format_double(*v) << '\n';
    };
    line("closed      ", row.closed);
    line("quadrature  ", row.quadrature);
    line("asymptotic  ", row.asymptotic);
    line("mc          ", row.mc);
    line("mc_stderr   ", row.mc_stderr);
    line("conventional", row.conventional);
    line("gap         ", row.gap);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secrecy outage over generalized-K fading"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "flat key = value file with SweepSpec keys");

    gksec::SweepSpec spec;
    add_spec_options(app, spec);
    std::string out_path;
    app.add_option("--out", out_path, "CSV output path");

    auto* point = app.add_subcommand("point", "evaluate all requested methods at one point");
    auto* sweep = app.add_subcommand("sweep", "evaluate a one-variable sweep into a CSV file");
    auto* validate = app.add_subcommand("validate", "run the cross-method check suite");
    std::string level = "fast";
    bool corrupt = false;
    validate->add_option("--level", level, "fast or full")
        ->check(CLI::IsMember({"fast", "full"}))
        ->capture_default_str();
    validate->add_flag("--corrupt-coefficient", corrupt, "fault injection: break one weight")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*point) {
            const gksec::SweepRow row = gksec::run_point(spec);
            print_report(std::cout, spec, row);
            if (!out_path.empty()) {
                std::ofstream csv(out_path, std::ios::binary);
                if (!csv) throw gksec::InvalidArgument("cannot open output file " + out_path);
                gksec::write_csv_header(csv, spec);
                gksec::write_csv_row(csv, spec, row);
            }
            return 0;
        }
        if (*sweep) {
            if (out_path.empty()) throw gksec::InvalidArgument("sweep: --out is required");
            gksec::validate_spec(spec, true);
            std::ofstream csv(out_path, std::ios::binary);
            if (!csv) throw gksec::InvalidArgument("cannot open output file " + out_path);
            const auto result = gksec::run_sweep(spec, csv);
            std::cout << "wrote " << result.rows.size() << " rows to " << out_path << '\n';
            if (result.failures > 0) {
                std::cerr << result.failures << " point(s) failed:\n";
                for (const auto& row : result.rows) {
                    if (!row.error.empty()) {
                        std::cerr << "  " << spec.sweep << "=" << gksec::format_double(row.x)
                                  << ": " << row.error << '\n';
                    }
                }
            }
            return result.exit_code;
        }
        gksec::ValidateOptions options;
        options.level = level == "full" ? gksec::ValidationLevel::full : gksec::ValidationLevel::fast;
        options.corrupt_mixture_coefficient = corrupt;
        const auto checks = gksec::run_validate(options, std::cout);
        std::size_t failed = 0;
        for (const auto& c : checks) failed += !c.passed;
        std::cout << "summary checks=" << checks.size() << " failed=" << failed << '\n';
        return failed ? kExitChecks : 0;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n'
                  << "  config: d=(k=" << spec.d_k << ", m=" << spec.d_m << ", "
                  << spec.d_gamma_bar_db << " dB) e=(k=" << spec.e_k << ", m=" << spec.e_m << ", "
                  << spec.e_gamma_bar_db << " dB) R_s=" << spec.rate_rs << " mu=" << spec.mu
                  << " L=" << spec.L << '\n';
        return gksec::exit_code_for(ex);
    }
}
