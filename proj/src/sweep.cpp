#include "gksec/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "gksec/channel.hpp"
#include "gksec/error.hpp"
#include "gksec/montecarlo.hpp"
#include "gksec/secrecy.hpp"

namespace gksec {

namespace {

constexpr const char* kSweepable[] = {"d_gamma_bar_db", "e_gamma_bar_db", "rate_rs", "mu"};

bool has(const std::vector<Column>& cols, Column c) {
    return std::find(cols.begin(), cols.end(), c) != cols.end();
}

}  // namespace

std::vector<Column> parse_methods(const std::vector<std::string>& names) {
    if (names.empty()) throw InvalidArgument("methods: at least one method is required");
    std::vector<Column> cols;
    for (const auto& name : names) {
        Column c;
        if (name == "closed") {
            c = Column::closed;
        } else if (name == "quadrature") {
            c = Column::quadrature;
        } else if (name == "asymptotic") {
            c = Column::asymptotic;
        } else if (name == "mc") {
            c = Column::mc;
        } else if (name == "conventional") {
            c = Column::conventional;
        } else {
            throw InvalidArgument("methods: unknown method '" + name +
                                  "' (expected closed, quadrature, asymptotic, mc, conventional)");
        }
        if (!has(cols, c)) cols.push_back(c);
    }
    // CSV column order is fixed regardless of request order.
    std::sort(cols.begin(), cols.end());
    return cols;
}

void validate_spec(const SweepSpec& spec, bool require_sweep) {
    parse_methods(spec.methods);
    ChannelParams::from_db(spec.d_k, spec.d_m, spec.d_gamma_bar_db);
    ChannelParams::from_db(spec.e_k, spec.e_m, spec.e_gamma_bar_db);
    SecrecyConfig(spec.rate_rs, spec.mu);
    if (spec.L < 1 || spec.L > kMaxLaguerreOrder) {
        throw InvalidArgument("L: mixture order must satisfy 1 <= L <= " +
                              std::to_string(kMaxLaguerreOrder));
    }
    if (spec.mc_samples < 1000) throw InvalidArgument("mc_samples: must be >= 1000");
    if (spec.mc_workers < 1) throw InvalidArgument("mc_workers: must be >= 1");
    if (!require_sweep) return;

    if (spec.sweep.empty()) throw InvalidArgument("sweep: a swept variable is required");
    if (std::find(std::begin(kSweepable), std::end(kSweepable), spec.sweep) ==
        std::end(kSweepable)) {
        throw InvalidArgument("sweep: cannot sweep '" + spec.sweep +
                              "' (expected d_gamma_bar_db, e_gamma_bar_db, rate_rs or mu)");
    }
    if (!std::isfinite(spec.sweep_start) || !std::isfinite(spec.sweep_end) ||
        !(spec.sweep_start < spec.sweep_end)) {
        throw InvalidArgument("sweep: need finite sweep_start < sweep_end");
    }
    if (!(spec.sweep_step > 0.0)) throw InvalidArgument("sweep: sweep_step must be > 0");
    for (double x : sweep_values(spec)) {
        const SweepSpec point = at_value(spec, x);
        SecrecyConfig(point.rate_rs, point.mu);
    }
}

std::vector<double> sweep_values(const SweepSpec& spec) {
    const double span = (spec.sweep_end - spec.sweep_start) / spec.sweep_step;
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> xs(count);
    for (std::size_t i = 0; i < count; ++i) {
        xs[i] = spec.sweep_start + static_cast<double>(i) * spec.sweep_step;
    }
    return xs;
}

SweepSpec at_value(const SweepSpec& spec, double value) {
    SweepSpec out = spec;
    if (spec.sweep == "d_gamma_bar_db") {
        out.d_gamma_bar_db = value;
    } else if (spec.sweep == "e_gamma_bar_db") {
        out.e_gamma_bar_db = value;
    } else if (spec.sweep == "rate_rs") {
        out.rate_rs = value;
    } else if (spec.sweep == "mu") {
        out.mu = value;
    }
    return out;
}

namespace {

double swept_value(const SweepSpec& spec) {
    if (spec.sweep == "e_gamma_bar_db") return spec.e_gamma_bar_db;
    if (spec.sweep == "rate_rs") return spec.rate_rs;
    if (spec.sweep == "mu") return spec.mu;
    return spec.d_gamma_bar_db;
}

std::string first_column(const SweepSpec& spec) {
    return spec.sweep.empty() ? std::string("d_gamma_bar_db") : spec.sweep;
}

}  // namespace

QuadratureSpec cli_quadrature_spec() {
    QuadratureSpec q;
    q.rel_tol = 1e-10;
    q.abs_tol = 1e-300;
    return q;
}

SweepRow run_point(const SweepSpec& spec) {
    validate_spec(spec, false);
    const auto cols = parse_methods(spec.methods);
    const ChannelParams d = ChannelParams::from_db(spec.d_k, spec.d_m, spec.d_gamma_bar_db);
    const ChannelParams e = ChannelParams::from_db(spec.e_k, spec.e_m, spec.e_gamma_bar_db);
    const SecrecyConfig cfg(spec.rate_rs, spec.mu);

    SweepRow row;
    row.x = swept_value(spec);
    const MixedGammaModel d_model = fit_mixed_gamma(d, spec.L);
    const MixedGammaModel e_model = fit_mixed_gamma(e, spec.L);

    if (has(cols, Column::closed)) row.closed = sop_closed_form(d_model, e_model, cfg).value;
    if (has(cols, Column::quadrature)) {
        row.quadrature = sop_quadrature(d_model, e_model, cfg, cli_quadrature_spec()).value;
    }
    if (has(cols, Column::asymptotic)) {
        const double v = std::min(d.k(), static_cast<double>(d.m()));
        row.asymptotic = v == std::floor(v)
                             ? asop_closed_form(d, e_model, cfg).value
                             : asop_quadrature(d, e_model, cfg, cli_quadrature_spec()).value;
    }
    if (has(cols, Column::mc)) {
        McConfig mc;
        mc.samples = spec.mc_samples;
        mc.seed = spec.seed;
        mc.workers = spec.mc_workers;
        const McEstimate est = mc_sop(d, e, cfg, mc);
        row.mc = est.value;
        row.mc_stderr = est.std_error;
    }
    if (has(cols, Column::conventional)) {
        row.conventional = sop_conventional(d_model, e_model, spec.rate_rs).value;
    }
    if (row.closed && row.conventional) row.gap = std::abs(*row.conventional - *row.closed);
    return row;
}

std::vector<std::string> csv_header(const SweepSpec& spec) {
    const auto cols = parse_methods(spec.methods);
    std::vector<std::string> h{first_column(spec)};
    if (has(cols, Column::closed)) h.emplace_back("closed");
    if (has(cols, Column::quadrature)) h.emplace_back("quadrature");
    if (has(cols, Column::asymptotic)) h.emplace_back("asymptotic");
    if (has(cols, Column::mc)) {
        h.emplace_back("mc");
        h.emplace_back("mc_stderr");
    }
    if (has(cols, Column::conventional)) h.emplace_back("conventional");
    if (has(cols, Column::closed) && has(cols, Column::conventional)) h.emplace_back("gap");
    return h;
}

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_csv_header(std::ostream& out, const SweepSpec& spec) {
    const auto h = csv_header(spec);
    for (std::size_t i = 0; i < h.size(); ++i) out << (i ? "," : "") << h[i];
    out << '\n';
}

void write_csv_row(std::ostream& out, const SweepSpec& spec, const SweepRow& row) {
    const auto cols = parse_methods(spec.methods);
    auto cell = [&out](const std::optional<double>& v) {
        out << ',';
        if (v) out << format_double(*v);
    };
    out << format_double(row.x);
    if (has(cols, Column::closed)) cell(row.closed);
    if (has(cols, Column::quadrature)) cell(row.quadrature);
    if (has(cols, Column::asymptotic)) cell(row.asymptotic);
    if (has(cols, Column::mc)) {
        cell(row.mc);
        cell(row.mc_stderr);
    }
    if (has(cols, Column::conventional)) cell(row.conventional);
    if (has(cols, Column::closed) && has(cols, Column::conventional)) cell(row.gap);
    out << '\n';
}

int exit_code_for(const std::exception& error) {
    if (dynamic_cast<const InvalidArgument*>(&error) || dynamic_cast<const DomainError*>(&error) ||
        dynamic_cast<const Unsupported*>(&error)) {
        return 1;
    }
    return 2;
}

SweepResult run_sweep(const SweepSpec& spec, std::ostream& csv) {
    validate_spec(spec, true);
    const std::vector<double> xs = sweep_values(spec);
    SweepResult result;
    result.rows.resize(xs.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < xs.size(); i = next++) {
            SweepRow& row = result.rows[i];
            try {
                row = run_point(at_value(spec, xs[i]));
            } catch (const std::exception& ex) {
                row = SweepRow{};
                row.error = ex.what();
                row.exit_code = exit_code_for(ex);
            }
            row.x = xs[i];
        }
    };
    unsigned pool = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    pool = static_cast<unsigned>(std::min<std::size_t>(pool, xs.size()));
    {
        std::vector<std::jthread> threads;
        for (unsigned t = 1; t < pool; ++t) threads.emplace_back(worker);
        worker();
    }

    write_csv_header(csv, spec);
    for (const auto& row : result.rows) {
        write_csv_row(csv, spec, row);
        if (!row.error.empty()) {
            ++result.failures;
            result.exit_code = std::max(result.exit_code, row.exit_code);
        }
    }
    return result;
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string field;
        std::istringstream is(s);
        while (std::getline(is, field, ',')) out.push_back(field);
        if (!s.empty() && s.back() == ',') out.emplace_back();
        return out;
    };
    if (!std::getline(in, line)) throw InvalidArgument("read_csv: missing header");
    table.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::optional<double>> row;
        for (const auto& f : split(line)) {
            if (f.empty()) {
                row.emplace_back();
                continue;
            }
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || ptr != f.data() + f.size()) {
                throw InvalidArgument("read_csv: malformed number '" + f + "'");
            }
            row.emplace_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace gksec
