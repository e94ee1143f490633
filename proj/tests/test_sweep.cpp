#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "gksec/error.hpp"
#include "gksec/sweep.hpp"
#include "gksec/validation.hpp"

namespace gksec {
namespace {

SweepSpec figure_a(int m) {
    SweepSpec spec;
    spec.d_m = m;
    spec.e_m = m;
    spec.methods = {"closed", "asymptotic"};
    spec.sweep = "d_gamma_bar_db";
    spec.sweep_start = 0.0;
    spec.sweep_end = 60.0;
    spec.sweep_step = 5.0;
    spec.threads = 2;
    return spec;
}

TEST(Methods, ParsedInColumnOrder) {
    EXPECT_EQ(parse_methods({"mc", "closed"}), (std::vector<Column>{Column::closed, Column::mc}));
    EXPECT_EQ(parse_methods({"conventional", "quadrature", "closed", "closed"}),
              (std::vector<Column>{Column::closed, Column::quadrature, Column::conventional}));
    EXPECT_THROW(parse_methods({}), InvalidArgument);
    EXPECT_THROW(parse_methods({"bogus"}), InvalidArgument);
}

TEST(Spec, Validation) {
    SweepSpec spec;
    EXPECT_NO_THROW(validate_spec(spec, false));
    EXPECT_THROW(validate_spec(spec, true), InvalidArgument);
    auto bad = spec;
    bad.d_m = 0;
    EXPECT_THROW(validate_spec(bad, false), InvalidArgument);
    bad = spec;
    bad.L = 0;
    EXPECT_THROW(validate_spec(bad, false), InvalidArgument);
    bad = figure_a(2);
    bad.sweep_end = bad.sweep_start;
    EXPECT_THROW(validate_spec(bad, true), InvalidArgument);
    bad = figure_a(2);
    bad.sweep_step = 0.0;
    EXPECT_THROW(validate_spec(bad, true), InvalidArgument);
    bad = figure_a(2);
    bad.sweep = "d_k";
    EXPECT_THROW(validate_spec(bad, true), InvalidArgument);
}

TEST(Spec, GridIncludesEndpoint) {
    const auto values = sweep_values(figure_a(2));
    ASSERT_EQ(values.size(), 13u);
    EXPECT_EQ(values.front(), 0.0);
    EXPECT_EQ(values.back(), 60.0);
    auto spec = figure_a(2);
    spec.sweep_start = 0.5;
    spec.sweep_end = 6.0;
    spec.sweep_step = 0.5;
    EXPECT_EQ(sweep_values(spec).size(), 12u);
}

TEST(Spec, AtValueSetsSweptField) {
    auto spec = figure_a(2);
    EXPECT_EQ(at_value(spec, 35.0).d_gamma_bar_db, 35.0);
    spec.sweep = "rate_rs";
    EXPECT_EQ(at_value(spec, 2.5).rate_rs, 2.5);
    spec.sweep = "mu";
    EXPECT_EQ(at_value(spec, 4.0).mu, 4.0);
    spec.sweep = "e_gamma_bar_db";
    EXPECT_EQ(at_value(spec, -3.0).e_gamma_bar_db, -3.0);
}

TEST(Point, SymmetricChannelsGiveOneHalf) {
    SweepSpec spec;
    spec.d_gamma_bar_db = 0.0;
    spec.e_gamma_bar_db = 0.0;
    spec.rate_rs = 0.0;
    spec.mu = 0.0;
    spec.methods = {"closed", "quadrature"};
    const auto row = run_point(spec);
    ASSERT_TRUE(row.closed && row.quadrature);
    EXPECT_NEAR(*row.closed, 0.5, 1e-9);
    EXPECT_NEAR(*row.quadrature, 0.5, 1e-8);
    EXPECT_FALSE(row.mc.has_value());
}

TEST(Point, GapColumnNeedsBothDefinitions) {
    SweepSpec spec;
    spec.methods = {"closed", "conventional"};
    const auto row = run_point(spec);
    ASSERT_TRUE(row.gap.has_value());
    EXPECT_EQ(*row.gap, std::abs(*row.conventional - *row.closed));
    spec.methods = {"conventional"};
    EXPECT_FALSE(run_point(spec).gap.has_value());
}

TEST(Point, EqualShapeAsymptoteRaises) {
    SweepSpec spec;
    spec.d_k = 2.0;
    spec.d_m = 2;
    spec.methods = {"asymptotic"};
    try {
        run_point(spec);
        FAIL() << "expected Unsupported";
    } catch (const Unsupported& e) {
        EXPECT_EQ(exit_code_for(e), 1);
    }
}

TEST(Csv, HeaderFollowsMethods) {
    SweepSpec spec = figure_a(2);
    spec.methods = {"mc", "closed", "conventional"};
    EXPECT_EQ(csv_header(spec), (std::vector<std::string>{"d_gamma_bar_db", "closed", "mc", "mc_stderr",
                                                          "conventional", "gap"}));
}

TEST(Csv, RoundTripIsBitExact) {
    const auto spec = figure_a(2);
    std::ostringstream out;
    const auto result = run_sweep(spec, out);
    EXPECT_EQ(result.failures, 0u);
    EXPECT_EQ(result.exit_code, 0);
    std::istringstream in(out.str());
    const auto table = read_csv(in);
    EXPECT_EQ(table.header, csv_header(spec));
    ASSERT_EQ(table.rows.size(), result.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        EXPECT_EQ(*table.rows[i][0], result.rows[i].x);
        EXPECT_EQ(*table.rows[i][1], *result.rows[i].closed);
        EXPECT_EQ(*table.rows[i][2], *result.rows[i].asymptotic);
    }
    EXPECT_EQ(out.str().find('\r'), std::string::npos);
}

TEST(Csv, RerunsAreByteIdentical) {
    auto spec = figure_a(2);
    spec.methods = {"closed", "mc"};
    spec.mc_samples = 20'000;
    spec.threads = 4;
    std::ostringstream a, b;
    run_sweep(spec, a);
    spec.threads = 1;
    run_sweep(spec, b);
    EXPECT_EQ(a.str(), b.str());
}

TEST(Csv, FailedPointsLeaveEmptyCells) {
    SweepSpec spec;
    spec.methods = {"closed"};
    spec.d_gamma_bar_db = -10.0;
    spec.sweep = "mu";
    spec.sweep_start = 1.0;
    spec.sweep_end = 1e6;
    spec.sweep_step = 999'999.0 / 2.0;
    std::ostringstream out;
    const auto result = run_sweep(spec, out);
    EXPECT_GT(result.failures, 0u);
    EXPECT_NE(result.exit_code, 0);
    std::istringstream in(out.str());
    const auto table = read_csv(in);
    ASSERT_EQ(table.rows.size(), 3u);
    EXPECT_TRUE(table.rows[0][1].has_value());
    EXPECT_FALSE(table.rows[2][1].has_value());
}

TEST(Csv, FormatRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 5e-324, 1.7976931348623157e308, 0.0, 12345.678}) {
        EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
    }
}

TEST(Figures, OutageFallsWithMainLinkSnr) {
    for (int m : {1, 2, 4, 5}) {
        std::ostringstream out;
        const auto result = run_sweep(figure_a(m), out);
        ASSERT_EQ(result.failures, 0u);
        for (std::size_t i = 1; i < result.rows.size(); ++i) {
            EXPECT_LE(*result.rows[i].closed, *result.rows[i - 1].closed) << "m=" << m;
        }
    }
}

TEST(Figures, GapShrinksAtHighRate) {
    SweepSpec spec;
    spec.d_gamma_bar_db = 10.0;
    spec.e_gamma_bar_db = 1.0;
    spec.methods = {"closed", "conventional"};
    spec.sweep = "rate_rs";
    spec.sweep_start = 0.5;
    spec.sweep_end = 6.0;
    spec.sweep_step = 0.5;
    std::ostringstream out;
    const auto result = run_sweep(spec, out);
    ASSERT_EQ(result.failures, 0u);
    const auto& rows = result.rows;
    for (std::size_t i = rows.size() / 2; i < rows.size(); ++i) {
        EXPECT_LT(*rows[i].gap, *rows[i - 1].gap) << "rate " << rows[i].x;
    }
    EXPECT_LT(*rows.back().gap, *rows.front().gap);
}

TEST(Validate, FastSuitePasses) {
    std::ostringstream report;
    const auto checks = run_validate({}, report);
    EXPECT_FALSE(checks.empty());
    for (const auto& c : checks) EXPECT_TRUE(c.passed) << c.name << " " << c.detail;
    EXPECT_NE(report.str().find("check=symmetry_closed status=PASS"), std::string::npos);
}

TEST(Validate, CorruptedCoefficientIsDetected) {
    std::ostringstream report;
    ValidateOptions options;
    options.corrupt_mixture_coefficient = true;
    const auto checks = run_validate(options, report);
    bool normalization_failed = false;
    for (const auto& c : checks) {
        if (c.name.rfind("normalization", 0) == 0 && !c.passed) normalization_failed = true;
    }
    EXPECT_TRUE(normalization_failed);
}

}  // namespace
}  // namespace gksec
