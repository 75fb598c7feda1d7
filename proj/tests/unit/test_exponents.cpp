#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sievelab/errors.hpp"
#include "sievelab/exponents.hpp"

using namespace sievelab;

namespace {
const double kRoot3Over4 = std::sqrt(3.0) / 4.0;
constexpr CostModel kAllModels[] = {CostModel::classical, CostModel::t1, CostModel::t2, CostModel::t3,
                                     CostModel::t4,        CostModel::t5, CostModel::noqram};

double max_term(const std::vector<Rate>& terms) {
    return std::max_element(terms.begin(), terms.end())->value;
}
}  // namespace

TEST_CASE("model names round-trip") {
    for (CostModel m : kAllModels) CHECK(parse_cost_model(to_string(m)) == m);
    CHECK_FALSE(parse_cost_model("t6").has_value());
}

TEST_CASE("model_terms reference values") {
    const auto classical = model_terms(CostModel::classical, 0.5, 0.5, Rate(0.0));
    REQUIRE(classical.size() == 3);
    for (Rate r : classical) CHECK(r.value == doctest::Approx(0.2924813).epsilon(1e-6));

    const double a = std::sqrt(1.0 - 0.75);  // gamma = 1
    CHECK(max_term(model_terms(CostModel::t2, a, a, Rate(0.0))) == doctest::Approx(0.2924813).epsilon(1e-6));

    CHECK(std::fabs(max_term(model_terms(CostModel::t4, 0.4434, 0.5, Rate(0.0))) - 0.2571) < 5e-4);
    CHECK(model_terms(CostModel::noqram, 0.3, 0.4, Rate(0.0)).size() == 2);
}

TEST_CASE("model_terms enforces the QRAM range") {
    CHECK_THROWS_AS((void)model_terms(CostModel::t2, 0.4, 0.4, Rate(-0.1)), RangeError);
    const Rate bound = *qram_bound(CostModel::t2, 0.4, 0.4);
    try {
        (void)model_terms(CostModel::t2, 0.4, 0.4, bound + Rate(0.01));
        FAIL("expected RangeError");
    } catch (const RangeError& e) {
        CHECK(e.bound() == doctest::Approx(bound.value));
    }
    CHECK_THROWS_AS((void)model_terms(CostModel::t5, 0.4, 0.4, *qram_bound(CostModel::t5, 0.4, 0.4) + Rate(0.01)),
                    RangeError);
    CHECK_NOTHROW((void)model_terms(CostModel::t3, 0.4, 0.4, Rate(0.4)));
    CHECK_THROWS_AS((void)model_terms(CostModel::t1, 0.0, 0.4, Rate(0.0)), DomainError);
}

TEST_CASE("t3 case split is continuous") {
    const double a = 0.45;
    const double b = 0.47;
    const double full = kListRate + t_rate(a, b).value + cap_rate(a).value + cap_rate(b).value;
    const double split = 0.5 * full;
    const double below = model_terms(CostModel::t3, a, b, Rate(split - 1e-9))[2].value;
    const double above = model_terms(CostModel::t3, a, b, Rate(split + 1e-9))[2].value;
    CHECK(std::fabs(below - above) < 1e-8);
}

TEST_CASE("closed_form_rate reference values") {
    CHECK(closed_form_rate(CostModel::t2, 13.0 / 12.0).value == doctest::Approx(0.2652574).epsilon(1e-6));
    CHECK(closed_form_rate(CostModel::t3, std::sqrt(13.0 / 12.0)).value == doctest::Approx(0.2652574).epsilon(1e-6));
    CHECK(closed_form_rate(CostModel::t5, 1.0).value == doctest::Approx(0.2924813).epsilon(1e-6));
    CHECK(std::fabs(closed_form_rate(CostModel::t5, 1.07122).value - 0.2571) < 1e-3);
    CHECK_THROWS_AS((void)closed_form_rate(CostModel::t2, 0.9), RangeError);
    CHECK_THROWS_AS((void)closed_form_rate(CostModel::t3, 1.1), RangeError);
    CHECK_THROWS_AS((void)closed_form_rate(CostModel::t1, 1.0), DomainError);
}

TEST_CASE("optimize reproduces the headline exponents") {
    const auto classical = optimize(CostModel::classical, Rate(0.0));
    CHECK(std::fabs(classical.time_rate.value - 0.29248) < 1e-4);
    CHECK(std::fabs(classical.alpha - 0.5) < 1e-3);
    CHECK(std::fabs(classical.beta - 0.5) < 1e-3);

    const auto t1 = optimize(CostModel::t1, Rate(0.0));
    CHECK(std::fabs(t1.time_rate.value - 0.26526) < 1e-4);
    CHECK(std::fabs(t1.alpha - 0.4330) < 1e-3);
    CHECK(std::fabs(t1.beta - 0.4330) < 1e-3);

    const auto t4 = optimize(CostModel::t4, Rate(0.0));
    CHECK(std::fabs(t4.time_rate.value - 0.2571) < 5e-4);
    CHECK(std::fabs(t4.alpha - 0.4434) < 2e-3);
    CHECK(std::fabs(t4.beta - 0.5) < 2e-3);
}

TEST_CASE("optimum structure") {
    for (CostModel m : kAllModels) {
        for (double g : {0.0, 0.03, 0.08, 0.2}) {
            const auto p = optimize(m, Rate(g));
            CAPTURE(to_string(m));
            CAPTURE(g);
            CHECK(std::fabs(p.time_rate.value - max_term(p.term_rates)) < 1e-12);
            CHECK(p.time_rate.value <= kClassicalTimeRate + 1e-6);
            if (m == CostModel::t2 || m == CostModel::t3 || m == CostModel::t5) CHECK(p.qram_rate.value <= g + 1e-12);
            if (m != CostModel::noqram) {
                const int active = static_cast<int>(std::count_if(p.term_rates.begin(), p.term_rates.end(), [&](Rate r) {
                    return r.value >= p.time_rate.value - 1e-5;
                }));
                CHECK(active >= 2);
            }
        }
    }
}

TEST_CASE("optimize agrees with the closed forms") {
    for (CostModel m : {CostModel::t2, CostModel::t3, CostModel::t5}) {
        const double hi = closed_form_gamma_max(m);
        for (int i = 0; i < 50; ++i) {
            const double gamma = 1.0 + (hi - 1.0) * i / 49.0;
            const double num = optimize(m, Rate(std::log2(gamma))).time_rate.value;
            CAPTURE(to_string(m));
            CAPTURE(gamma);
            CHECK(std::fabs(num - closed_form_rate(m, gamma).value) < 1e-4);
        }
    }
}

TEST_CASE("trade-off curves start classical, decrease, and flatten") {
    std::vector<double> grid;
    for (int i = 0; i <= 30; ++i) grid.push_back(0.01 * i);
    for (CostModel m : kAllModels) {
        const auto curve = tradeoff_curve(m, grid);
        CAPTURE(to_string(m));
        if (m == CostModel::t2 || m == CostModel::t3 || m == CostModel::t5 || m == CostModel::classical)
            CHECK(std::fabs(curve.front().time_rate.value - 0.29248) < 1e-4);
        for (std::size_t i = 1; i < curve.size(); ++i)
            CHECK(curve[i].time_rate.value <= curve[i - 1].time_rate.value + 1e-9);
    }
    CHECK(optimize(CostModel::t2, Rate(0.3)).time_rate.value == doctest::Approx(0.2652574).epsilon(1e-6));
    CHECK(optimize(CostModel::t5, Rate(0.3)).time_rate.value == doctest::Approx(0.2571442).epsilon(1e-5));
    CHECK_THROWS_AS((void)tradeoff_curve(CostModel::t2, std::vector<double>{0.1, 0.0}), DomainError);
}

TEST_CASE("saturation points") {
    CHECK(std::fabs(saturation_gamma_rate(CostModel::t2).value - 0.11548) < 5e-4);
    CHECK(std::fabs(saturation_gamma_rate(CostModel::t3).value - 0.0577) < 5e-4);
    CHECK(std::fabs(saturation_gamma_rate(CostModel::t5).value - std::log2(1.07122)) < 1e-3);
}

TEST_CASE("lower bound and blocked search rates") {
    CHECK(lower_bound_rate(Rate(0.0)).value == doctest::Approx(0.29248).epsilon(1e-5));
    CHECK(lower_bound_rate(Rate(0.14624)).value == doctest::Approx(0.0).epsilon(1e-5));
    CHECK(lower_bound_rate(Rate(0.3)).value == 0.0);
    CHECK(lower_bound_rate(Rate(0.05)).value == doctest::Approx(0.19248).epsilon(1e-5));

    CHECK(blocked_search_rate(Rate(0.7), Rate(0.0)).value == doctest::Approx(0.7));
    CHECK(blocked_search_rate(Rate(0.7), Rate(0.7)).value == doctest::Approx(0.35));
    CHECK(blocked_search_rate(Rate(0.5), Rate(0.2)).value == doctest::Approx(0.4));
    for (double s = 0.0; s <= 0.6; s += 0.1) {
        const double mid = blocked_search_rate(Rate(0.6), Rate(s)).value;
        CHECK(mid == doctest::Approx(0.6 - s / 2.0));
    }
    CHECK_THROWS_AS((void)blocked_search_rate(Rate(0.3), Rate(0.4)), RangeError);
}

TEST_CASE("no-QRAM curve") {
    CHECK(std::fabs(noqram_optimize(Rate(0.0)).time_rate.value - 0.414) < 0.005);
    const auto top = noqram_optimize(Rate(0.2075));
    CHECK(std::fabs(top.time_rate.value - 0.279) < 0.003);
    CHECK(t_rate(top.alpha, top.beta).value == doctest::Approx(0.2075).epsilon(1e-6));

    std::vector<double> grid;
    for (int i = 0; i < 30; ++i) grid.push_back(0.2075 * i / 29.0);
    const auto curve = noqram_curve(grid);
    std::vector<double> y;
    for (const auto& p : curve) y.push_back(p.time_rate.value);
    const LineFit fit = fit_line(grid, y);
    CHECK(std::fabs(fit.slope + 0.655) < 0.02);
    CHECK(std::fabs(fit.intercept - 0.414) < 0.005);
    CHECK_THROWS_AS((void)noqram_optimize(Rate(-0.1)), RangeError);
}

TEST_CASE("fit_line recovers an exact line") {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> y{1.0, 3.0, 5.0, 7.0};
    const LineFit fit = fit_line(x, y);
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.intercept == doctest::Approx(1.0));
}

TEST_CASE("BKZ comparison curves") {
    const double k = 700.0;
    const double expected = (k * std::log(k) / (8.0 * std::log(2.0)) - 0.547 * k + 10.4) / (2.0 * k);
    const std::vector<double> ks{100.0, 700.0};
    const auto rows = bkz_curves(ks);
    CHECK(rows[1].enum_rate.value == doctest::Approx(expected).epsilon(1e-12));
    for (const auto& row : rows) {
        CHECK(row.sieve_noqram_rate.value == doctest::Approx(0.2925).epsilon(1e-4));
        CHECK(row.sieve_fullqram_rate.value == doctest::Approx(0.2563));
    }
    const double cross = bkz_crossover(Rate(kClassicalTimeRate));
    CHECK(bkz_enum_rate(cross).value == doctest::Approx(kClassicalTimeRate).epsilon(1e-9));
    MESSAGE("enumeration overtakes the no-QRAM sieve at k = " << cross);
    CHECK_THROWS_AS((void)bkz_enum_rate(50.0), RangeError);
}

TEST_CASE("collision trade-off") {
    const double n = 20.0;
    CHECK(collision_cost(n, n / 5.0, 2.0 * n / 5.0, 0.0) == doctest::Approx(2.0 * n / 5.0 + std::log2(3.0)));
    const double direct = std::exp2(6.0 + 1.0) + std::exp2(6.0) * (std::exp2(1.0) + std::exp2(1.0));
    CHECK(collision_cost(20.0, 6.0, 2.0, 5.0) == doctest::Approx(std::log2(direct)).epsilon(1e-12));
    CHECK(std::isfinite(collision_cost(n, 0.0, n, 0.0)));

    const auto opt = collision_optimize(20.0, 5.0);
    CHECK(opt.l == doctest::Approx(6.0));
    CHECK(opt.r == doctest::Approx(2.0));
    CHECK(opt.time_bits == doctest::Approx(7.0));
    CHECK(opt.memory_bits == doctest::Approx(6.0));
    const auto zero = collision_optimize(40.0, 0.0);
    CHECK(zero.time_bits == doctest::Approx(16.0));
    CHECK(zero.memory_bits == doctest::Approx(8.0));
    CHECK_THROWS_AS((void)collision_optimize(30.0, 11.0), RangeError);
    CHECK_THROWS_AS((void)collision_cost(20.0, 2.0, 3.0, 5.0), RangeError);

    for (double g : {0.0, 2.0, 5.0}) {
        const auto closed = collision_optimize(20.0, g);
        const auto grid = collision_grid_optimize(20.0, g, 0.01);
        CHECK(std::fabs(grid.time_bits - closed.time_bits) < 0.01);
        CHECK(std::fabs(grid.l - closed.l) <= 0.01 + 1e-9);
        CHECK(std::fabs(grid.r - closed.r) <= 0.01 + 1e-9);
    }
}

TEST_CASE("multi-target preimage trade-off") {
    const double n = 21.0;
    CHECK(mtps_optimize(n, std::nullopt, 0.0).time_bits == doctest::Approx(3.0 * n / 7.0));
    CHECK(mtps_optimize(n, 6.0, 0.0).time_bits == doctest::Approx(n / 2.0 - 1.0));
    const auto small = mtps_optimize(n, 6.0, 1.5);
    CHECK(small.time_bits == doctest::Approx(n / 2.0 - 1.0 - 0.5));
    CHECK(small.r == doctest::Approx(3.0));
    CHECK(mtps_cost(n, 6.0, 3.0, 1.5) ==
          doctest::Approx(std::log2(std::exp2(6.0) + std::exp2(7.5) * (std::exp2(1.5) + std::exp2(1.5)))).epsilon(1e-12));
    CHECK_THROWS_AS((void)mtps_cost(n, 6.0, 5.0, 2.0), RangeError);

    for (double g : {0.0, 1.0, 3.0}) {
        for (std::optional<double> t : {std::optional<double>{}, std::optional<double>{5.0}}) {
            const auto closed = mtps_optimize(n, t, g);
            const auto grid = mtps_grid_optimize(n, t, g, 0.01);
            CHECK(std::fabs(grid.time_bits - closed.time_bits) < 0.01);
        }
    }
}

TEST_CASE("log-sum costs match direct summation") {
    for (double n = 8.0; n <= 40.0; n += 8.0) {
        for (double l = 1.0; l < n / 2; l += 1.5) {
            for (double r = 0.0; r + l <= n; r += 2.5) {
                const double g = 0.5;
                const long double direct = std::exp2l(l + r / 2) + std::exp2l((n - r - l) / 2) *
                                                                       (std::exp2l(r / 2) + std::exp2l(l - g));
                CHECK(std::fabs(collision_cost(n, l, r, g) - static_cast<double>(std::log2l(direct))) < 1e-9);
            }
        }
        for (double t = 1.0; t <= n; t += 3.0) {
            for (double r = 0.0; r <= t - 0.5; r += 1.0) {
                const double g = 0.5;
                const long double direct = std::exp2l(t) + std::exp2l((n - t) / 2) *
                                                               (std::exp2l(r / 2) + std::exp2l(t - r - g));
                CHECK(std::fabs(mtps_cost(n, t, r, g) - static_cast<double>(std::log2l(direct))) < 1e-9);
            }
        }
    }
}
