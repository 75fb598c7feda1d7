#include <doctest.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>

#include "sievelab/errors.hpp"
#include "sievelab/geometry.hpp"
#include "sievelab/rng.hpp"
#include "sievelab/vectors.hpp"

using namespace sievelab;
using std::numbers::pi;

namespace {
const double kRoot3Over4 = std::sqrt(3.0) / 4.0;
}

TEST_CASE("cap_rate reference values") {
    CHECK(cap_rate(0.0).value == doctest::Approx(0.0));
    CHECK(cap_rate(0.5).value == doctest::Approx(-0.20752).epsilon(1e-5));
    CHECK(cap_rate(kRoot3Over4).value == doctest::Approx(0.5 * std::log2(13.0 / 16.0)).epsilon(1e-12));
    CHECK(std::fabs(cap_rate(kRoot3Over4).value + 0.14975) < 5e-5);
    CHECK_THROWS_AS((void)cap_rate(1.0), DomainError);
    CHECK_THROWS_AS((void)cap_rate(-1.2), DomainError);
}

TEST_CASE("wedge_rate reference values") {
    CHECK(wedge_rate(0.5, 0.5, pi / 3).value == doctest::Approx(-0.2924813).epsilon(1e-6));
    CHECK(std::fabs(wedge_rate(0.4434, 0.5, pi / 3).value + 0.2571) < 1e-4);
    CHECK(std::fabs(wedge_rate(0.3, 0.3, 1e-4).value - cap_rate(0.3).value) < 1e-6);
    CHECK(std::isinf(wedge_rate(0.9, 0.9, pi / 2).value));
    CHECK_THROWS_AS((void)wedge_rate(0.5, 0.5, 0.0), DomainError);
    CHECK_THROWS_AS((void)wedge_rate(0.5, 0.5, pi), DomainError);
}

TEST_CASE("wedge_rate is symmetric and matches the alpha = beta form") {
    for (double a = 0.05; a < 0.6; a += 0.05) {
        for (double b = 0.05; b < 0.6; b += 0.07) {
            CHECK(wedge_rate(a, b, 1.1).value == wedge_rate(b, a, 1.1).value);
        }
        for (double th = 0.3; th < 3.0; th += 0.3) {
            const Rate w = wedge_rate(a, a, th);
            if (std::isfinite(w.value)) CHECK(std::fabs(w.value - wedge_rate_symmetric(a, th).value) < 1e-12);
        }
    }
}

TEST_CASE("t_rate reference values") {
    CHECK(t_rate(0.5, 0.5).value == doctest::Approx(0.2924813).epsilon(1e-6));
    // At the t1 optimum the filter count equals the list size; the time, not t, is (13/9)^{d/2}.
    CHECK(t_rate(kRoot3Over4, kRoot3Over4).value == doctest::Approx(0.5 * std::log2(4.0 / 3.0)).epsilon(1e-12));
    CHECK(t_rate(0.0, 0.0).value == doctest::Approx(0.0));
    CHECK(t_rate(0.4, 0.7).value == doctest::Approx(-wedge_rate(0.4, 0.7, pi / 3).value));
    CHECK_THROWS_AS((void)t_rate(0.99, 0.0), DomainError);
}

TEST_CASE("incomplete beta agrees with an independent implementation") {
    for (double a : {0.5, 1.5, 3.5, 49.5, 199.5}) {
        for (double x : {0.01, 0.2, 0.5, 0.75, 0.93}) {
            const double ref = boost::math::ibeta(a, 0.5, x);
            CHECK(regularized_incomplete_beta(a, 0.5, x) == doctest::Approx(ref).epsilon(1e-10));
        }
    }
}

TEST_CASE("cap_volume_exact reference values") {
    for (std::size_t d : {2u, 3u, 10u, 400u}) CHECK(cap_volume_exact(d, 0.0) == doctest::Approx(0.5));
    CHECK(cap_volume_exact(2, 0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(cap_volume_exact(3, 0.5) == doctest::Approx(0.25).epsilon(1e-12));  // Archimedes: (1 - a) / 2
    CHECK(std::fabs(std::log2(cap_volume_exact(400, 0.5)) / 400 + 0.20752) < 0.012);
    CHECK(cap_volume_exact(7, -1.0) == doctest::Approx(1.0));
    CHECK(cap_volume_exact(7, 1.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS((void)cap_volume_exact(5, 1.5), DomainError);
    CHECK_THROWS_AS((void)cap_volume_exact(1, 0.5), DomainError);
}

TEST_CASE("cap_volume_exact is strictly decreasing in alpha") {
    for (std::size_t d : {2u, 5u, 30u}) {
        double prev = 1.0;
        for (double a = -0.95; a < 0.96; a += 0.05) {
            const double v = cap_volume_exact(d, a);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("cap slope approaches the rate") {
    double prev_gap = 1.0;
    for (std::size_t d : {100u, 200u, 400u}) {
        const double slope = std::log2(cap_volume_exact(d, kRoot3Over4)) / static_cast<double>(d);
        const double gap = std::fabs(slope - cap_rate(kRoot3Over4).value);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 0.012);
}

TEST_CASE("cap_volume_mc matches exact values") {
    const auto half = cap_volume_mc(8, 0.0, 100000, 1);
    CHECK(std::fabs(half.estimate - 0.5) <= 3 * half.stderr_);
    const auto d8 = cap_volume_mc(8, 0.5, 1000000, 2);
    CHECK(std::fabs(d8.estimate - cap_volume_exact(8, 0.5)) <= 3 * d8.stderr_);
    const auto d2 = cap_volume_mc(2, 0.5, 1000000, 3);
    CHECK(std::fabs(d2.estimate - 1.0 / 3.0) <= 3 * d2.stderr_);
    CHECK_THROWS_AS((void)cap_volume_mc(8, 0.5, 999, 1), DomainError);
}

TEST_CASE("wedge_volume_mc reference values") {
    const auto arc = wedge_volume_mc(2, 0.0, 0.0, pi / 3, 1000000, 4);
    CHECK(std::fabs(arc.estimate - 1.0 / 3.0) <= 3 * arc.stderr_);
    const auto same = wedge_volume_mc(10, 0.0, 0.0, 1e-6, 200000, 5);
    CHECK(std::fabs(same.estimate - 0.5) <= 3 * same.stderr_);
}

TEST_CASE("wedge is contained in each cap") {
    const auto w = wedge_volume_mc(6, 0.3, 0.2, 1.0, 400000, 6);
    const auto ca = cap_volume_mc(6, 0.3, 400000, 7);
    const auto cb = cap_volume_mc(6, 0.2, 400000, 8);
    CHECK(w.estimate <= std::min(ca.estimate, cb.estimate) + 3 * w.stderr_);
}

TEST_CASE("Monte-Carlo estimates are reproducible") {
    const auto a = wedge_volume_mc(12, 0.2, 0.3, 1.2, 300000, 99);
    const auto b = wedge_volume_mc(12, 0.2, 0.3, 1.2, 300000, 99);
    CHECK(a.hits == b.hits);
    CHECK(cap_volume_mc(12, 0.3, 200000, 5).hits == cap_volume_mc(12, 0.3, 200000, 5).hits);
}

TEST_CASE("sample_sphere is uniform on the sphere") {
    Rng rng(42);
    constexpr int kSamples = 100000;
    constexpr std::size_t d = 5;
    std::vector<double> mean(d, 0.0);
    int positive = 0;
    for (int i = 0; i < kSamples; ++i) {
        const UnitVector v = sample_sphere(d, rng);
        REQUIRE(std::fabs(norm(v.coords()) - 1.0) < 1e-9);
        for (std::size_t j = 0; j < d; ++j) mean[j] += v.coords()[j] / kSamples;
        positive += v.coords()[0] >= 0.0;
    }
    for (double m : mean) CHECK(std::fabs(m) < 9.0 / std::sqrt(kSamples * static_cast<double>(d)));
    CHECK(std::fabs(positive / static_cast<double>(kSamples) - 0.5) < 0.01);
}

namespace {

// W_d(alpha, beta, theta) by quadrature over the first coordinate. The first two
// coordinates of a uniform point of S^{d-1} have density (d-2)/(2 pi) (1-a^2-b^2)^{(d-4)/2};
// the inner integral over the second coordinate is an incomplete beta function.
double wedge_quadrature(std::size_t d, double alpha, double beta, double theta) {
    const double k = (static_cast<double>(d) - 4.0) / 2.0;
    const double full = boost::math::beta(0.5, k + 1.0);
    auto tail = [&](double s0) {  // integral of (1 - s^2)^k over [s0, 1]
        s0 = std::clamp(s0, -1.0, 1.0);
        const double upper = 0.5 * boost::math::beta(k + 1.0, 0.5, 1.0 - s0 * s0);
        return s0 >= 0.0 ? upper : full - upper;
    };
    auto integrand = [&](double a) {
        const double rest = 1.0 - a * a;
        if (rest <= 0.0) return 0.0;
        const double s0 = (beta - a * std::cos(theta)) / (std::sin(theta) * std::sqrt(rest));
        return std::pow(rest, k + 0.5) * tail(s0);
    };
    const double c = (static_cast<double>(d) - 2.0) / (2.0 * pi);
    return c * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, alpha, 1.0, 20, 1e-13);
}

}  // namespace

TEST_CASE("wedge Monte Carlo agrees with quadrature") {
    for (std::size_t d : {3u, 8u, 16u}) {
        const double exact = wedge_quadrature(d, 0.5, 0.5, pi / 3);
        const auto mc = wedge_volume_mc(d, 0.5, 0.5, pi / 3, 1000000, 11 + d);
        CHECK(std::fabs(mc.estimate - exact) <= 3 * mc.stderr_);
    }
    const double cap = wedge_quadrature(20, 0.3, 0.0, pi / 2 - 1e-9);
    CHECK(cap == doctest::Approx(cap_volume_exact(20, 0.3) * 0.5).epsilon(1e-6));
}

TEST_CASE("wedge slope converges to the wedge rate") {
    const double rate = wedge_rate(0.5, 0.5, pi / 3).value;
    double prev_gap = 1.0;
    for (std::size_t d : {100u, 200u, 400u, 800u, 1600u}) {
        const double slope = std::log2(wedge_quadrature(d, 0.5, 0.5, pi / 3)) / static_cast<double>(d);
        const double gap = std::fabs(slope - rate);
        MESSAGE("d=" << d << " slope=" << slope);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 0.02);
}
