#include "sievelab/geometry.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "sievelab/errors.hpp"
#include "sievelab/parallel.hpp"
#include "sievelab/rng.hpp"

namespace sievelab {

namespace {

constexpr double kBetaTolerance = 1e-12;
constexpr int kBetaMaxIterations = 10000;
constexpr std::uint64_t kSamplesPerShard = 1 << 16;

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kBetaMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kBetaTolerance) return h;
    }
    throw ConvergenceError("regularized_incomplete_beta: continued fraction did not converge", a, b, h);
}

void check_unit_interval(double alpha, const char* name) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1)");
}

// Runs a sphere-sampling experiment in fixed-size shards with derived seeds;
// `count_hits(shard_samples, rng)` returns the number of hits in one shard.
template <typename Counter>
McEstimate sharded_estimate(std::uint64_t samples, std::uint64_t seed, Counter count_hits) {
    if (samples < 1000) throw DomainError("Monte-Carlo estimates need at least 1000 samples");
    const std::uint64_t shards = (samples + kSamplesPerShard - 1) / kSamplesPerShard;
    std::vector<std::uint64_t> hits(shards, 0);
    parallel_for(shards, [&](std::size_t s) {
        const std::uint64_t begin = s * kSamplesPerShard;
        const std::uint64_t len = std::min(kSamplesPerShard, samples - begin);
        Rng rng(derive_seed(seed, s));
        hits[s] = count_hits(len, rng);
    });
    McEstimate out;
    out.samples = samples;
    out.hits = std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
    out.estimate = static_cast<double>(out.hits) / static_cast<double>(samples);
    out.stderr_ = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(samples));
    return out;
}

// First two coordinates of a uniform point of S^{d-1}, from a full Gaussian vector.
struct Projection {
    double x1;
    double x2;
};

Projection sample_projection(std::size_t d, Rng& rng) {
    double g1 = 0.0;
    double g2 = 0.0;
    double len2 = 0.0;
    do {
        g1 = rng.gaussian();
        g2 = d >= 2 ? rng.gaussian() : 0.0;
        len2 = g1 * g1 + g2 * g2;
        for (std::size_t i = 2; i < d; ++i) {
            const double g = rng.gaussian();
            len2 += g * g;
        }
    } while (len2 == 0.0);
    const double inv = 1.0 / std::sqrt(len2);
    return {g1 * inv, g2 * inv};
}

}  // namespace

Rate cap_rate(double alpha) {
    if (!(std::fabs(alpha) < 1.0)) throw DomainError("cap_rate: |alpha| must be < 1");
    return Rate(0.5 * std::log2(1.0 - alpha * alpha));
}

Rate wedge_rate(double alpha, double beta, double theta) {
    check_unit_interval(alpha, "wedge_rate: alpha");
    check_unit_interval(beta, "wedge_rate: beta");
    const double s = std::sin(theta);
    if (!(theta > 0.0 && theta < std::numbers::pi) || s == 0.0)
        throw DomainError("wedge_rate: theta must lie strictly between 0 and pi");
    const double g2 = (alpha * alpha + beta * beta - 2.0 * alpha * beta * std::cos(theta)) / (s * s);
    if (g2 > 1.0) return Rate(-std::numeric_limits<double>::infinity());
    return Rate(0.5 * std::log2(1.0 - g2));
}

Rate wedge_rate_symmetric(double alpha, double theta) {
    check_unit_interval(alpha, "wedge_rate_symmetric: alpha");
    if (!(theta > 0.0 && theta < std::numbers::pi))
        throw DomainError("wedge_rate_symmetric: theta must lie strictly between 0 and pi");
    const double g2 = 2.0 * alpha * alpha / (1.0 + std::cos(theta));
    if (g2 > 1.0) return Rate(-std::numeric_limits<double>::infinity());
    return Rate(0.5 * std::log2(1.0 - g2));
}

Rate t_rate(double alpha, double beta) {
    const double arg = 1.0 - (4.0 / 3.0) * (alpha * alpha - alpha * beta + beta * beta);
    if (!(arg > 0.0)) throw DomainError("t_rate: 1 - 4/3 (a^2 - ab + b^2) must be positive");
    return Rate(-0.5 * std::log2(arg));
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw DomainError("regularized_incomplete_beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("regularized_incomplete_beta: x must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double cap_volume_exact(std::size_t d, double alpha) {
    if (d < 2) throw DomainError("cap_volume_exact: dimension must be at least 2");
    if (!(std::fabs(alpha) <= 1.0)) throw DomainError("cap_volume_exact: |alpha| must be <= 1");
    if (alpha < 0.0) return 1.0 - cap_volume_exact(d, -alpha);
    const double x = (1.0 - alpha) * (1.0 + alpha);
    return 0.5 * regularized_incomplete_beta(0.5 * (static_cast<double>(d) - 1.0), 0.5, x);
}

McEstimate cap_volume_mc(std::size_t d, double alpha, std::uint64_t samples, std::uint64_t seed) {
    if (d < 1) throw DomainError("cap_volume_mc: dimension must be positive");
    if (!(std::fabs(alpha) <= 1.0)) throw DomainError("cap_volume_mc: |alpha| must be <= 1");
    return sharded_estimate(samples, seed, [&](std::uint64_t len, Rng& rng) {
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < len; ++i)
            if (sample_projection(d, rng).x1 >= alpha) ++hits;
        return hits;
    });
}

McEstimate wedge_volume_mc(std::size_t d, double alpha, double beta, double theta, std::uint64_t samples,
                           std::uint64_t seed) {
    if (d < 2) throw DomainError("wedge_volume_mc: dimension must be at least 2");
    if (!(std::fabs(alpha) <= 1.0 && std::fabs(beta) <= 1.0))
        throw DomainError("wedge_volume_mc: |alpha|, |beta| must be <= 1");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return sharded_estimate(samples, seed, [&](std::uint64_t len, Rng& rng) {
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < len; ++i) {
            const Projection p = sample_projection(d, rng);
            if (p.x1 >= alpha && c * p.x1 + s * p.x2 >= beta) ++hits;
        }
        return hits;
    });
}

}  // namespace sievelab
