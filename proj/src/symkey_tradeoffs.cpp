#include <algorithm>
#include <cmath>
#include <limits>

#include "sievelab/errors.hpp"
#include "sievelab/exponents.hpp"

namespace sievelab {

namespace {

// log2(2^a + 2^b) without overflow.
double log_sum(double a, double b) {
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log2(1.0 + std::exp2(lo - hi));
}

double collision_dominant(double n, double l, double r, double gamma) {
    const double outer = (n - r - l) / 2.0;
    return std::max({l + r / 2.0, outer + r / 2.0, outer + l - gamma});
}

double mtps_dominant(double n, double t, double r, double gamma) {
    const double outer = (n - t) / 2.0;
    return std::max({t, outer + r / 2.0, outer + t - r - gamma});
}

void check_collision(double n, double l, double r, double gamma) {
    if (!(n > 0.0)) throw RangeError("collision: n must be positive", 0.0);
    if (r < 0.0 || r > n) throw RangeError("collision: r must lie in [0, n]", r < 0.0 ? 0.0 : n);
    if (gamma < 0.0) throw RangeError("collision: gamma must be nonnegative", 0.0);
    if (l < gamma || l > n) throw RangeError("collision: l must lie in [gamma, n]", l < gamma ? gamma : n);
}

void check_mtps(double n, double t, double r, double gamma) {
    if (!(n > 0.0)) throw RangeError("mtps: n must be positive", 0.0);
    if (t < 0.0 || t > n) throw RangeError("mtps: t must lie in [0, n]", t < 0.0 ? 0.0 : n);
    if (r < 0.0 || r > n) throw RangeError("mtps: r must lie in [0, n]", r < 0.0 ? 0.0 : n);
    if (gamma < 0.0) throw RangeError("mtps: gamma must be nonnegative", 0.0);
    if (gamma > t - r) throw RangeError("mtps: gamma must not exceed t - r", t - r);
}

}  // namespace

double collision_cost(double n, double l, double r, double gamma) {
    check_collision(n, l, r, gamma);
    const double outer = (n - r - l) / 2.0;
    return log_sum(l + r / 2.0, outer + log_sum(r / 2.0, l - gamma));
}

CollisionOptimum collision_optimize(double n, double gamma) {
    if (!(n > 0.0)) throw RangeError("collision_optimize: n must be positive", 0.0);
    if (gamma < 0.0) throw RangeError("collision_optimize: gamma must be nonnegative", 0.0);
    if (gamma > n / 3.0) throw RangeError("collision_optimize: gamma above n/3 leaves r negative", n / 3.0);
    const double l = (n + 2.0 * gamma) / 5.0;
    return {l, (2.0 * n - 6.0 * gamma) / 5.0, (2.0 * n - gamma) / 5.0, l};
}

CollisionOptimum collision_grid_optimize(double n, double gamma, double step) {
    if (!(step > 0.0)) throw RangeError("collision_grid_optimize: step must be positive", 0.0);
    if (!(n > 0.0) || gamma < 0.0 || gamma > n) throw RangeError("collision_grid_optimize: need 0 <= gamma <= n", n);
    CollisionOptimum best{0.0, 0.0, std::numeric_limits<double>::infinity(), 0.0};
    const long l_steps = static_cast<long>(std::floor((n - gamma) / step + 1e-9));
    for (long i = 0; i <= l_steps; ++i) {
        const double l = gamma + static_cast<double>(i) * step;
        const long r_steps = static_cast<long>(std::floor((n - l) / step + 1e-9));
        for (long j = 0; j <= r_steps; ++j) {
            const double r = static_cast<double>(j) * step;
            const double v = collision_dominant(n, l, r, gamma);
            if (v < best.time_bits) best = {l, r, v, l};
        }
    }
    return best;
}

double mtps_cost(double n, double t, double r, double gamma) {
    check_mtps(n, t, r, gamma);
    const double outer = (n - t) / 2.0;
    return log_sum(t, outer + log_sum(r / 2.0, t - r - gamma));
}

MtpsOptimum mtps_optimize(double n, std::optional<double> t, double gamma) {
    if (!(n > 0.0)) throw RangeError("mtps_optimize: n must be positive", 0.0);
    if (gamma < 0.0) throw RangeError("mtps_optimize: gamma must be nonnegative", 0.0);
    const double knee = 3.0 * n / 7.0 - 2.0 * gamma / 7.0;
    MtpsOptimum out;
    if (!t || *t >= knee) {
        out.t_used = knee;
        out.time_bits = knee;
    } else {
        out.t_used = *t;
        out.time_bits = n / 2.0 - *t / 6.0 - gamma / 3.0;
    }
    if (gamma > out.t_used) throw RangeError("mtps_optimize: gamma exceeds the targets in use", out.t_used);
    out.r = 2.0 * (out.t_used - gamma) / 3.0;
    return out;
}

MtpsOptimum mtps_grid_optimize(double n, std::optional<double> t, double gamma, double step) {
    if (!(step > 0.0)) throw RangeError("mtps_grid_optimize: step must be positive", 0.0);
    const double t_max = t ? std::min(*t, n) : n;
    if (!(n > 0.0) || gamma < 0.0 || gamma > t_max) throw RangeError("mtps_grid_optimize: need 0 <= gamma <= t", t_max);
    MtpsOptimum best{0.0, 0.0, std::numeric_limits<double>::infinity()};
    const long t_steps = static_cast<long>(std::floor((t_max - gamma) / step + 1e-9));
    for (long i = 0; i <= t_steps; ++i) {
        const double tu = gamma + static_cast<double>(i) * step;
        const long r_steps = static_cast<long>(std::floor((tu - gamma) / step + 1e-9));
        for (long j = 0; j <= r_steps; ++j) {
            const double r = static_cast<double>(j) * step;
            const double v = mtps_dominant(n, tu, r, gamma);
            if (v < best.time_bits) best = {tu, r, v};
        }
    }
    return best;
}

}  // namespace sievelab
