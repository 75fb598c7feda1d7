#pragma once

// Spherical caps and wedges on S^{d-1}.
//
// Rates are per-dimension base-2 exponents: a quantity q(d) = 2^{r d + o(d)}
// has rate r. Exact and Monte-Carlo routines return plain relative measures.

#include <compare>
#include <cstddef>
#include <cstdint>

namespace sievelab {

/// Per-dimension base-2 exponent. Products of quantities add their rates.
struct Rate {
    double value = 0.0;

    constexpr Rate() = default;
    constexpr explicit Rate(double v) : value(v) {}

    constexpr Rate operator+(Rate o) const { return Rate(value + o.value); }
    constexpr Rate operator-(Rate o) const { return Rate(value - o.value); }
    constexpr Rate operator-() const { return Rate(-value); }
    constexpr Rate operator*(double k) const { return Rate(value * k); }
    constexpr Rate operator/(double k) const { return Rate(value / k); }
    constexpr Rate& operator+=(Rate o) {
        value += o.value;
        return *this;
    }
    constexpr auto operator<=>(const Rate&) const = default;
};

/// Rate of C_d(alpha) = poly(d) (1 - alpha^2)^{d/2}. Throws DomainError for |alpha| >= 1.
[[nodiscard]] Rate cap_rate(double alpha);

/// Rate of the wedge W_d(alpha, beta, theta): 0.5 log2(1 - g^2) with
/// g^2 = (alpha^2 + beta^2 - 2 alpha beta cos theta) / sin^2 theta.
/// Returns -infinity when g > 1 (asymptotically empty wedge).
/// Throws DomainError if alpha or beta lie outside [0, 1) or sin theta = 0.
[[nodiscard]] Rate wedge_rate(double alpha, double beta, double theta);

/// The alpha = beta specialization 0.5 log2(1 - 2 alpha^2 / (1 + cos theta)).
[[nodiscard]] Rate wedge_rate_symmetric(double alpha, double theta);

/// Rate of t = W_d(alpha, beta, pi/3)^{-1}: -0.5 log2(1 - 4/3 (alpha^2 - alpha beta + beta^2)).
[[nodiscard]] Rate t_rate(double alpha, double beta);

/// Regularized incomplete beta I_x(a, b), continued fraction with relative tolerance 1e-12.
[[nodiscard]] double regularized_incomplete_beta(double a, double b, double x);

/// Exact relative measure of the cap {x in S^{d-1} : <x, v> >= alpha}, d >= 2, alpha in [-1, 1].
[[nodiscard]] double cap_volume_exact(std::size_t d, double alpha);

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;  // sqrt(p(1-p)/samples)
    std::uint64_t hits = 0;
    std::uint64_t samples = 0;
};

/// Fraction of uniform sphere samples in the cap around e_1. samples >= 1000.
[[nodiscard]] McEstimate cap_volume_mc(std::size_t d, double alpha, std::uint64_t samples, std::uint64_t seed);

/// Fraction of uniform sphere samples in the wedge H_{v,alpha} ∩ H_{w,beta},
/// with v = e_1 and w = cos(theta) e_1 + sin(theta) e_2. samples >= 1000, d >= 2.
[[nodiscard]] McEstimate wedge_volume_mc(std::size_t d, double alpha, double beta, double theta,
                                         std::uint64_t samples, std::uint64_t seed);

}  // namespace sievelab
