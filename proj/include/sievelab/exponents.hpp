#pragma once

// Exponent arithmetic for the LSF sieve cost models and their time/QRAM
// trade-offs, the bounded-QRAM search and lower-bound curves, the BKZ
// enumeration comparison, and the symmetric-key trade-off formulas.
//
// All lattice quantities are rates (see geometry.hpp). The list size n is
// pinned at rate 0.5 log2(4/3). Symmetric-key quantities are in bits.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sievelab/geometry.hpp"

namespace sievelab {

/// 0.5 log2(4/3): rate of the sieve list size n.
inline constexpr double kListRate = 0.2075187496394219;
/// 0.5 log2(3/2): optimal classical LSF time rate.
inline constexpr double kClassicalTimeRate = 0.2924812503605781;
/// Reference constant for the best quantum-walk sieve (used only in the BKZ comparison).
inline constexpr double kQuantumWalkSieveRate = 0.2563;

enum class CostModel { classical, t1, t2, t3, t4, t5, noqram };

[[nodiscard]] std::string_view to_string(CostModel model);
/// Parses "classical", "t1".."t5", "noqram". Returns nullopt for anything else.
[[nodiscard]] std::optional<CostModel> parse_cost_model(std::string_view name);

struct TradeoffPoint {
    Rate gamma_rate;  // log2 of the QRAM base: QRAM size 2^{gamma_rate d}
    double alpha = 0.0;
    double beta = 0.0;
    Rate t_rate;
    Rate time_rate;
    std::vector<Rate> term_rates;
    Rate qram_rate;  // QRAM actually used at the optimum
};

/// Term rates of `model` at (alpha, beta) with a QRAM of rate gamma_rate.
/// t = W(alpha, beta, pi/3)^{-1}. Throws RangeError when gamma_rate is negative
/// or exceeds the model's search-space bound (t2, t5); DomainError for invalid
/// alpha/beta.
[[nodiscard]] std::vector<Rate> model_terms(CostModel model, double alpha, double beta, Rate gamma_rate);

/// Largest gamma_rate model_terms accepts at (alpha, beta); nullopt when unbounded.
[[nodiscard]] std::optional<Rate> qram_bound(CostModel model, double alpha, double beta);

/// Closed-form optimal time rate for t2, t3, t5 as a function of the QRAM base gamma >= 1.
/// t2: gamma in [1, 13/12]; t3: [1, sqrt(13/12)]; t5: [1, 1.07122].
[[nodiscard]] Rate closed_form_rate(CostModel model, double gamma);
/// Upper end of the closed form's gamma range.
[[nodiscard]] double closed_form_gamma_max(CostModel model);

/// Minimizes the maximum term over (alpha, beta): coarse grid on (0.05, 0.95)^2
/// with step 0.01, then restarted Nelder-Mead refinement. A QRAM larger than
/// the search space it serves is used only up to that size, so trade-off
/// curves flatten past their saturation point.
[[nodiscard]] TradeoffPoint optimize(CostModel model, Rate gamma_rate);

/// One optimized point per grid value. The grid must be sorted ascending.
[[nodiscard]] std::vector<TradeoffPoint> tradeoff_curve(CostModel model, std::span<const double> gamma_rate_grid);

/// Smallest gamma_rate at which the optimized time reaches its unlimited-QRAM
/// value (within 1e-7), found by bisection. Only meaningful for t2, t3, t5.
[[nodiscard]] Rate saturation_gamma_rate(CostModel model);

/// Quantum query lower bound for the hash-based near-neighbor model with a
/// QRAM of rate s: max(0, 0.29248 - 2 s).
[[nodiscard]] Rate lower_bound_rate(Rate s_rate);

/// Evaluations for blocked search of 2^{m d} items with a 2^{s d} QRAM: m - s/2.
[[nodiscard]] Rate blocked_search_rate(Rate m_rate, Rate s_rate);

struct NoQramPoint {
    Rate t_rate;
    Rate time_rate;
    double alpha = 0.0;
    double beta = 0.0;
};

/// QRAM-less sieve time minimized over (alpha, beta) on the curve t_rate(alpha, beta) = t.
[[nodiscard]] NoQramPoint noqram_optimize(Rate t);
[[nodiscard]] std::vector<NoQramPoint> noqram_curve(std::span<const double> t_rate_grid);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};
/// Ordinary least squares y = slope x + intercept.
[[nodiscard]] LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct BkzRow {
    double k = 0.0;
    Rate enum_rate;
    Rate sieve_noqram_rate;
    Rate sieve_fullqram_rate;
};

/// Per-dimension rate of BKZ-k with quadratically sped-up enumeration:
/// (k log2(k) / 8 - 0.547 k + 10.4) / (2k).
[[nodiscard]] Rate bkz_enum_rate(double k);
[[nodiscard]] std::vector<BkzRow> bkz_curves(std::span<const double> k_grid);
/// Block size at which bkz_enum_rate crosses `sieve_rate` (bisection on [70, 1e9]).
[[nodiscard]] double bkz_crossover(Rate sieve_rate);

// ---------------------------------------------------------------------------
// Symmetric-key trade-offs (all quantities in bits).

/// log2(2^{l+r/2} + 2^{(n-r-l)/2} (2^{r/2} + 2^{l-gamma})).
/// Requires 0 <= r <= n, 0 <= gamma <= l <= n.
[[nodiscard]] double collision_cost(double n, double l, double r, double gamma);

struct CollisionOptimum {
    double l = 0.0;
    double r = 0.0;
    double time_bits = 0.0;
    double memory_bits = 0.0;
};

/// Closed-form optimum: l = (n+2g)/5, r = (2n-6g)/5, T = (2n-g)/5, memory = l.
/// RangeError for gamma outside [0, n/3].
[[nodiscard]] CollisionOptimum collision_optimize(double n, double gamma);
/// Grid search over (l, r) minimizing the dominant exponent of collision_cost.
[[nodiscard]] CollisionOptimum collision_grid_optimize(double n, double gamma, double step);

/// log2(2^t + 2^{(n-t)/2} (2^{r/2} + 2^{t-r-gamma})). Requires 0 <= r <= n, 0 <= gamma <= t - r.
[[nodiscard]] double mtps_cost(double n, double t, double r, double gamma);

struct MtpsOptimum {
    double t_used = 0.0;  // targets actually used (surplus targets are ignored)
    double r = 0.0;
    double time_bits = 0.0;
};

/// Closed-form optimum. With t unset or t >= 3n/7 - 2g/7: T = 3n/7 - 2g/7;
/// otherwise T = n/2 - t/6 - g/3. r = 2 (t_used - g) / 3.
[[nodiscard]] MtpsOptimum mtps_optimize(double n, std::optional<double> t, double gamma);
/// Grid search over (t_used <= t, r) minimizing the dominant exponent of mtps_cost.
[[nodiscard]] MtpsOptimum mtps_grid_optimize(double n, std::optional<double> t, double gamma, double step);

}  // namespace sievelab
