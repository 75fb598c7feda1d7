#pragma once

// Idealized query-count emulation of the bounded-QRAM collision and
// multi-target preimage algorithms. Every Grover-style stage is replaced by
// its iteration count; the randomness is the number of marked elements seen by
// the outer amplification and the retries it needs.

#include <cstdint>
#include <optional>
#include <vector>

namespace sievelab {

struct EmulationPlan {
    double n = 0.0;
    double l = 0.0;  // log2 of the precomputed list (collision) ; unused for MTPS
    double r = 0.0;
    double gamma = 0.0;
    std::optional<double> t;  // log2 of the target count, MTPS only
    std::uint64_t trials = 10;
    std::uint64_t seed = 0x5EED;
};

struct EmulationResult {
    double mean_queries = 0.0;
    double log2_mean = 0.0;
    double formula_bits = 0.0;  // collision_cost / mtps_cost at the plan
    std::vector<double> trial_queries;
};

/// Largest n the emulator accepts.
inline constexpr double kMaxEmulatedBits = 22.0;

/// Precomputation 2^l * ceil(pi/4 * 2^{r/2}), then an outer amplification over
/// 2^{n-r-l} candidates whose iterations each cost ceil(pi/4 * 2^{r/2}) to
/// produce a candidate plus ceil(2^{l-gamma}) block lookups to test it.
/// Throws SizeError for n > 22 and RangeError for invalid parameters.
[[nodiscard]] EmulationResult emulate_collision_queries(const EmulationPlan& plan);

/// Loading 2^t targets, then an outer amplification over 2^{n-t} inputs whose
/// iterations cost ceil(pi/4 * 2^{r/2}) + ceil(2^{t-r-gamma}). Requires plan.t.
[[nodiscard]] EmulationResult emulate_mtps_queries(const EmulationPlan& plan);

}  // namespace sievelab
