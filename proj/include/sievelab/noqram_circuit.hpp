#pragma once

// QRAM-free closest-vector circuit: one comparator chain per filter with the
// bucket's vectors hardcoded, followed by a multiplexer on the filter index.
// The circuit is evaluated classically; quantum behaviour enters through the
// minimum-finding simulation in the pipeline.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sievelab/rpc_filter.hpp"
#include "sievelab/sieve.hpp"
#include "sievelab/vectors.hpp"

namespace sievelab {

class ComparatorCircuit {
public:
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    /// Multiplexer arity t (number of chains).
    [[nodiscard]] std::size_t mux_arity() const noexcept { return chains_.size(); }
    [[nodiscard]] const VectorList& chain(std::size_t i) const { return chains_.at(i); }
    /// List index of each chain element, when built from an indexed list.
    [[nodiscard]] const std::vector<std::uint32_t>& chain_ids(std::size_t i) const { return ids_.at(i); }
    [[nodiscard]] std::size_t comparator_count() const noexcept;

    friend bool operator==(const ComparatorCircuit&, const ComparatorCircuit&) = default;

private:
    friend ComparatorCircuit build_circuit(std::size_t, std::span<const VectorList>);
    friend ComparatorCircuit build_circuit(const VectorList&, const std::vector<std::vector<std::uint32_t>>&);

    std::size_t dim_ = 0;
    std::vector<VectorList> chains_;
    std::vector<std::vector<std::uint32_t>> ids_;
};

/// Chains reproduce the buckets in order. Throws DomainError if there are no
/// buckets or a bucket has the wrong dimension.
[[nodiscard]] ComparatorCircuit build_circuit(std::size_t d, std::span<const VectorList> buckets);
/// Chains hold list[j] for every j of each bucket; chain_ids() keeps the j.
[[nodiscard]] ComparatorCircuit build_circuit(const VectorList& list,
                                              const std::vector<std::vector<std::uint32_t>>& buckets);

struct CircuitCost {
    std::uint64_t depth = 0;  // max_i max(|B_i| - 1, 0) + ceil(log2 t)
    std::uint64_t size = 0;   // sum_i max(|B_i| - 1, 0) + (t - 1)
    std::uint64_t width = 0;  // t lanes
};

[[nodiscard]] CircuitCost circuit_cost(const ComparatorCircuit& circuit);

/// Position in chain i of the vector closest to w (the incumbent wins ties, so
/// the earliest position is kept); nullopt for an empty chain. Throws
/// std::out_of_range for i >= t.
[[nodiscard]] std::optional<std::size_t> circuit_select(const ComparatorCircuit& circuit, std::size_t i,
                                                        std::span<const double> w);
/// The selected vector itself, or the zero vector for an empty chain.
[[nodiscard]] std::vector<double> circuit_eval(const ComparatorCircuit& circuit, std::size_t i,
                                               std::span<const double> w);
/// Like circuit_select but skips chain entries equal to w, so a list vector
/// never pairs with itself.
[[nodiscard]] std::optional<std::size_t> circuit_select_other(const ComparatorCircuit& circuit, std::size_t i,
                                                              std::span<const double> w);

struct OracleOutput {
    std::uint64_t filter = 0;
    std::optional<std::size_t> position;  // in the filter's chain
    std::vector<double> u;                // zero vector when the chain is empty
};

/// Samples a pseudo-alpha-close filter for w from the coins and returns the
/// closest vector of that filter's bucket. Throws EmptySetError if the tree is empty.
[[nodiscard]] OracleOutput oracle_prime(const ComparatorCircuit& circuit, const SampleTree& tree,
                                        std::span<const double> w, std::uint64_t coins);

enum class PipelineMode { exhaustive, minfind, minfind_boosted };

struct PipelinePair {
    std::uint32_t w;
    std::uint32_t u;
    friend auto operator<=>(const PipelinePair&, const PipelinePair&) = default;
};

struct PipelineReport {
    PipelineMode mode = PipelineMode::exhaustive;
    std::vector<PipelinePair> pairs;  // one per w at most, ascending in w
    std::uint64_t oracle_calls = 0;
    std::uint64_t max_oracle_calls_per_vector = 0;
    std::uint64_t vectors_without_close_filter = 0;
    std::uint64_t exhaustive_fallbacks = 0;  // minfind requests with 2^R above the guard
    int max_coin_bits = 0;
};

/// Largest coin space (2^R) the minfind mode simulates; larger trees fall back to exhaustive coins.
inline constexpr std::uint64_t kMaxMinFindCoins = std::uint64_t{1} << 14;

/// One sieve step without QRAM: buckets are the beta-relevant sets of the
/// family, and for every w the distance |oracle_prime(w, coins) - w| is
/// minimized over all coin strings (exhaustive) or by simulated minimum
/// finding. A pair is reported when 0 < |w - u| <= shrink_factor R.
[[nodiscard]] PipelineReport pipeline_step(const SieveInstance& instance, const FilterFamily& family, double alpha,
                                           double beta, PipelineMode mode, std::uint64_t seed, int grid_size = 64);

}  // namespace sievelab
