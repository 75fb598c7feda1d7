#pragma once

// Hash-based near-neighbor search over a filter family (Query and
// FindAllSolutions methods) and one Nguyen-Vidick sieve step, with the
// classical query ledger.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <vector>

#include "sievelab/rpc_filter.hpp"
#include "sievelab/vectors.hpp"

namespace sievelab {

enum class InstanceMode : std::uint8_t { unit = 0, norm = 1 };

struct SieveInstance {
    VectorList vectors;
    InstanceMode mode = InstanceMode::unit;
    double radius = 1.0;  // R; every vector has norm <= R (== 1 in unit mode)
    double theta = std::numbers::pi / 3;
    double shrink_factor = 1.0;  // R'/R

    [[nodiscard]] std::size_t dim() const noexcept { return vectors.dim(); }
    [[nodiscard]] std::size_t size() const noexcept { return vectors.size(); }

    /// n uniform unit vectors in R^d.
    static SieveInstance random_unit(std::size_t n, std::size_t d, std::uint64_t seed);
    /// n uniform vectors on the sphere of radius R (norm mode).
    static SieveInstance random_sphere(std::size_t n, std::size_t d, double radius, std::uint64_t seed);

    /// Throws DomainError if the norm invariant of the mode fails.
    void validate() const;

    void save(std::ostream& out) const;
    static SieveInstance load(std::istream& in);

    friend bool operator==(const SieveInstance&, const SieveInstance&) = default;
};

/// Counters for the classical query cost model.
struct QueryLedger {
    std::uint64_t filter_queries = 0;         // 1 + |Z| per relevant-filter enumeration
    std::uint64_t inner_product_queries = 0;  // every <x, y> >= cos(theta) test
    std::uint64_t insertions = 0;             // bucket insertions
    std::uint64_t oracle_evals = 0;           // quantum search oracle calls
    std::uint64_t qram_reloads = 0;           // QRAM block loads

    QueryLedger& operator+=(const QueryLedger& o) noexcept;
    friend QueryLedger operator+(QueryLedger a, const QueryLedger& b) noexcept { return a += b; }
    friend bool operator==(const QueryLedger&, const QueryLedger&) = default;
};

struct Buckets {
    std::vector<std::vector<std::uint32_t>> insert_side;  // B_i: beta-relevant vectors, ascending
    std::vector<std::vector<std::uint32_t>> query_side;   // A_i: alpha-relevant vectors (FAS only)
};

/// Ordered pair (query-side index, insert-side index).
struct IndexPair {
    std::uint32_t query;
    std::uint32_t insert;
    friend auto operator<=>(const IndexPair&, const IndexPair&) = default;
};

/// Sorted, duplicate-free pair list.
using PairSet = std::vector<IndexPair>;

/// Inserts every vector into the buckets of its beta-relevant filters.
[[nodiscard]] Buckets preprocess(const SieveInstance& instance, const FilterFamily& family, double beta,
                                 QueryLedger& ledger);

/// For every x, tests x against each bucket of its alpha-relevant filters.
[[nodiscard]] PairSet query_method(const SieveInstance& instance, const FilterFamily& family, double alpha,
                                   const Buckets& buckets, QueryLedger& ledger);

/// Builds both bucket sides, then tests every (x, y) in A_i x B_i. Returns the
/// same pair set as preprocess + query_method on the same family.
[[nodiscard]] PairSet fas_method(const SieveInstance& instance, const FilterFamily& family, double alpha,
                                 double beta, QueryLedger& ledger);

/// One sieve step: for every v (in index order) take the first LSF-found w with
/// 0 < |v - w| <= shrink_factor R and emit v - w.
[[nodiscard]] VectorList sieve_step(const SieveInstance& instance, const FilterFamily& family, double alpha,
                                    double beta, double shrink_factor, QueryLedger& ledger);

/// Exact pair set {(x, y) : x != y, <x^, y^> >= cos(theta)} over normalized vectors.
/// Throws SizeError for n > 1e5.
[[nodiscard]] PairSet brute_force_pairs(const SieveInstance& instance, double theta);

/// Number of vectors with at least one pair partner.
[[nodiscard]] std::size_t vectors_with_partner(const PairSet& pairs);

struct ExpectedLedger {
    double insert_filter_hits = 0.0;  // n t C(beta)
    double query_filter_hits = 0.0;   // n t C(alpha)
    double inner_products = 0.0;      // n^2 t C(alpha) C(beta)
    double enumerations = 0.0;        // 2n: one beta and one alpha enumeration per vector

    /// Predicted filter_queries of preprocess + one query pass.
    [[nodiscard]] double filter_queries() const noexcept {
        return enumerations + insert_filter_hits + query_filter_hits;
    }
};

/// Ledger prediction from exact cap volumes.
[[nodiscard]] ExpectedLedger expected_ledger(std::size_t n, std::uint64_t t, double alpha, double beta, std::size_t d);

}  // namespace sievelab
