#pragma once

// Filter families for locality-sensitive filtering: explicit random centers,
// or random product codes whose codewords concatenate one short vector per
// block. Product codes support branch-and-bound enumeration of relevant
// filters and near-uniform sampling of alpha-close filters.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sievelab/rng.hpp"
#include "sievelab/vectors.hpp"

namespace sievelab {

enum class FilterKind : std::uint8_t { explicit_centers = 0, rpc = 1 };

class FilterFamily {
public:
    /// t Gaussian-sampled unit centers in R^d.
    static FilterFamily explicit_centers(std::size_t d, std::uint64_t t, std::uint64_t seed);
    /// Product code of `blocks` sublists with m vectors each, in R^{d/blocks}, scaled to
    /// norm 1/sqrt(blocks). Filter count m^blocks. Throws ConfigError if blocks does not
    /// divide d, SizeError if m^blocks overflows 2^62.
    static FilterFamily random_product_code(std::size_t d, std::size_t m, std::size_t blocks, std::uint64_t seed);

    [[nodiscard]] FilterKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::uint64_t size() const noexcept { return size_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::size_t block_count() const noexcept { return blocks_.size(); }
    [[nodiscard]] std::size_t block_size() const noexcept { return block_size_; }
    [[nodiscard]] std::size_t block_dim() const noexcept { return blocks_.empty() ? dim_ : dim_ / blocks_.size(); }

    /// Explicit centers, one row per filter (explicit families only).
    [[nodiscard]] const VectorList& centers() const noexcept { return centers_; }
    /// Sub-vectors of block b (product codes only).
    [[nodiscard]] const VectorList& block(std::size_t b) const { return blocks_.at(b); }

    /// Digit of filter i in block b. Block 0 is the most significant digit.
    [[nodiscard]] std::size_t digit(std::uint64_t index, std::size_t b) const noexcept;
    /// Materialized center of filter i.
    [[nodiscard]] std::vector<double> center(std::uint64_t index) const;
    /// <v, c_i>; for product codes the block inner products are summed in block order.
    [[nodiscard]] double inner_product(std::span<const double> v, std::uint64_t index) const;

    void save(std::ostream& out) const;
    static FilterFamily load(std::istream& in);

    friend bool operator==(const FilterFamily&, const FilterFamily&) = default;

private:
    FilterKind kind_ = FilterKind::explicit_centers;
    std::size_t dim_ = 0;
    std::uint64_t size_ = 0;
    std::uint64_t seed_ = 0;
    std::size_t block_size_ = 0;
    VectorList centers_;
    std::vector<VectorList> blocks_;
};

struct RelevantFilters {
    std::vector<std::uint64_t> indices;  // sorted ascending
    std::uint64_t nodes_visited = 0;
};

/// All filters with <v, c_i> >= alpha. Explicit families are scanned; product
/// codes use depth-first branch and bound over blocks.
[[nodiscard]] RelevantFilters relevant_filters(const FilterFamily& family, std::span<const double> v, double alpha);

/// Dynamic-programming tree over a product code for sampling pseudo-alpha-close
/// filters. Block scores <v_b, c_b> are floored to multiples of
/// delta = (2/sqrt(B)) / grid_size; a filter is pseudo-close when its floored
/// levels sum to at least ceil(alpha/delta) - B. Every alpha-close filter is
/// pseudo-close, and every pseudo-close filter is (alpha - epsilon)-close with
/// epsilon = B delta.
class SampleTree {
public:
    [[nodiscard]] int grid_size() const noexcept { return grid_size_; }
    [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    /// Number of pseudo-close leaves.
    [[nodiscard]] std::uint64_t root_count() const noexcept { return root_count_; }
    /// Coin count R = ceil(log2 root_count) + 4.
    [[nodiscard]] int coin_bits() const noexcept { return coin_bits_; }

    /// Filter index selected by the low coin_bits() bits of `coins`. The coins
    /// are mapped to a leaf rank floor(c * root_count / 2^R), which the DP table
    /// unranks block by block. Throws EmptySetError when root_count is 0 and
    /// DomainError if bits above coin_bits() are set.
    [[nodiscard]] std::uint64_t sample(std::uint64_t coins) const;
    [[nodiscard]] std::uint64_t sample(Rng& rng) const;

private:
    friend SampleTree build_sample_tree(const FilterFamily&, std::span<const double>, double, int);

    struct Choice {
        long level;
        std::uint32_t digit;
    };
    // Leaves of blocks b..B-1 whose levels sum to at least r.
    [[nodiscard]] std::uint64_t tail(std::size_t b, long r) const noexcept;
    [[nodiscard]] std::uint64_t unrank(std::uint64_t rank) const;

    int grid_size_ = 64;
    double alpha_ = 0.0;
    double epsilon_ = 0.0;
    long threshold_ = 0;
    std::uint64_t radix_ = 0;
    std::uint64_t root_count_ = 0;
    int coin_bits_ = 0;
    std::vector<std::vector<Choice>> choices_;  // per block, sorted by level descending
    std::vector<long> tail_lo_;                 // smallest reachable sum of blocks b..B-1
    std::vector<std::vector<std::uint64_t>> tails_;
};

[[nodiscard]] SampleTree build_sample_tree(const FilterFamily& family, std::span<const double> v, double alpha,
                                           int grid_size = 64);

/// Free-function form of SampleTree::sample.
[[nodiscard]] std::uint64_t sample_alpha_close(const SampleTree& tree, std::uint64_t coins);

}  // namespace sievelab
