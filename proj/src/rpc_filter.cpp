#include "sievelab/rpc_filter.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include "sievelab/binary_io.hpp"
#include "sievelab/errors.hpp"

namespace sievelab {

namespace {

constexpr std::string_view kFamilyMagic = "SLFAMILY";
constexpr std::uint64_t kFamilyVersion = 1;
constexpr std::uint64_t kMaxFilters = std::uint64_t{1} << 60;
constexpr double kPruneSlack = 1e-12;

std::uint64_t checked_power(std::uint64_t base, std::size_t exp) {
    std::uint64_t out = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base != 0 && out > kMaxFilters / base) throw SizeError("product code has more than 2^60 filters");
        out *= base;
    }
    return out;
}

std::span<const double> block_of(std::span<const double> v, std::size_t b, std::size_t width) {
    return v.subspan(b * width, width);
}

// Per-block scores <v_b, c_b>, indexed [block][digit].
std::vector<std::vector<double>> block_scores(const FilterFamily& family, std::span<const double> v) {
    const std::size_t width = family.block_dim();
    std::vector<std::vector<double>> scores(family.block_count());
    for (std::size_t b = 0; b < family.block_count(); ++b) {
        const VectorList& sub = family.block(b);
        scores[b].resize(sub.size());
        for (std::size_t j = 0; j < sub.size(); ++j) scores[b][j] = dot(block_of(v, b, width), sub[j]);
    }
    return scores;
}

void check_query(const FilterFamily& family, std::span<const double> v) {
    if (v.size() != family.dim()) throw DomainError("query dimension does not match the filter family");
}

}  // namespace

FilterFamily FilterFamily::explicit_centers(std::size_t d, std::uint64_t t, std::uint64_t seed) {
    if (d == 0) throw ConfigError("filter family needs d >= 1");
    if (t > kMaxFilters) throw SizeError("explicit family too large");
    FilterFamily f;
    f.kind_ = FilterKind::explicit_centers;
    f.dim_ = d;
    f.size_ = t;
    f.seed_ = seed;
    f.centers_ = VectorList(d);
    Rng rng(seed);
    for (std::uint64_t i = 0; i < t; ++i) f.centers_.push_back(sample_sphere(d, rng).coords());
    return f;
}

FilterFamily FilterFamily::random_product_code(std::size_t d, std::size_t m, std::size_t blocks, std::uint64_t seed) {
    if (blocks == 0 || d == 0 || d % blocks != 0) throw ConfigError("block count must divide the dimension");
    if (m == 0) throw ConfigError("product code needs at least one vector per block");
    FilterFamily f;
    f.kind_ = FilterKind::rpc;
    f.dim_ = d;
    f.size_ = checked_power(m, blocks);
    f.seed_ = seed;
    f.block_size_ = m;
    const std::size_t width = d / blocks;
    const double scale = 1.0 / std::sqrt(static_cast<double>(blocks));
    for (std::size_t b = 0; b < blocks; ++b) {
        Rng rng(derive_seed(seed, b));
        VectorList sub(width);
        std::vector<double> scaled(width);
        for (std::size_t j = 0; j < m; ++j) {
            const UnitVector u = sample_sphere(width, rng);
            for (std::size_t k = 0; k < width; ++k) scaled[k] = u[k] * scale;
            sub.push_back(scaled);
        }
        f.blocks_.push_back(std::move(sub));
    }
    return f;
}

std::size_t FilterFamily::digit(std::uint64_t index, std::size_t b) const noexcept {
    for (std::size_t k = blocks_.size() - 1; k > b; --k) index /= block_size_;
    return static_cast<std::size_t>(index % block_size_);
}

std::vector<double> FilterFamily::center(std::uint64_t index) const {
    if (index >= size_) throw DomainError("filter index out of range");
    if (kind_ == FilterKind::explicit_centers) {
        const auto row = centers_[index];
        return {row.begin(), row.end()};
    }
    std::vector<double> out;
    out.reserve(dim_);
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const auto part = blocks_[b][digit(index, b)];
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

double FilterFamily::inner_product(std::span<const double> v, std::uint64_t index) const {
    check_query(*this, v);
    if (index >= size_) throw DomainError("filter index out of range");
    if (kind_ == FilterKind::explicit_centers) return dot(v, centers_[index]);
    const std::size_t width = block_dim();
    double acc = 0.0;
    for (std::size_t b = 0; b < blocks_.size(); ++b) acc += dot(block_of(v, b, width), blocks_[b][digit(index, b)]);
    return acc;
}

void FilterFamily::save(std::ostream& out) const {
    binary::write_magic(out, kFamilyMagic, kFamilyVersion);
    binary::write_u64(out, static_cast<std::uint64_t>(kind_));
    binary::write_u64(out, dim_);
    binary::write_u64(out, size_);
    binary::write_u64(out, block_size_);
    binary::write_u64(out, blocks_.size());
    binary::write_u64(out, seed_);
    if (kind_ == FilterKind::explicit_centers) {
        binary::write_f64s(out, centers_.data());
    } else {
        for (const auto& sub : blocks_) binary::write_f64s(out, sub.data());
    }
    if (!out) throw ConfigError("failed to write filter family");
}

FilterFamily FilterFamily::load(std::istream& in) {
    binary::expect_magic(in, kFamilyMagic, kFamilyVersion);
    FilterFamily f;
    const std::uint64_t kind = binary::read_u64(in);
    if (kind > 1) throw ConfigError("filter family: unknown kind");
    f.kind_ = static_cast<FilterKind>(kind);
    f.dim_ = binary::read_u64(in);
    f.size_ = binary::read_u64(in);
    f.block_size_ = binary::read_u64(in);
    const std::uint64_t blocks = binary::read_u64(in);
    f.seed_ = binary::read_u64(in);
    auto read_list = [&](std::size_t rows, std::size_t width) {
        std::vector<double> data(rows * width);
        for (double& x : data) x = binary::read_f64(in);
        return VectorList(width, std::move(data));
    };
    if (f.kind_ == FilterKind::explicit_centers) {
        if (blocks != 0 || f.size_ > kMaxFilters) throw ConfigError("filter family: inconsistent header");
        f.centers_ = read_list(f.size_, f.dim_);
    } else {
        if (blocks == 0 || f.dim_ % blocks != 0 || checked_power(f.block_size_, blocks) != f.size_)
            throw ConfigError("filter family: inconsistent header");
        for (std::uint64_t b = 0; b < blocks; ++b) f.blocks_.push_back(read_list(f.block_size_, f.dim_ / blocks));
    }
    return f;
}

RelevantFilters relevant_filters(const FilterFamily& family, std::span<const double> v, double alpha) {
    check_query(family, v);
    RelevantFilters out;
    if (family.kind() == FilterKind::explicit_centers) {
        for (std::uint64_t i = 0; i < family.size(); ++i) {
            if (dot(v, family.centers()[i]) >= alpha) out.indices.push_back(i);
        }
        out.nodes_visited = family.size();
        return out;
    }

    const std::size_t blocks = family.block_count();
    const std::size_t m = family.block_size();
    const auto scores = block_scores(family, v);
    std::vector<std::vector<std::uint32_t>> order(blocks);
    std::vector<double> best_rest(blocks + 1, 0.0);
    for (std::size_t b = blocks; b-- > 0;) {
        order[b].resize(m);
        std::iota(order[b].begin(), order[b].end(), 0u);
        std::stable_sort(order[b].begin(), order[b].end(),
                         [&](std::uint32_t x, std::uint32_t y) { return scores[b][x] > scores[b][y]; });
        best_rest[b] = best_rest[b + 1] + scores[b][order[b][0]];
    }

    // Depth-first over blocks; block scores are accumulated in block order so the
    // leaf sum is bit-identical to FilterFamily::inner_product.
    auto visit = [&](auto&& self, std::size_t b, std::uint64_t prefix, double sum) -> void {
        for (std::uint32_t j : order[b]) {
            const double next = sum + scores[b][j];
            if (next + best_rest[b + 1] < alpha - kPruneSlack) break;
            ++out.nodes_visited;
            const std::uint64_t index = prefix * m + j;
            if (b + 1 == blocks) {
                if (next >= alpha) out.indices.push_back(index);
            } else {
                self(self, b + 1, index, next);
            }
        }
    };
    visit(visit, 0, 0, 0.0);
    std::sort(out.indices.begin(), out.indices.end());
    return out;
}

SampleTree build_sample_tree(const FilterFamily& family, std::span<const double> v, double alpha, int grid_size) {
    if (family.kind() != FilterKind::rpc) throw ConfigError("sample trees need a random product code");
    if (grid_size < 1) throw ConfigError("grid_size must be positive");
    check_query(family, v);
    const std::size_t blocks = family.block_count();
    const double delta = 2.0 / std::sqrt(static_cast<double>(blocks)) / grid_size;

    SampleTree tree;
    tree.grid_size_ = grid_size;
    tree.alpha_ = alpha;
    tree.epsilon_ = static_cast<double>(blocks) * delta;
    tree.threshold_ = static_cast<long>(std::ceil(alpha / delta)) - static_cast<long>(blocks);
    tree.radix_ = family.block_size();

    const auto scores = block_scores(family, v);
    tree.choices_.resize(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        for (std::size_t j = 0; j < scores[b].size(); ++j)
            tree.choices_[b].push_back({static_cast<long>(std::floor(scores[b][j] / delta)), static_cast<std::uint32_t>(j)});
        std::stable_sort(tree.choices_[b].begin(), tree.choices_[b].end(),
                         [](const auto& x, const auto& y) { return x.level > y.level; });
    }

    // exact[s - lo] = number of leaves of blocks b..B-1 whose levels sum to s.
    tree.tail_lo_.assign(blocks + 1, 0);
    tree.tails_.assign(blocks + 1, {});
    tree.tails_[blocks] = {1};
    std::vector<std::uint64_t> exact{1};
    long lo = 0;
    for (std::size_t b = blocks; b-- > 0;) {
        const long qmax = tree.choices_[b].front().level;
        const long qmin = tree.choices_[b].back().level;
        std::vector<std::uint64_t> next(exact.size() + static_cast<std::size_t>(qmax - qmin), 0);
        for (const auto& c : tree.choices_[b]) {
            const auto shift = static_cast<std::size_t>(c.level - qmin);
            for (std::size_t s = 0; s < exact.size(); ++s) next[s + shift] += exact[s];
        }
        exact = std::move(next);
        lo += qmin;
        std::vector<std::uint64_t> tail(exact.size());
        std::uint64_t acc = 0;
        for (std::size_t s = exact.size(); s-- > 0;) tail[s] = acc += exact[s];
        tree.tail_lo_[b] = lo;
        tree.tails_[b] = std::move(tail);
    }

    tree.root_count_ = tree.tail(0, tree.threshold_);
    if (tree.root_count_ > 0) {
        tree.coin_bits_ = static_cast<int>(std::bit_width(tree.root_count_ - 1)) + 4;
        if (tree.coin_bits_ > 64) throw SizeError("sample tree needs more than 64 coins");
    }
    return tree;
}

std::uint64_t SampleTree::tail(std::size_t b, long r) const noexcept {
    const auto& t = tails_[b];
    const long lo = tail_lo_[b];
    if (r <= lo) return t.front();
    const auto off = static_cast<std::size_t>(r - lo);
    return off < t.size() ? t[off] : 0;
}

std::uint64_t SampleTree::unrank(std::uint64_t rank) const {
    long need = threshold_;
    std::uint64_t index = 0;
    for (std::size_t b = 0; b < choices_.size(); ++b) {
        bool chosen = false;
        for (const auto& c : choices_[b]) {
            const std::uint64_t below = tail(b + 1, need - c.level);
            if (rank < below) {
                index = index * radix_ + c.digit;
                need -= c.level;
                chosen = true;
                break;
            }
            rank -= below;
        }
        if (!chosen) throw EmptySetError("sample tree rank out of range");
    }
    return index;
}

std::uint64_t SampleTree::sample(std::uint64_t coins) const {
    if (root_count_ == 0) throw EmptySetError("no pseudo-close filter to sample");
    if (coin_bits_ < 64 && (coins >> coin_bits_) != 0) throw DomainError("coin string longer than coin_bits()");
    const auto rank = static_cast<std::uint64_t>((static_cast<uint128>(coins) * root_count_) >> coin_bits_);
    return unrank(rank);
}

std::uint64_t SampleTree::sample(Rng& rng) const {
    if (root_count_ == 0) throw EmptySetError("no pseudo-close filter to sample");
    const std::uint64_t coins = coin_bits_ == 64 ? rng() : rng() >> (64 - coin_bits_);
    return sample(coins);
}

std::uint64_t sample_alpha_close(const SampleTree& tree, std::uint64_t coins) { return tree.sample(coins); }

}  // namespace sievelab
