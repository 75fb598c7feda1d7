#include "sievelab/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "sievelab/binary_io.hpp"
#include "sievelab/errors.hpp"
#include "sievelab/geometry.hpp"
#include "sievelab/parallel.hpp"

namespace sievelab {

namespace {

constexpr std::string_view kInstanceMagic = "SLINSTNC";
constexpr std::uint64_t kInstanceVersion = 1;
constexpr std::size_t kBruteForceLimit = 100000;
constexpr std::size_t kChunk = 64;

VectorList normalized(const VectorList& list) {
    VectorList out(list.dim());
    std::vector<double> buf(list.dim());
    for (std::size_t i = 0; i < list.size(); ++i) {
        const auto v = list[i];
        const double len = norm(v);
        for (std::size_t k = 0; k < v.size(); ++k) buf[k] = len > 0.0 ? v[k] / len : 0.0;
        out.push_back(buf);
    }
    return out;
}

void check_match(const SieveInstance& instance, const FilterFamily& family) {
    if (instance.dim() != family.dim()) throw ConfigError("filter family dimension does not match the instance");
    if (instance.size() > std::numeric_limits<std::uint32_t>::max()) throw SizeError("instance too large");
}

// Runs body(i, ledger, out) for every vector in fixed chunks and concatenates
// the per-chunk outputs in index order.
template <typename T, typename Body>
std::vector<T> chunked(std::size_t n, QueryLedger& ledger, Body body) {
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<QueryLedger> ledgers(chunks);
    std::vector<std::vector<T>> outs(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        const std::size_t end = std::min(n, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) body(i, ledgers[c], outs[c]);
    });
    std::vector<T> all;
    for (std::size_t c = 0; c < chunks; ++c) {
        ledger += ledgers[c];
        all.insert(all.end(), outs[c].begin(), outs[c].end());
    }
    return all;
}

// Relevant filters of every vector, with 1 + |Z| charged per enumeration.
std::vector<std::vector<std::uint64_t>> enumerate_all(const VectorList& unit, const FilterFamily& family, double level,
                                                      QueryLedger& ledger) {
    std::vector<std::vector<std::uint64_t>> out(unit.size());
    chunked<char>(unit.size(), ledger, [&](std::size_t i, QueryLedger& l, std::vector<char>&) {
        out[i] = relevant_filters(family, unit[i], level).indices;
        l.filter_queries += 1 + out[i].size();
    });
    return out;
}

std::vector<std::vector<std::uint32_t>> fill_buckets(const std::vector<std::vector<std::uint64_t>>& relevant,
                                                     std::uint64_t t, QueryLedger& ledger) {
    std::vector<std::vector<std::uint32_t>> buckets(t);
    for (std::size_t i = 0; i < relevant.size(); ++i) {
        for (std::uint64_t f : relevant[i]) buckets[f].push_back(static_cast<std::uint32_t>(i));
        ledger.insertions += relevant[i].size();
    }
    return buckets;
}

void sort_unique(PairSet& pairs) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

}  // namespace

QueryLedger& QueryLedger::operator+=(const QueryLedger& o) noexcept {
    filter_queries += o.filter_queries;
    inner_product_queries += o.inner_product_queries;
    insertions += o.insertions;
    oracle_evals += o.oracle_evals;
    qram_reloads += o.qram_reloads;
    return *this;
}

SieveInstance SieveInstance::random_unit(std::size_t n, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    SieveInstance inst;
    inst.vectors = random_unit_list(n, d, rng);
    return inst;
}

SieveInstance SieveInstance::random_sphere(std::size_t n, std::size_t d, double radius, std::uint64_t seed) {
    if (!(radius > 0.0)) throw DomainError("radius must be positive");
    SieveInstance inst = random_unit(n, d, seed);
    inst.mode = InstanceMode::norm;
    inst.radius = radius;
    for (std::size_t i = 0; i < n; ++i) {
        for (double& x : inst.vectors.row(i)) x *= radius;
    }
    return inst;
}

void SieveInstance::validate() const {
    if (!(theta > 0.0 && theta <= std::numbers::pi)) throw DomainError("theta must lie in (0, pi]");
    if (!(shrink_factor > 0.0 && shrink_factor <= 1.0)) throw DomainError("shrink_factor must lie in (0, 1]");
    for (std::size_t i = 0; i < size(); ++i) {
        const double len = norm(vectors[i]);
        if (mode == InstanceMode::unit && std::fabs(len - 1.0) > 1e-9)
            throw DomainError("unit-mode instance has a vector of norm " + std::to_string(len));
        if (mode == InstanceMode::norm && len > radius * (1.0 + 1e-12))
            throw DomainError("norm-mode instance has a vector longer than R");
    }
}

void SieveInstance::save(std::ostream& out) const {
    binary::write_magic(out, kInstanceMagic, kInstanceVersion);
    binary::write_u64(out, dim());
    binary::write_u64(out, size());
    binary::write_u64(out, static_cast<std::uint64_t>(mode));
    binary::write_f64(out, radius);
    binary::write_f64(out, theta);
    binary::write_f64(out, shrink_factor);
    binary::write_f64s(out, vectors.data());
    if (!out) throw ConfigError("failed to write instance");
}

SieveInstance SieveInstance::load(std::istream& in) {
    binary::expect_magic(in, kInstanceMagic, kInstanceVersion);
    SieveInstance inst;
    const std::uint64_t d = binary::read_u64(in);
    const std::uint64_t n = binary::read_u64(in);
    const std::uint64_t mode = binary::read_u64(in);
    if (mode > 1 || d == 0 || n > (std::uint64_t{1} << 32)) throw ConfigError("instance: inconsistent header");
    inst.mode = static_cast<InstanceMode>(mode);
    inst.radius = binary::read_f64(in);
    inst.theta = binary::read_f64(in);
    inst.shrink_factor = binary::read_f64(in);
    std::vector<double> data(d * n);
    for (double& x : data) x = binary::read_f64(in);
    inst.vectors = VectorList(d, std::move(data));
    return inst;
}

Buckets preprocess(const SieveInstance& instance, const FilterFamily& family, double beta, QueryLedger& ledger) {
    check_match(instance, family);
    const VectorList unit = normalized(instance.vectors);
    Buckets b;
    b.insert_side = fill_buckets(enumerate_all(unit, family, beta, ledger), family.size(), ledger);
    return b;
}

PairSet query_method(const SieveInstance& instance, const FilterFamily& family, double alpha, const Buckets& buckets,
                     QueryLedger& ledger) {
    check_match(instance, family);
    if (buckets.insert_side.size() != family.size()) throw ConfigError("buckets were built with a different family");
    const VectorList unit = normalized(instance.vectors);
    const double threshold = std::cos(instance.theta);
    PairSet pairs = chunked<IndexPair>(unit.size(), ledger, [&](std::size_t x, QueryLedger& l, PairSet& out) {
        const auto filters = relevant_filters(family, unit[x], alpha).indices;
        l.filter_queries += 1 + filters.size();
        const std::size_t first = out.size();
        for (std::uint64_t f : filters) {
            for (std::uint32_t y : buckets.insert_side[f]) {
                ++l.inner_product_queries;
                if (y != x && dot(unit[x], unit[y]) >= threshold) out.push_back({static_cast<std::uint32_t>(x), y});
            }
        }
        std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
        out.erase(std::unique(out.begin() + static_cast<std::ptrdiff_t>(first), out.end()), out.end());
    });
    return pairs;
}

PairSet fas_method(const SieveInstance& instance, const FilterFamily& family, double alpha, double beta,
                   QueryLedger& ledger) {
    check_match(instance, family);
    const VectorList unit = normalized(instance.vectors);
    const double threshold = std::cos(instance.theta);
    Buckets b;
    b.insert_side = fill_buckets(enumerate_all(unit, family, beta, ledger), family.size(), ledger);
    b.query_side = fill_buckets(enumerate_all(unit, family, alpha, ledger), family.size(), ledger);

    const std::uint64_t t = family.size();
    const std::size_t chunks = (t + kChunk - 1) / kChunk;
    std::vector<QueryLedger> ledgers(chunks);
    std::vector<PairSet> outs(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        const std::uint64_t end = std::min<std::uint64_t>(t, (c + 1) * kChunk);
        for (std::uint64_t i = c * kChunk; i < end; ++i) {
            for (std::uint32_t x : b.query_side[i]) {
                for (std::uint32_t y : b.insert_side[i]) {
                    ++ledgers[c].inner_product_queries;
                    if (x != y && dot(unit[x], unit[y]) >= threshold) outs[c].push_back({x, y});
                }
            }
        }
    });
    PairSet pairs;
    for (std::size_t c = 0; c < chunks; ++c) {
        ledger += ledgers[c];
        pairs.insert(pairs.end(), outs[c].begin(), outs[c].end());
    }
    sort_unique(pairs);
    return pairs;
}

VectorList sieve_step(const SieveInstance& instance, const FilterFamily& family, double alpha, double beta,
                      double shrink_factor, QueryLedger& ledger) {
    if (!(shrink_factor > 0.0 && shrink_factor <= 1.0)) throw DomainError("shrink_factor must lie in (0, 1]");
    const Buckets buckets = preprocess(instance, family, beta, ledger);
    const PairSet pairs = query_method(instance, family, alpha, buckets, ledger);
    const double limit = shrink_factor * instance.radius;
    const std::size_t d = instance.dim();
    VectorList out(d);
    std::vector<double> diff(d);
    std::size_t k = 0;
    for (std::size_t x = 0; x < instance.size(); ++x) {
        while (k < pairs.size() && pairs[k].query < x) ++k;
        for (; k < pairs.size() && pairs[k].query == x; ++k) {
            const auto v = instance.vectors[x];
            const auto w = instance.vectors[pairs[k].insert];
            for (std::size_t j = 0; j < d; ++j) diff[j] = v[j] - w[j];
            const double len = norm(diff);
            if (len > 0.0 && len <= limit) {
                out.push_back(diff);
                break;
            }
        }
    }
    return out;
}

PairSet brute_force_pairs(const SieveInstance& instance, double theta) {
    const std::size_t n = instance.size();
    if (n > kBruteForceLimit) throw SizeError("brute_force_pairs is limited to n <= 1e5");
    const VectorList unit = normalized(instance.vectors);
    const double threshold = std::cos(theta);
    QueryLedger unused;
    return chunked<IndexPair>(n, unused, [&](std::size_t x, QueryLedger&, PairSet& out) {
        for (std::size_t y = 0; y < n; ++y) {
            if (y != x && dot(unit[x], unit[y]) >= threshold)
                out.push_back({static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)});
        }
    });
}

std::size_t vectors_with_partner(const PairSet& pairs) {
    std::size_t count = 0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (k == 0 || pairs[k].query != pairs[k - 1].query) ++count;
    }
    return count;
}

ExpectedLedger expected_ledger(std::size_t n, std::uint64_t t, double alpha, double beta, std::size_t d) {
    const double ca = cap_volume_exact(d, alpha);
    const double cb = cap_volume_exact(d, beta);
    const double nn = static_cast<double>(n);
    const double tt = static_cast<double>(t);
    return {nn * tt * cb, nn * tt * ca, nn * nn * tt * ca * cb, 2.0 * nn};
}

}  // namespace sievelab
