#include "sievelab/noqram_circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sievelab/errors.hpp"
#include "sievelab/parallel.hpp"
#include "sievelab/qsearch.hpp"

namespace sievelab {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        acc += diff * diff;
    }
    return acc;
}

std::optional<std::size_t> select(const ComparatorCircuit& circuit, std::size_t i, std::span<const double> w,
                                  bool skip_equal) {
    if (i >= circuit.mux_arity()) throw std::out_of_range("circuit_select: filter index out of range");
    if (w.size() != circuit.dim()) throw DomainError("circuit_select: query dimension mismatch");
    const VectorList& chain = circuit.chain(i);
    std::optional<std::size_t> best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const double dist = squared_distance(chain[k], w);
        if (skip_equal && dist == 0.0) continue;
        if (!best || dist < best_dist) {
            best = k;
            best_dist = dist;
        }
    }
    return best;
}

}  // namespace

std::size_t ComparatorCircuit::comparator_count() const noexcept {
    std::size_t n = 0;
    for (const auto& c : chains_) n += c.size() > 0 ? c.size() - 1 : 0;
    return n;
}

ComparatorCircuit build_circuit(std::size_t d, std::span<const VectorList> buckets) {
    if (buckets.empty()) throw DomainError("build_circuit: need at least one bucket");
    ComparatorCircuit c;
    c.dim_ = d;
    for (const auto& b : buckets) {
        if (!b.empty() && b.dim() != d) throw DomainError("build_circuit: bucket dimension mismatch");
        c.chains_.push_back(b.empty() ? VectorList(d) : b);
        std::vector<std::uint32_t> ids(b.size());
        for (std::size_t k = 0; k < ids.size(); ++k) ids[k] = static_cast<std::uint32_t>(k);
        c.ids_.push_back(std::move(ids));
    }
    return c;
}

ComparatorCircuit build_circuit(const VectorList& list, const std::vector<std::vector<std::uint32_t>>& buckets) {
    if (buckets.empty()) throw DomainError("build_circuit: need at least one bucket");
    ComparatorCircuit c;
    c.dim_ = list.dim();
    for (const auto& b : buckets) {
        VectorList chain(list.dim());
        for (std::uint32_t j : b) chain.push_back(list[j]);
        c.chains_.push_back(std::move(chain));
        c.ids_.push_back(b);
    }
    return c;
}

CircuitCost circuit_cost(const ComparatorCircuit& circuit) {
    CircuitCost cost;
    const std::uint64_t t = circuit.mux_arity();
    std::uint64_t longest = 0;
    for (std::size_t i = 0; i < t; ++i) {
        const std::uint64_t n = circuit.chain(i).size();
        longest = std::max<std::uint64_t>(longest, n > 0 ? n - 1 : 0);
    }
    const auto mux_depth = static_cast<std::uint64_t>(std::bit_width(t - 1));  // ceil(log2 t), 0 for t = 1
    cost.depth = longest + mux_depth;
    cost.size = circuit.comparator_count() + (t - 1);
    cost.width = t;
    return cost;
}

std::optional<std::size_t> circuit_select(const ComparatorCircuit& circuit, std::size_t i, std::span<const double> w) {
    return select(circuit, i, w, false);
}

std::optional<std::size_t> circuit_select_other(const ComparatorCircuit& circuit, std::size_t i,
                                                std::span<const double> w) {
    return select(circuit, i, w, true);
}

std::vector<double> circuit_eval(const ComparatorCircuit& circuit, std::size_t i, std::span<const double> w) {
    const auto pos = circuit_select(circuit, i, w);
    if (!pos) return std::vector<double>(circuit.dim(), 0.0);
    const auto v = circuit.chain(i)[*pos];
    return {v.begin(), v.end()};
}

OracleOutput oracle_prime(const ComparatorCircuit& circuit, const SampleTree& tree, std::span<const double> w,
                          std::uint64_t coins) {
    OracleOutput out;
    out.filter = tree.sample(coins);
    out.position = circuit_select(circuit, out.filter, w);
    if (out.position) {
        const auto v = circuit.chain(out.filter)[*out.position];
        out.u.assign(v.begin(), v.end());
    } else {
        out.u.assign(circuit.dim(), 0.0);
    }
    return out;
}

PipelineReport pipeline_step(const SieveInstance& instance, const FilterFamily& family, double alpha, double beta,
                             PipelineMode mode, std::uint64_t seed, int grid_size) {
    if (family.kind() != FilterKind::rpc) throw ConfigError("pipeline_step needs a random product code");
    QueryLedger prep;
    const Buckets buckets = preprocess(instance, family, beta, prep);
    const ComparatorCircuit circuit = build_circuit(instance.vectors, buckets.insert_side);
    const double limit = instance.shrink_factor * instance.radius;
    const std::size_t n = instance.size();

    struct PerVector {
        std::optional<std::uint32_t> partner;
        std::uint64_t calls = 0;
        bool no_filter = false;
        bool fallback = false;
        int coin_bits = 0;
    };
    std::vector<PerVector> results(n);
    parallel_for(n, [&](std::size_t wi) {
        PerVector& r = results[wi];
        const auto w = instance.vectors[wi];
        const double len = norm(w);
        std::vector<double> direction(w.begin(), w.end());
        if (len > 0.0) {
            for (double& x : direction) x /= len;
        }
        const SampleTree tree = build_sample_tree(family, direction, alpha, grid_size);
        if (tree.root_count() == 0) {
            r.no_filter = true;
            return;
        }
        r.coin_bits = tree.coin_bits();
        const std::uint64_t coins = std::uint64_t{1} << tree.coin_bits();

        // Distance of the candidate each coin string leads to; +inf when the chain has no other vector.
        std::vector<double> dist(coins, std::numeric_limits<double>::infinity());
        std::vector<std::uint32_t> partner(coins, 0);
        for (std::uint64_t c = 0; c < coins; ++c) {
            const std::uint64_t filter = tree.sample(c);
            const auto pos = circuit_select_other(circuit, filter, w);
            if (!pos) continue;
            partner[c] = circuit.chain_ids(filter)[*pos];
            dist[c] = std::sqrt(squared_distance(circuit.chain(filter)[*pos], w));
        }

        std::size_t chosen = 0;
        const bool use_minfind = mode != PipelineMode::exhaustive && coins <= kMaxMinFindCoins;
        if (use_minfind) {
            const std::uint64_t s = derive_seed(seed, wi);
            const MinFindResult m = mode == PipelineMode::minfind ? min_find(dist, s) : min_find_boosted(dist, s);
            chosen = m.index;
            r.calls = m.oracle_evals;
        } else {
            chosen = static_cast<std::size_t>(std::min_element(dist.begin(), dist.end()) - dist.begin());
            r.calls = coins;
            r.fallback = mode != PipelineMode::exhaustive;
        }
        if (dist[chosen] > 0.0 && dist[chosen] <= limit) r.partner = partner[chosen];
    });

    PipelineReport report;
    report.mode = mode;
    for (std::size_t wi = 0; wi < n; ++wi) {
        const PerVector& r = results[wi];
        if (r.partner) report.pairs.push_back({static_cast<std::uint32_t>(wi), *r.partner});
        report.oracle_calls += r.calls;
        report.max_oracle_calls_per_vector = std::max(report.max_oracle_calls_per_vector, r.calls);
        report.vectors_without_close_filter += r.no_filter ? 1 : 0;
        report.exhaustive_fallbacks += r.fallback ? 1 : 0;
        report.max_coin_bits = std::max(report.max_coin_bits, r.coin_bits);
    }
    return report;
}

}  // namespace sievelab
