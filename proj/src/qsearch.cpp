#include "sievelab/qsearch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_set>

#include "sievelab/errors.hpp"
#include "sievelab/parallel.hpp"

namespace sievelab {

namespace {

constexpr double kBbhtGrowth = 6.0 / 5.0;
constexpr double kBbhtCapFactor = 9.0;
constexpr double kBlockCapFactor = 3.0;
constexpr double kMinFindBudgetFactor = 22.5;
constexpr int kBoostRuns = 3;

std::uint64_t ceil_sqrt_multiple(double factor, std::size_t S) {
    return static_cast<std::uint64_t>(std::ceil(factor * std::sqrt(static_cast<double>(S)) - 1e-12));
}

}  // namespace

BlockSearchState::BlockSearchState(std::vector<char> marked) : marked_(std::move(marked)) {
    if (marked_.empty()) throw DomainError("search block must be nonempty");
    const double a = 1.0 / std::sqrt(static_cast<double>(marked_.size()));
    amplitudes_.assign(marked_.size(), {a, 0.0});
    marked_count_ = static_cast<std::size_t>(std::count_if(marked_.begin(), marked_.end(), [](char c) { return c != 0; }));
}

void BlockSearchState::iterate() {
    ++iterations_;
    // With nothing marked the uniform state is a fixed point of the iteration.
    if (marked_count_ == 0) return;
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if (marked_[i]) amplitudes_[i] = -amplitudes_[i];
        sum += amplitudes_[i];
    }
    const std::complex<double> twice_mean = 2.0 * sum / static_cast<double>(amplitudes_.size());
    for (auto& a : amplitudes_) a = twice_mean - a;
}

void BlockSearchState::iterate(std::uint64_t rounds) {
    for (std::uint64_t r = 0; r < rounds; ++r) iterate();
}

double BlockSearchState::marked_mass() const noexcept {
    double mass = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if (marked_[i]) mass += std::norm(amplitudes_[i]);
    }
    return mass;
}

double BlockSearchState::norm() const noexcept {
    double total = 0.0;
    for (const auto& a : amplitudes_) total += std::norm(a);
    return std::sqrt(total);
}

std::size_t BlockSearchState::measure(Rng& rng) const {
    const double r = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        acc += std::norm(amplitudes_[i]);
        if (r < acc) return i;
    }
    return amplitudes_.size() - 1;
}

std::uint64_t qaa_iterations(double theta) {
    if (!(theta > 0.0 && theta <= std::numbers::pi / 2)) throw DomainError("qaa_iterations: theta must lie in (0, pi/2]");
    const double n = std::floor(std::numbers::pi / (4.0 * theta) - 0.5);
    return n > 0.0 ? static_cast<std::uint64_t>(n) : 0;
}

QaaResult qaa_run(std::size_t S, std::span<const std::uint64_t> marked, std::uint64_t N) {
    if (S == 0) throw DomainError("qaa_run: S must be positive");
    std::vector<char> mask(S, 0);
    for (std::uint64_t i : marked) {
        if (i >= S) throw DomainError("qaa_run: marked index outside [0, S)");
        mask[i] = 1;
    }
    BlockSearchState state(std::move(mask));
    state.iterate(N);
    const double mass = state.marked_mass();
    return {mass, std::move(state)};
}

std::uint64_t bbht_default_cap(std::size_t S) { return ceil_sqrt_multiple(kBbhtCapFactor, S); }

BbhtResult bbht_search(std::span<const char> marked, Rng& rng, std::uint64_t cap) {
    BbhtResult out;
    if (marked.empty()) return out;
    const std::vector<char> mask(marked.begin(), marked.end());
    const double m_max = std::sqrt(static_cast<double>(mask.size()));
    double m = 1.0;
    while (out.oracle_evals < cap) {
        // j is uniform over the integers 0 <= j < m.
        std::uint64_t j = rng.below(static_cast<std::uint64_t>(std::ceil(m)));
        if (out.oracle_evals + j + 1 > cap) j = cap - out.oracle_evals - 1;
        BlockSearchState state(mask);
        state.iterate(j);
        const std::size_t idx = state.measure(rng);
        out.oracle_evals += j + 1;  // j coherent calls plus the classical check
        if (mask[idx]) {
            out.found = idx;
            return out;
        }
        m = std::min(m * kBbhtGrowth, m_max);
    }
    return out;
}

BbhtResult bbht_search(std::size_t S, const std::function<bool(std::size_t)>& is_marked, Rng& rng) {
    if (S == 0) throw DomainError("bbht_search: S must be positive");
    std::vector<char> mask(S);
    for (std::size_t i = 0; i < S; ++i) mask[i] = is_marked(i) ? 1 : 0;
    return bbht_search(mask, rng, bbht_default_cap(S));
}

std::uint64_t block_cap(std::size_t S) { return ceil_sqrt_multiple(kBlockCapFactor, S); }

SearchReport blocked_search(std::uint64_t M, const std::function<bool(std::uint64_t)>& f, std::size_t S,
                            std::uint64_t seed) {
    if (M == 0 || S == 0) throw DomainError("blocked_search: M and S must be positive");
    Rng rng(seed);
    SearchReport report;
    const std::uint64_t blocks = (M + S - 1) / S;
    const std::uint64_t cap = block_cap(S);
    std::vector<char> mask(S);
    for (std::uint64_t b = 0; b < blocks && !report.success; ++b) {
        ++report.qram_reloads;
        ++report.blocks_visited;
        const std::uint64_t base = b * S;
        const std::uint64_t real = std::min<std::uint64_t>(S, M - base);
        for (std::size_t i = 0; i < S; ++i) mask[i] = i < real && f(base + i) ? 1 : 0;
        if (cap >= S) {
            for (std::size_t i = 0; i < real; ++i) {
                ++report.oracle_evals;
                if (mask[i]) {
                    report.found = base + i;
                    report.success = true;
                    break;
                }
            }
        } else {
            const BbhtResult r = bbht_search(mask, rng, cap);
            report.oracle_evals += r.oracle_evals;
            if (r.found) {
                report.found = base + *r.found;
                report.success = true;
            }
        }
    }
    return report;
}

std::vector<char> planted_marks(std::uint64_t M, double p, Rng& rng) {
    if (M == 0 || !(p > 0.0 && p <= 1.0)) throw DomainError("planted_marks: need M >= 1 and p in (0, 1]");
    std::vector<char> marks(M);
    for (;;) {
        bool any = false;
        for (auto& c : marks) {
            c = rng.bernoulli(p) ? 1 : 0;
            any = any || c;
        }
        if (any) return marks;
    }
}

PairSearchReport blocked_pair_search(std::uint64_t M1, std::uint64_t M2, std::uint64_t K, std::size_t S,
                                     std::uint64_t seed) {
    if (M1 == 0 || M2 == 0 || S == 0) throw DomainError("blocked_pair_search: sizes must be positive");
    const std::uint64_t total = M1 * M2;
    if (K == 0 || K > total) throw DomainError("blocked_pair_search: need 1 <= K <= M1 M2");
    if (S > std::max(M1, M2)) throw DomainError("blocked_pair_search: S exceeds max(M1, M2)");
    Rng rng(seed);

    // Plant K distinct solutions uniformly.
    std::unordered_set<std::uint64_t> planted;
    if (2 * K > total) {
        std::vector<std::uint64_t> all(total);
        std::iota(all.begin(), all.end(), 0);
        for (std::uint64_t i = 0; i < K; ++i) std::swap(all[i], all[i + rng.below(total - i)]);
        planted.insert(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(K));
    } else {
        while (planted.size() < K) planted.insert(rng.below(total));
    }

    PairSearchReport report;
    const double s2 = static_cast<double>(S) * static_cast<double>(S);
    report.dense = s2 * static_cast<double>(K) >= static_cast<double>(total);
    const double expected = static_cast<double>(K) * s2 / static_cast<double>(total);
    const auto budget = static_cast<std::uint64_t>(std::ceil(static_cast<double>(S) * std::sqrt(expected) - 1e-9));
    const std::uint64_t probe_iterations = qaa_iterations(std::asin(1.0 / static_cast<double>(S)));

    const std::uint64_t bx_count = (M1 + S - 1) / S;
    const std::uint64_t by_count = (M2 + S - 1) / S;
    for (std::uint64_t bx = 0; bx < bx_count; ++bx) {
        for (std::uint64_t by = 0; by < by_count; ++by) {
            ++report.qram_reloads;
            ++report.blocks_visited;
            // Cells of the block pair; cells past the end of X or Y are unmarked padding.
            std::vector<std::uint64_t> cells;
            std::vector<char> mask;
            cells.reserve(S * S);
            for (std::size_t i = 0; i < S; ++i) {
                for (std::size_t j = 0; j < S; ++j) {
                    const std::uint64_t x = bx * S + i;
                    const std::uint64_t y = by * S + j;
                    const bool real = x < M1 && y < M2;
                    cells.push_back(real ? x * M2 + y : total);
                    mask.push_back(real && planted.count(x * M2 + y) ? 1 : 0);
                }
            }
            if (report.dense) {
                std::uint64_t spent = 0;
                while (spent < budget && !cells.empty()) {
                    const std::uint64_t cap = std::min(budget - spent, bbht_default_cap(cells.size()));
                    const BbhtResult r = bbht_search(mask, rng, cap);
                    spent += r.oracle_evals;
                    if (!r.found) continue;
                    const std::uint64_t cell = cells[*r.found];
                    report.solutions.emplace_back(cell / M2, cell % M2);
                    cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(*r.found));
                    mask.erase(mask.begin() + static_cast<std::ptrdiff_t>(*r.found));
                }
                report.oracle_evals += spent;
            } else {
                BlockSearchState state(mask);
                state.iterate(probe_iterations);
                const std::size_t idx = state.measure(rng);
                report.oracle_evals += probe_iterations + 1;
                if (mask[idx]) report.solutions.emplace_back(cells[idx] / M2, cells[idx] % M2);
            }
        }
    }
    std::sort(report.solutions.begin(), report.solutions.end());
    return report;
}

MinFindResult min_find(std::span<const double> values, std::uint64_t seed) {
    if (values.empty()) throw EmptySetError("min_find: empty list");
    Rng rng(seed);
    const std::uint64_t budget = ceil_sqrt_multiple(kMinFindBudgetFactor, values.size());
    MinFindResult out;
    std::vector<char> mask(values.size());
    while (out.oracle_evals < budget) {
        const double threshold = values[out.index];
        for (std::size_t i = 0; i < values.size(); ++i) mask[i] = values[i] < threshold ? 1 : 0;
        const BbhtResult r = bbht_search(mask, rng, budget - out.oracle_evals);
        out.oracle_evals += r.oracle_evals;
        if (!r.found) break;
        out.index = *r.found;
    }
    return out;
}

MinFindResult min_find_boosted(std::span<const double> values, std::uint64_t seed) {
    MinFindResult best;
    std::uint64_t evals = 0;
    for (int run = 0; run < kBoostRuns; ++run) {
        const MinFindResult r = min_find(values, derive_seed(seed, static_cast<std::uint64_t>(run)));
        evals += r.oracle_evals;
        if (run == 0 || values[r.index] < values[best.index]) best = r;
    }
    best.oracle_evals = evals;
    return best;
}

SearchExperimentRow blocked_search_experiment(std::uint64_t M, std::size_t S, double p, std::uint64_t trials,
                                              std::uint64_t seed) {
    if (trials == 0) throw DomainError("blocked_search_experiment: need at least one trial");
    std::vector<SearchReport> reports(trials);
    parallel_for(trials, [&](std::size_t k) {
        Rng rng(derive_seed(seed, k));
        const std::vector<char> marks = planted_marks(M, p, rng);
        reports[k] = blocked_search(M, [&](std::uint64_t i) { return marks[i] != 0; }, S, rng());
    });
    SearchExperimentRow row{M, S, p, trials, 0.0, 0.0, 0.0};
    for (const auto& r : reports) {
        row.mean_evals += static_cast<double>(r.oracle_evals);
        row.success_rate += r.success ? 1.0 : 0.0;
        row.mean_reloads += static_cast<double>(r.qram_reloads);
    }
    const auto n = static_cast<double>(trials);
    row.mean_evals /= n;
    row.success_rate /= n;
    row.mean_reloads /= n;
    return row;
}

PairExperimentRow blocked_pair_experiment(std::uint64_t M1, std::uint64_t M2, std::uint64_t K, std::size_t S,
                                          std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0) throw DomainError("blocked_pair_experiment: need at least one trial");
    std::vector<PairSearchReport> reports(trials);
    parallel_for(trials, [&](std::size_t k) { reports[k] = blocked_pair_search(M1, M2, K, S, derive_seed(seed, k)); });
    PairExperimentRow row{M1, M2, K, S, trials, 0.0, 0.0, reports.front().solutions.size(), 0.0, reports.front().dense};
    for (const auto& r : reports) {
        row.mean_evals += static_cast<double>(r.oracle_evals);
        row.mean_solutions += static_cast<double>(r.solutions.size());
        row.min_solutions = std::min<std::uint64_t>(row.min_solutions, r.solutions.size());
        row.mean_reloads += static_cast<double>(r.qram_reloads);
    }
    const auto n = static_cast<double>(trials);
    row.mean_evals /= n;
    row.mean_solutions /= n;
    row.mean_reloads /= n;
    return row;
}

}  // namespace sievelab
