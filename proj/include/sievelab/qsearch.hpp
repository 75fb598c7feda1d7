#pragma once

// State-vector simulation of amplitude amplification over one QRAM block:
// fixed-count QAA, BBHT search for an unknown number of solutions, blocked
// search and blocked pair search with a QRAM of S entries, and threshold-
// descent minimum finding. Oracle evaluations and QRAM reloads are counted.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sievelab/rng.hpp"

namespace sievelab {

/// Amplitudes over the indices of one block, starting uniform.
class BlockSearchState {
public:
    /// Uniform superposition over `marked.size()` indices; marked[i] != 0 flags a solution.
    explicit BlockSearchState(std::vector<char> marked);

    /// One Grover iteration: phase-flip the marked indices, then reflect about the uniform state.
    void iterate();
    void iterate(std::uint64_t rounds);

    [[nodiscard]] std::size_t size() const noexcept { return amplitudes_.size(); }
    [[nodiscard]] std::uint64_t iterations_done() const noexcept { return iterations_; }
    [[nodiscard]] std::span<const std::complex<double>> amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] std::size_t marked_count() const noexcept { return marked_count_; }
    [[nodiscard]] double marked_mass() const noexcept;
    [[nodiscard]] double norm() const noexcept;
    /// Samples an index with probability |amplitude|^2.
    [[nodiscard]] std::size_t measure(Rng& rng) const;

private:
    std::vector<std::complex<double>> amplitudes_;
    std::vector<char> marked_;
    std::size_t marked_count_ = 0;
    std::uint64_t iterations_ = 0;
};

/// floor(pi/(4 theta) - 1/2), clamped at 0. Throws DomainError unless 0 < theta <= pi/2.
[[nodiscard]] std::uint64_t qaa_iterations(double theta);

struct QaaResult {
    double marked_mass = 0.0;
    BlockSearchState state;
};

/// N Grover iterations from the uniform state over [0, S) with the given marked indices.
[[nodiscard]] QaaResult qaa_run(std::size_t S, std::span<const std::uint64_t> marked, std::uint64_t N);

struct BbhtResult {
    std::optional<std::size_t> found;
    std::uint64_t oracle_evals = 0;
};

/// Default BBHT evaluation cap ceil(9 sqrt(S)).
[[nodiscard]] std::uint64_t bbht_default_cap(std::size_t S);

/// BBHT search over a marked mask. Attempt k runs j ~ U[0, ceil(m)) iterations
/// and measures, costing j + 1 evaluations; m starts at 1 and grows by 6/5 per
/// failure up to sqrt(S). Stops at `cap` evaluations (the last attempt is shortened).
[[nodiscard]] BbhtResult bbht_search(std::span<const char> marked, Rng& rng, std::uint64_t cap);
/// Same with the marked set given by a predicate over [0, S) and the default cap.
[[nodiscard]] BbhtResult bbht_search(std::size_t S, const std::function<bool(std::size_t)>& is_marked, Rng& rng);

struct SearchReport {
    std::optional<std::uint64_t> found;
    std::uint64_t oracle_evals = 0;
    std::uint64_t qram_reloads = 0;
    std::uint64_t blocks_visited = 0;
    bool success = false;
};

/// Per-block evaluation cap ceil(3 sqrt(S)) used by blocked_search.
[[nodiscard]] std::uint64_t block_cap(std::size_t S);

/// Loads blocks of S consecutive items into QRAM (the last block is padded
/// with unmarked dummies) and searches each in turn, halting at the first
/// verified solution. A block whose cap is at least S is scanned classically;
/// otherwise BBHT runs with cap block_cap(S).
[[nodiscard]] SearchReport blocked_search(std::uint64_t M, const std::function<bool(std::uint64_t)>& f,
                                          std::size_t S, std::uint64_t seed);

/// Marks each of M items independently with probability p, redrawing until at least one is marked.
[[nodiscard]] std::vector<char> planted_marks(std::uint64_t M, double p, Rng& rng);

struct PairSearchReport {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> solutions;  // sorted, distinct
    std::uint64_t oracle_evals = 0;
    std::uint64_t qram_reloads = 0;
    std::uint64_t blocks_visited = 0;
    bool dense = false;
};

/// Pair search over X x Y with K planted solutions and two QRAMs of S entries.
/// Dense regime (S^2 >= M1 M2 / K): each block pair gets a budget of
/// ceil(S sqrt(E)) evaluations, E = K S^2 / (M1 M2), spent on repeated BBHT
/// with found solutions removed from the block's domain. Sparse regime: one
/// QAA probe per block pair with qaa_iterations(asin(1/S)) iterations.
[[nodiscard]] PairSearchReport blocked_pair_search(std::uint64_t M1, std::uint64_t M2, std::uint64_t K,
                                                   std::size_t S, std::uint64_t seed);

struct MinFindResult {
    std::size_t index = 0;
    std::uint64_t oracle_evals = 0;
};

/// Threshold descent from index 0: BBHT for an element strictly below the
/// current one until the budget ceil(22.5 sqrt(N)) is spent. Throws
/// EmptySetError on an empty list.
[[nodiscard]] MinFindResult min_find(std::span<const double> values, std::uint64_t seed);
/// Best of three independent runs with derived seeds.
[[nodiscard]] MinFindResult min_find_boosted(std::span<const double> values, std::uint64_t seed);

struct SearchExperimentRow {
    std::uint64_t M = 0;
    std::size_t S = 0;
    double p = 0.0;
    std::uint64_t trials = 0;
    double mean_evals = 0.0;
    double success_rate = 0.0;
    double mean_reloads = 0.0;
};

/// `trials` runs of blocked_search on planted_marks(M, p) with per-trial derived seeds.
[[nodiscard]] SearchExperimentRow blocked_search_experiment(std::uint64_t M, std::size_t S, double p,
                                                            std::uint64_t trials, std::uint64_t seed);

struct PairExperimentRow {
    std::uint64_t M1 = 0;
    std::uint64_t M2 = 0;
    std::uint64_t K = 0;
    std::size_t S = 0;
    std::uint64_t trials = 0;
    double mean_evals = 0.0;
    double mean_solutions = 0.0;
    std::uint64_t min_solutions = 0;
    double mean_reloads = 0.0;
    bool dense = false;
};

[[nodiscard]] PairExperimentRow blocked_pair_experiment(std::uint64_t M1, std::uint64_t M2, std::uint64_t K,
                                                        std::size_t S, std::uint64_t trials, std::uint64_t seed);

}  // namespace sievelab
