#include "sievelab/symkey.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "sievelab/errors.hpp"
#include "sievelab/exponents.hpp"
#include "sievelab/parallel.hpp"
#include "sievelab/qsearch.hpp"
#include "sievelab/rng.hpp"

namespace sievelab {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

double grover_cost(double bits) { return std::ceil(kQuarterPi * std::exp2(bits / 2.0)); }

// Evaluations spent by the outer amplification over 2^domain_bits candidates
// with a random number of marked ones: QAA with the iteration count tuned to
// the marked fraction, repeated until the measurement succeeds.
double outer_evaluations(double domain_bits, Rng& rng) {
    const double domain = std::max(1.0, std::exp2(domain_bits));
    const double marked = std::min(domain, static_cast<double>(std::max<std::uint64_t>(1, rng.poisson(1.0))));
    const double theta = std::asin(std::sqrt(marked / domain));
    const double iterations = static_cast<double>(qaa_iterations(theta));
    const double success = std::pow(std::sin((2.0 * iterations + 1.0) * theta), 2);
    double attempts = 1.0;
    while (!rng.bernoulli(success)) attempts += 1.0;
    return attempts * (iterations + 1.0);
}

template <class TrialFn>
EmulationResult run_trials(const EmulationPlan& plan, double formula_bits, TrialFn trial) {
    if (plan.trials == 0) throw ConfigError("emulation needs at least one trial");
    EmulationResult out;
    out.formula_bits = formula_bits;
    out.trial_queries.resize(plan.trials);
    parallel_for(plan.trials, [&](std::size_t k) {
        Rng rng(derive_seed(plan.seed, k));
        out.trial_queries[k] = trial(rng);
    });
    out.mean_queries = std::accumulate(out.trial_queries.begin(), out.trial_queries.end(), 0.0) /
                       static_cast<double>(plan.trials);
    out.log2_mean = std::log2(out.mean_queries);
    return out;
}

void check_size(double n) {
    if (n > kMaxEmulatedBits) throw SizeError("symkey emulation is limited to n <= 22");
}

}  // namespace

EmulationResult emulate_collision_queries(const EmulationPlan& plan) {
    check_size(plan.n);
    const double formula = collision_cost(plan.n, plan.l, plan.r, plan.gamma);
    const double candidate = grover_cost(plan.r);
    const double precompute = std::ceil(std::exp2(plan.l)) * candidate;
    const double membership = std::ceil(std::exp2(plan.l - plan.gamma));
    const double domain_bits = plan.n - plan.r - plan.l;
    return run_trials(plan, formula, [&](Rng& rng) {
        return precompute + outer_evaluations(domain_bits, rng) * (candidate + membership);
    });
}

EmulationResult emulate_mtps_queries(const EmulationPlan& plan) {
    if (!plan.t) throw ConfigError("emulate_mtps_queries needs a target count t");
    check_size(plan.n);
    const double t = *plan.t;
    const double formula = mtps_cost(plan.n, t, plan.r, plan.gamma);
    const double load = std::ceil(std::exp2(t));
    const double per_iteration = grover_cost(plan.r) + std::ceil(std::exp2(t - plan.r - plan.gamma));
    return run_trials(plan, formula,
                      [&](Rng& rng) { return load + outer_evaluations(plan.n - t, rng) * per_iteration; });
}

}  // namespace sievelab
