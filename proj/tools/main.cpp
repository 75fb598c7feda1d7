// sievelab: seeded batch front end for the trade-off curves and experiments.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "report.hpp"
#include "sievelab/errors.hpp"
#include "sievelab/exponents.hpp"
#include "sievelab/geometry.hpp"
#include "sievelab/noqram_circuit.hpp"
#include "sievelab/qsearch.hpp"
#include "sievelab/rng.hpp"
#include "sievelab/rpc_filter.hpp"
#include "sievelab/sieve.hpp"
#include "sievelab/symkey.hpp"

namespace sievelab::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;
constexpr int kExitInternal = 4;

// Bad flag values detected after parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string seed_text = "0x5EED";
    std::string out;
    std::string format = "csv";
    bool timings = false;

    [[nodiscard]] std::uint64_t seed() const {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(seed_text, &used, 0);
        } catch (const std::exception&) {
            throw UsageError("--seed: not an unsigned 64-bit integer: " + seed_text);
        }
        if (used != seed_text.size()) throw UsageError("--seed: not an unsigned 64-bit integer: " + seed_text);
        return v;
    }
};

void add_common(CLI::App* cmd, Common& common) {
    cmd->add_option("--seed", common.seed_text, "64-bit seed (decimal or 0x hex)")->capture_default_str();
    cmd->add_option("--out", common.out, "output file (default: standard output)");
    cmd->add_option("--format", common.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_flag("--timings", common.timings, "print wall time to standard error");
}

std::vector<double> linspace(double lo, double hi, std::size_t steps) {
    if (steps == 0) throw UsageError("--steps must be at least 1");
    if (steps == 1) return {lo};
    std::vector<double> out(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
    return out;
}

// ---------------------------------------------------------------------------
// tradeoff

struct TradeoffArgs {
    std::string model;
    std::optional<double> gamma_min, gamma_max;
    std::optional<double> t_min, t_max;
    std::optional<double> s_min, s_max;
    std::optional<double> k_min, k_max;
    std::optional<std::size_t> steps;
    double n = 128.0;
    std::optional<double> targets;
};

Report run_tradeoff(const TradeoffArgs& a) {
    Report rep;
    rep.command = "tradeoff";
    rep.config["model"] = a.model;
    Table& tab = rep.table;
    auto steps_or = [&](std::size_t fallback) { return a.steps.value_or(fallback); };

    if (a.model == "lower") {
        const auto grid = linspace(a.s_min.value_or(0.0), a.s_max.value_or(0.2), steps_or(21));
        rep.config["s_grid"] = grid;
        tab.columns = {"s_rate", "time_rate"};
        for (double s : grid) tab.add({s, lower_bound_rate(Rate(s)).value});
        return rep;
    }
    if (a.model == "bkz") {
        const auto grid = linspace(a.k_min.value_or(100.0), a.k_max.value_or(1000.0), steps_or(19));
        rep.config["k_grid"] = grid;
        tab.columns = {"k", "enum_rate", "sieve_noqram_rate", "sieve_fullqram_rate"};
        for (const auto& row : bkz_curves(grid)) {
            tab.add({row.k, row.enum_rate.value, row.sieve_noqram_rate.value, row.sieve_fullqram_rate.value});
        }
        return rep;
    }
    if (a.model == "symkey-collision" || a.model == "symkey-mtps") {
        const bool collision = a.model == "symkey-collision";
        const double gmax_default = collision ? a.n / 3.0 : (a.targets ? *a.targets : a.n / 7.0);
        const auto grid = linspace(a.gamma_min.value_or(0.0), a.gamma_max.value_or(gmax_default), steps_or(11));
        rep.config["n"] = a.n;
        if (a.targets) rep.config["t"] = *a.targets;
        rep.config["gamma_grid"] = grid;
        if (collision) {
            tab.columns = {"n", "gamma", "l", "r", "T_bits", "mem_bits"};
            for (double g : grid) {
                const auto o = collision_optimize(a.n, g);
                tab.add({a.n, g, o.l, o.r, o.time_bits, o.memory_bits});
            }
        } else {
            tab.columns = {"n", "gamma", "t", "r", "T_bits"};
            for (double g : grid) {
                const auto o = mtps_optimize(a.n, a.targets, g);
                tab.add({a.n, g, o.t_used, o.r, o.time_bits});
            }
        }
        return rep;
    }

    const auto model = parse_cost_model(a.model);
    if (!model) throw UsageError("--model: unknown model '" + a.model + "'");
    if (*model == CostModel::noqram) {
        const auto grid = linspace(a.t_min.value_or(0.0), a.t_max.value_or(kListRate), steps_or(30));
        rep.config["t_grid"] = grid;
        tab.columns = {"t_rate", "time_rate", "alpha", "beta"};
        for (const auto& p : noqram_curve(grid)) {
            tab.add({p.t_rate.value, p.time_rate.value, p.alpha, p.beta});
        }
        return rep;
    }

    const bool has_gamma = *model == CostModel::t2 || *model == CostModel::t3 || *model == CostModel::t5;
    std::vector<double> gammas{1.0};
    if (has_gamma) {
        gammas = linspace(a.gamma_min.value_or(1.0), a.gamma_max.value_or(closed_form_gamma_max(*model)), steps_or(50));
        for (double g : gammas) {
            if (!(g >= 1.0)) throw UsageError("--gamma-min/--gamma-max: the QRAM base gamma must be >= 1");
        }
        rep.config["gamma_grid"] = gammas;
    }
    std::vector<double> rates;
    for (double g : gammas) rates.push_back(std::log2(g));
    const auto curve = tradeoff_curve(*model, rates);
    tab.columns = {"model", "gamma", "gamma_rate", "alpha", "beta", "t_rate", "time_rate", "qram_rate", "closed_form_rate"};
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto& p = curve[i];
        Cell closed;
        Cell gamma;
        if (has_gamma) {
            gamma = gammas[i];
            if (gammas[i] <= closed_form_gamma_max(*model)) closed = closed_form_rate(*model, gammas[i]).value;
        }
        tab.add({a.model, gamma, has_gamma ? Cell(p.gamma_rate.value) : Cell(), p.alpha, p.beta, p.t_rate.value,
                 p.time_rate.value, p.qram_rate.value, closed});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// sieve

struct SieveArgs {
    std::size_t d = 0;
    std::size_t n = 0;
    double alpha = 0.5;
    double beta = 0.5;
    double theta = std::numbers::pi / 3.0;
    std::string family = "explicit";
    std::string method = "query";
    std::uint64_t filters = 0;
    std::size_t blocks = 2;
    std::uint64_t wedge_samples = 1'000'000;
};

Report run_sieve(const SieveArgs& a, std::uint64_t seed) {
    if (a.d > 64) throw SizeError("sieve: d must be at most 64");
    if (a.n > 100'000) throw SizeError("sieve: n must be at most 1e5");
    if (a.d < 2) throw UsageError("--d must be at least 2");
    Report rep;
    rep.command = "sieve";
    rep.config["d"] = a.d;
    rep.config["n"] = a.n;
    rep.config["alpha"] = a.alpha;
    rep.config["beta"] = a.beta;
    rep.config["theta"] = a.theta;
    rep.config["family"] = a.family;
    rep.config["method"] = a.method;
    Table& tab = rep.table;
    tab.columns = {"d", "n", "family", "filters", "alpha", "beta", "method", "pairs", "brute_pairs", "recall",
                   "methods_agree", "filter_queries", "inner_products", "insertions", "expected_filter_queries",
                   "expected_inner_products", "filter_ratio", "inner_ratio", "wedge_estimate"};
    if (a.n == 0) return rep;

    double wedge = std::nan("");
    std::uint64_t t = a.filters;
    if (t == 0) {
        wedge = wedge_volume_mc(a.d, a.alpha, a.beta, a.theta, a.wedge_samples, derive_seed(seed, 2)).estimate;
        if (!(wedge > 0.0)) throw UsageError("sieve: wedge estimate is zero; pass --filters explicitly");
        t = static_cast<std::uint64_t>(std::ceil(3.0 / wedge));
    }
    FilterFamily family = [&] {
        if (a.family == "explicit") return FilterFamily::explicit_centers(a.d, t, derive_seed(seed, 1));
        if (a.blocks == 0 || a.d % a.blocks != 0) throw UsageError("--blocks must divide --d");
        const auto m = static_cast<std::size_t>(
            std::ceil(std::pow(static_cast<double>(t), 1.0 / static_cast<double>(a.blocks)) - 1e-9));
        return FilterFamily::random_product_code(a.d, m, a.blocks, derive_seed(seed, 1));
    }();
    t = family.size();
    rep.config["filters"] = t;

    SieveInstance inst = SieveInstance::random_unit(a.n, a.d, derive_seed(seed, 0));
    inst.theta = a.theta;
    QueryLedger query_ledger;
    QueryLedger fas_ledger;
    std::optional<PairSet> by_query;
    std::optional<PairSet> by_fas;
    if (a.method == "query" || a.method == "both") {
        const Buckets b = preprocess(inst, family, a.beta, query_ledger);
        by_query = query_method(inst, family, a.alpha, b, query_ledger);
    }
    if (a.method == "fas" || a.method == "both") by_fas = fas_method(inst, family, a.alpha, a.beta, fas_ledger);
    const PairSet& found = by_query ? *by_query : *by_fas;
    const QueryLedger& ledger = by_query ? query_ledger : fas_ledger;

    const PairSet brute = brute_force_pairs(inst, a.theta);
    std::vector<IndexPair> common;
    std::set_intersection(found.begin(), found.end(), brute.begin(), brute.end(), std::back_inserter(common));
    const double recall =
        brute.empty() ? 1.0 : static_cast<double>(common.size()) / static_cast<double>(brute.size());
    const ExpectedLedger expected = expected_ledger(a.n, t, a.alpha, a.beta, a.d);
    Cell agree;
    if (by_query && by_fas) agree = std::int64_t{*by_query == *by_fas ? 1 : 0};
    tab.add({std::uint64_t{a.d}, std::uint64_t{a.n}, a.family, t, a.alpha, a.beta, a.method,
             std::uint64_t{found.size()}, std::uint64_t{brute.size()}, recall, agree, ledger.filter_queries,
             ledger.inner_product_queries, ledger.insertions, expected.filter_queries(), expected.inner_products,
             static_cast<double>(ledger.filter_queries) / expected.filter_queries(),
             static_cast<double>(ledger.inner_product_queries) / expected.inner_products,
             std::isnan(wedge) ? Cell() : Cell(wedge)});
    return rep;
}

// ---------------------------------------------------------------------------
// qsearch

struct QsearchArgs {
    std::string experiment;
    std::uint64_t M = 256;
    std::vector<std::size_t> S{16};
    std::optional<double> p;
    std::uint64_t trials = 300;
    std::uint64_t M1 = 64, M2 = 64, K = 16;
    std::uint64_t marked = 1;
    std::vector<std::uint64_t> iterations{1};
    std::size_t N = 1024;
};

Report run_qsearch(const QsearchArgs& a, std::uint64_t seed) {
    Report rep;
    rep.command = "qsearch";
    rep.config["experiment"] = a.experiment;
    Table& tab = rep.table;
    if (a.experiment == "blocked") {
        const double p = a.p.value_or(6.0 / static_cast<double>(a.M));
        rep.config["M"] = a.M;
        rep.config["S"] = a.S;
        rep.config["p"] = p;
        rep.config["trials"] = a.trials;
        tab.columns = {"M", "S", "p", "trials", "mean_evals", "success_rate", "mean_reloads"};
        for (std::size_t k = 0; k < a.S.size(); ++k) {
            const auto row = blocked_search_experiment(a.M, a.S[k], p, a.trials, derive_seed(seed, k));
            tab.add({row.M, std::uint64_t{row.S}, row.p, row.trials, row.mean_evals, row.success_rate,
                     row.mean_reloads});
        }
    } else if (a.experiment == "pair") {
        rep.config["M1"] = a.M1;
        rep.config["M2"] = a.M2;
        rep.config["K"] = a.K;
        rep.config["S"] = a.S;
        rep.config["trials"] = a.trials;
        tab.columns = {"M1", "M2", "K", "S", "trials", "dense", "mean_evals", "mean_solutions", "min_solutions",
                       "mean_reloads"};
        for (std::size_t k = 0; k < a.S.size(); ++k) {
            const auto row = blocked_pair_experiment(a.M1, a.M2, a.K, a.S[k], a.trials, derive_seed(seed, k));
            tab.add({row.M1, row.M2, row.K, std::uint64_t{row.S}, row.trials, std::int64_t{row.dense ? 1 : 0},
                     row.mean_evals, row.mean_solutions, row.min_solutions, row.mean_reloads});
        }
    } else if (a.experiment == "qaa") {
        rep.config["S"] = a.S;
        rep.config["marked"] = a.marked;
        rep.config["iterations"] = a.iterations;
        tab.columns = {"S", "marked", "iterations", "marked_mass", "closed_form"};
        for (std::size_t s : a.S) {
            if (a.marked > s) throw UsageError("--marked must not exceed --S");
            std::vector<std::uint64_t> marked(a.marked);
            for (std::uint64_t i = 0; i < a.marked; ++i) marked[i] = i;
            const double theta = std::asin(std::sqrt(static_cast<double>(a.marked) / static_cast<double>(s)));
            for (std::uint64_t it : a.iterations) {
                const auto res = qaa_run(s, marked, it);
                const double closed = std::pow(std::sin((2.0 * static_cast<double>(it) + 1.0) * theta), 2);
                tab.add({std::uint64_t{s}, a.marked, it, res.marked_mass, closed});
            }
        }
    } else if (a.experiment == "minfind") {
        rep.config["N"] = a.N;
        rep.config["trials"] = a.trials;
        if (a.N == 0) throw UsageError("--N must be positive");
        std::uint64_t single_ok = 0, boosted_ok = 0, single_evals = 0, boosted_evals = 0;
        for (std::uint64_t k = 0; k < a.trials; ++k) {
            Rng rng(derive_seed(seed, 2 * k));
            std::vector<double> values(a.N);
            for (double& v : values) v = rng.uniform();
            const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
            const auto s = min_find(values, derive_seed(seed, 2 * k + 1));
            const auto b = min_find_boosted(values, derive_seed(seed, 2 * k + 1));
            single_ok += s.index == best ? 1 : 0;
            boosted_ok += b.index == best ? 1 : 0;
            single_evals += s.oracle_evals;
            boosted_evals += b.oracle_evals;
        }
        const double trials = static_cast<double>(std::max<std::uint64_t>(a.trials, 1));
        tab.columns = {"N", "trials", "success_single", "success_boosted", "mean_evals_single", "mean_evals_boosted"};
        tab.add({std::uint64_t{a.N}, a.trials, static_cast<double>(single_ok) / trials,
                 static_cast<double>(boosted_ok) / trials, static_cast<double>(single_evals) / trials,
                 static_cast<double>(boosted_evals) / trials});
    } else {
        throw UsageError("--experiment: expected blocked, pair, qaa or minfind");
    }
    return rep;
}

// ---------------------------------------------------------------------------
// circuit

struct CircuitArgs {
    std::vector<std::uint64_t> buckets;
    std::size_t d = 4;
    std::string pipeline;
    std::size_t n = 300;
    std::size_t block_size = 12;
    std::size_t blocks = 2;
    double alpha = 0.5;
    double beta = 0.5;
};

Report run_circuit(const CircuitArgs& a, std::uint64_t seed) {
    Report rep;
    rep.command = "circuit";
    Table& tab = rep.table;
    if (a.pipeline.empty()) {
        if (a.buckets.empty()) throw UsageError("circuit: pass --buckets or --pipeline");
        rep.config["buckets"] = a.buckets;
        rep.config["d"] = a.d;
        std::vector<VectorList> lists;
        for (std::size_t i = 0; i < a.buckets.size(); ++i) {
            Rng rng(derive_seed(seed, i));
            lists.push_back(random_unit_list(a.buckets[i], a.d, rng));
        }
        const auto cost = circuit_cost(build_circuit(a.d, lists));
        tab.columns = {"t", "bucket_sizes", "depth", "size", "width"};
        tab.add({std::uint64_t{a.buckets.size()}, a.buckets, cost.depth, cost.size, cost.width});
        return rep;
    }
    PipelineMode mode = PipelineMode::exhaustive;
    if (a.pipeline == "minfind") {
        mode = PipelineMode::minfind;
    } else if (a.pipeline == "minfind-boosted") {
        mode = PipelineMode::minfind_boosted;
    } else if (a.pipeline != "exhaustive") {
        throw UsageError("--pipeline: expected exhaustive, minfind or minfind-boosted");
    }
    if (a.n > 100'000 || a.d > 64) throw SizeError("circuit pipeline: n <= 1e5 and d <= 64");
    if (a.blocks == 0 || a.d % a.blocks != 0) throw UsageError("--blocks must divide --d");
    rep.config["pipeline"] = a.pipeline;
    rep.config["n"] = a.n;
    rep.config["d"] = a.d;
    rep.config["block_size"] = a.block_size;
    rep.config["blocks"] = a.blocks;
    rep.config["alpha"] = a.alpha;
    rep.config["beta"] = a.beta;
    const auto family = FilterFamily::random_product_code(a.d, a.block_size, a.blocks, derive_seed(seed, 1));
    const auto inst = SieveInstance::random_unit(a.n, a.d, derive_seed(seed, 0));
    const auto report = pipeline_step(inst, family, a.alpha, a.beta, mode, derive_seed(seed, 2));
    tab.columns = {"mode", "n", "filters", "pairs", "oracle_calls", "max_calls_per_vector", "max_coin_bits",
                   "vectors_without_close_filter", "exhaustive_fallbacks"};
    tab.add({a.pipeline, std::uint64_t{a.n}, family.size(), std::uint64_t{report.pairs.size()}, report.oracle_calls,
             report.max_oracle_calls_per_vector, std::int64_t{report.max_coin_bits},
             report.vectors_without_close_filter, report.exhaustive_fallbacks});
    return rep;
}

// ---------------------------------------------------------------------------
// geom

struct GeomArgs {
    bool cap = false, wedge = false, trate = false;
    std::size_t d = 0;
    double alpha = 0.5;
    std::optional<double> beta;
    double theta = std::numbers::pi / 3.0;
    bool exact = false, mc = false;
    std::uint64_t samples = 1'000'000;
};

Report run_geom(const GeomArgs& a, std::uint64_t seed) {
    if (static_cast<int>(a.cap) + static_cast<int>(a.wedge) + static_cast<int>(a.trate) != 1) {
        throw UsageError("geom: pass exactly one of --cap, --wedge, --t-rate");
    }
    const double beta = a.beta.value_or(a.alpha);
    Report rep;
    rep.command = "geom";
    rep.config["quantity"] = a.cap ? "cap" : a.wedge ? "wedge" : "t-rate";
    rep.config["d"] = a.d;
    rep.config["alpha"] = a.alpha;
    Table& tab = rep.table;
    tab.columns = {"quantity", "d", "alpha", "beta", "theta", "method", "value", "stderr", "rate"};
    if (a.trate) {
        rep.config["beta"] = beta;
        tab.add({"t-rate", Cell(), a.alpha, beta, a.theta, "closed-form", t_rate(a.alpha, beta).value, Cell(),
                 t_rate(a.alpha, beta).value});
        return rep;
    }
    if (a.d < 2) throw UsageError("geom: --d must be at least 2");
    if (a.cap) {
        const double rate = cap_rate(a.alpha).value;
        if (a.exact || !a.mc) {
            tab.add({"cap", std::uint64_t{a.d}, a.alpha, Cell(), Cell(), "exact", cap_volume_exact(a.d, a.alpha),
                     Cell(), rate});
        }
        if (a.mc) {
            rep.config["samples"] = a.samples;
            const auto e = cap_volume_mc(a.d, a.alpha, a.samples, seed);
            tab.add({"cap", std::uint64_t{a.d}, a.alpha, Cell(), Cell(), "mc", e.estimate, e.stderr_, rate});
        }
        return rep;
    }
    if (a.exact) throw UsageError("geom: --wedge has no exact evaluator; use --mc");
    rep.config["beta"] = beta;
    rep.config["theta"] = a.theta;
    rep.config["samples"] = a.samples;
    const auto e = wedge_volume_mc(a.d, a.alpha, beta, a.theta, a.samples, seed);
    tab.add({"wedge", std::uint64_t{a.d}, a.alpha, beta, a.theta, "mc", e.estimate, e.stderr_,
             wedge_rate(a.alpha, beta, a.theta).value});
    return rep;
}

// ---------------------------------------------------------------------------
// symkey

struct SymkeyArgs {
    std::string problem;
    double n = 0.0;
    std::vector<double> gamma{0.0};
    std::optional<double> l, r, t;
    std::uint64_t trials = 10;
};

Report run_symkey(const SymkeyArgs& a, std::uint64_t seed) {
    Report rep;
    rep.command = "symkey";
    rep.config["problem"] = a.problem;
    rep.config["n"] = a.n;
    rep.config["gamma"] = a.gamma;
    rep.config["trials"] = a.trials;
    Table& tab = rep.table;
    tab.columns = {"n", "t", "gamma", "l", "r", "T_bits_formula", "T_bits_emulated", "mem_bits"};
    if (a.problem != "collision" && a.problem != "mtps") throw UsageError("--problem: expected collision or mtps");
    const bool collision = a.problem == "collision";
    if (!collision && !a.t) throw UsageError("symkey mtps: --t is required");
    for (std::size_t k = 0; k < a.gamma.size(); ++k) {
        const double g = a.gamma[k];
        EmulationPlan plan;
        plan.n = a.n;
        plan.gamma = g;
        plan.trials = a.trials;
        plan.seed = derive_seed(seed, k);
        if (collision) {
            const auto opt = (a.l && a.r) ? CollisionOptimum{} : collision_optimize(a.n, g);
            plan.l = a.l.value_or(opt.l);
            plan.r = a.r.value_or(opt.r);
            const auto res = emulate_collision_queries(plan);
            tab.add({a.n, Cell(), g, plan.l, plan.r, res.formula_bits, res.log2_mean, plan.l});
        } else {
            plan.t = a.t;
            plan.r = a.r ? *a.r : mtps_optimize(a.n, a.t, g).r;
            const auto res = emulate_mtps_queries(plan);
            tab.add({a.n, *a.t, g, Cell(), plan.r, res.formula_bits, res.log2_mean, *a.t});
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

int emit(const Report& rep, const Common& common) {
    const Format fmt = common.format == "json" ? Format::json : Format::csv;
    if (common.out.empty()) {
        write_report(std::cout, rep, fmt);
        std::cout.flush();
        return std::cout ? kExitOk : kExitInternal;
    }
    std::ofstream file(common.out, std::ios::binary);
    if (!file) {
        fmt::print(stderr, "sievelab: cannot open {} for writing\n", common.out);
        return kExitUsage;
    }
    write_report(file, rep, fmt);
    return file ? kExitOk : kExitInternal;
}

int run(int argc, char** argv) {
    CLI::App app{"sievelab: lattice sieving trade-offs under bounded QRAM"};
    app.require_subcommand(1);
    Common common;

    TradeoffArgs ta;
    auto* tradeoff = app.add_subcommand("tradeoff", "optimized exponent curves");
    tradeoff->add_option("--model", ta.model,
                         "classical|t1|t2|t3|t4|t5|noqram|lower|bkz|symkey-collision|symkey-mtps")
        ->required();
    tradeoff->add_option("--gamma-min", ta.gamma_min, "QRAM base (t2/t3/t5) or bits (symkey)");
    tradeoff->add_option("--gamma-max", ta.gamma_max);
    tradeoff->add_option("--t-min", ta.t_min, "filter-count rate range (noqram)");
    tradeoff->add_option("--t-max", ta.t_max);
    tradeoff->add_option("--s-min", ta.s_min, "QRAM rate range (lower)");
    tradeoff->add_option("--s-max", ta.s_max);
    tradeoff->add_option("--k-min", ta.k_min, "block size range (bkz)");
    tradeoff->add_option("--k-max", ta.k_max);
    tradeoff->add_option("--steps", ta.steps, "grid points");
    tradeoff->add_option("--n", ta.n, "bit size (symkey)")->capture_default_str();
    tradeoff->add_option("--t", ta.targets, "target bits (symkey-mtps)");
    add_common(tradeoff, common);

    SieveArgs sa;
    auto* sieve = app.add_subcommand("sieve", "one LSF pass with recall and ledger report");
    sieve->add_option("--d", sa.d, "dimension")->required();
    sieve->add_option("--n", sa.n, "list size")->required();
    sieve->add_option("--alpha", sa.alpha)->capture_default_str();
    sieve->add_option("--beta", sa.beta)->capture_default_str();
    sieve->add_option("--theta", sa.theta, "angle threshold in radians")->capture_default_str();
    sieve->add_option("--family", sa.family)->check(CLI::IsMember({"explicit", "rpc"}))->capture_default_str();
    sieve->add_option("--method", sa.method)->check(CLI::IsMember({"query", "fas", "both"}))->capture_default_str();
    sieve->add_option("--filters", sa.filters, "filter count (0: ceil(3/W) from a wedge estimate)")
        ->capture_default_str();
    sieve->add_option("--blocks", sa.blocks, "product-code blocks")->capture_default_str();
    sieve->add_option("--wedge-samples", sa.wedge_samples)->capture_default_str();
    add_common(sieve, common);

    QsearchArgs qa;
    auto* qsearch = app.add_subcommand("qsearch", "bounded-QRAM search experiments");
    qsearch->add_option("--experiment", qa.experiment, "blocked|pair|qaa|minfind")->required();
    qsearch->add_option("--M", qa.M)->capture_default_str();
    qsearch->add_option("--S", qa.S, "QRAM size(s), comma separated")->delimiter(',');
    qsearch->add_option("--p", qa.p, "marking probability (default 6/M)");
    qsearch->add_option("--trials", qa.trials)->capture_default_str();
    qsearch->add_option("--M1", qa.M1)->capture_default_str();
    qsearch->add_option("--M2", qa.M2)->capture_default_str();
    qsearch->add_option("--K", qa.K)->capture_default_str();
    qsearch->add_option("--marked", qa.marked)->capture_default_str();
    qsearch->add_option("--iterations", qa.iterations)->delimiter(',');
    qsearch->add_option("--N", qa.N, "list size (minfind)")->capture_default_str();
    add_common(qsearch, common);

    CircuitArgs ca;
    auto* circuit = app.add_subcommand("circuit", "comparator-circuit costs and the QRAM-free pipeline");
    circuit->add_option("--buckets", ca.buckets, "bucket sizes, comma separated")->delimiter(',');
    circuit->add_option("--d", ca.d)->capture_default_str();
    circuit->add_option("--pipeline", ca.pipeline, "exhaustive|minfind|minfind-boosted");
    circuit->add_option("--n", ca.n)->capture_default_str();
    circuit->add_option("--block-size", ca.block_size)->capture_default_str();
    circuit->add_option("--blocks", ca.blocks)->capture_default_str();
    circuit->add_option("--alpha", ca.alpha)->capture_default_str();
    circuit->add_option("--beta", ca.beta)->capture_default_str();
    add_common(circuit, common);

    GeomArgs ga;
    auto* geom = app.add_subcommand("geom", "cap and wedge volumes");
    geom->add_flag("--cap", ga.cap);
    geom->add_flag("--wedge", ga.wedge);
    geom->add_flag("--t-rate", ga.trate);
    geom->add_option("--d", ga.d);
    geom->add_option("--alpha", ga.alpha)->capture_default_str();
    geom->add_option("--beta", ga.beta);
    geom->add_option("--theta", ga.theta)->capture_default_str();
    geom->add_flag("--exact", ga.exact);
    geom->add_flag("--mc", ga.mc);
    geom->add_option("--samples", ga.samples)->capture_default_str();
    add_common(geom, common);

    SymkeyArgs ka;
    auto* symkey = app.add_subcommand("symkey", "emulated collision / multi-target preimage query counts");
    symkey->add_option("--problem", ka.problem, "collision|mtps")->required();
    symkey->add_option("--n", ka.n, "bits (at most 22)")->required();
    symkey->add_option("--gamma", ka.gamma, "QRAM bits, comma separated")->delimiter(',');
    symkey->add_option("--l", ka.l);
    symkey->add_option("--r", ka.r);
    symkey->add_option("--t", ka.t);
    symkey->add_option("--trials", ka.trials)->capture_default_str();
    add_common(symkey, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        fmt::print(stderr, "usage: {} (see --help)\n", e.what());
        return kExitUsage;
    }

    const auto start = std::chrono::steady_clock::now();
    int code = kExitOk;
    std::string name;
    try {
        const std::uint64_t seed = common.seed();
        Report rep;
        if (*tradeoff) {
            rep = run_tradeoff(ta);
        } else if (*sieve) {
            rep = run_sieve(sa, seed);
        } else if (*qsearch) {
            rep = run_qsearch(qa, seed);
        } else if (*circuit) {
            rep = run_circuit(ca, seed);
        } else if (*geom) {
            rep = run_geom(ga, seed);
        } else {
            rep = run_symkey(ka, seed);
        }
        rep.config["seed"] = seed;
        name = rep.command;
        code = emit(rep, common);
    } catch (const UsageError& e) {
        fmt::print(stderr, "usage: {}\n", e.what());
        return kExitUsage;
    } catch (const SizeError& e) {
        fmt::print(stderr, "guard: {}\n", e.what());
        return kExitGuard;
    } catch (const RangeError& e) {
        fmt::print(stderr, "usage: {}\n", e.what());
        return kExitUsage;
    } catch (const DomainError& e) {
        fmt::print(stderr, "usage: {}\n", e.what());
        return kExitUsage;
    } catch (const ConfigError& e) {
        fmt::print(stderr, "usage: {}\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        fmt::print(stderr, "internal error: {}\n", e.what());
        return kExitInternal;
    }
    if (common.timings) {
        const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        fmt::print(stderr, "{}: {:.1f} ms\n", name, ms);
    }
    return code;
}

}  // namespace
}  // namespace sievelab::cli

int main(int argc, char** argv) {
    try {
        return sievelab::cli::run(argc, argv);
    } catch (const std::exception& e) {
        fmt::print(stderr, "internal error: {}\n", e.what());
        return 4;
    }
}
