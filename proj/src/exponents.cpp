#include "sievelab/exponents.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sievelab/errors.hpp"

namespace sievelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGridLo = 0.05;
constexpr double kGridHi = 0.95;
constexpr double kGridStep = 0.01;
constexpr double kRefineTolerance = 1e-8;
constexpr int kEvalBudget = 400000;
constexpr double kSaturationSlack = 1e-7;

// Rates that enter every model at a given (alpha, beta).
struct BaseRates {
    double n, t, ca, cb;
};

bool base_rates(double alpha, double beta, BaseRates& out) {
    if (!(alpha >= 0.0 && alpha < 1.0 && beta >= 0.0 && beta < 1.0)) return false;
    const double q = alpha * alpha - alpha * beta + beta * beta;
    const double arg = 1.0 - 4.0 / 3.0 * q;
    if (!(arg > 0.0)) return false;
    out.n = kListRate;
    out.t = -0.5 * std::log2(arg);
    out.ca = 0.5 * std::log2(1.0 - alpha * alpha);
    out.cb = 0.5 * std::log2(1.0 - beta * beta);
    return true;
}

struct Terms {
    std::array<double, 3> value{};
    int count = 0;
    double qram = 0.0;

    [[nodiscard]] double max() const {
        double m = -kInf;
        for (int i = 0; i < count; ++i) m = std::max(m, value[i]);
        return m;
    }
};

// Largest useful QRAM rate: the size of the search space the model loads into it.
double search_space_rate(CostModel model, const BaseRates& r) {
    const double full = r.n + r.t + r.ca + r.cb;
    switch (model) {
        case CostModel::t2: return full;
        case CostModel::t3: return 0.5 * full;
        case CostModel::t5: return std::max(r.t + r.ca, full);
        default: return kInf;
    }
}

// Term rates with the QRAM rate g already limited to what the model can use.
Terms terms_at(CostModel model, const BaseRates& r, double g) {
    const double n = r.n;
    const double full = n + r.t + r.ca + r.cb;
    Terms out;
    out.count = 3;
    out.value[0] = n + r.t + r.cb;
    out.value[1] = n + r.t + r.ca;
    switch (model) {
        case CostModel::classical:
            out.value[2] = n + full;
            break;
        case CostModel::t1:
            out.value[2] = n + 0.5 * full;
            out.qram = std::max(0.0, full);
            break;
        case CostModel::t2:
            out.value[2] = n + full - 0.5 * g;
            out.qram = g;
            break;
        case CostModel::t3:
            out.value[2] = std::max(n + full - g, n + 0.5 * full);
            out.qram = std::min(g, std::max(0.0, 0.5 * full));
            break;
        case CostModel::t4:
            out.value[1] = n + 0.5 * (r.t + r.ca);
            out.value[2] = n + 0.5 * full;
            out.qram = std::max(0.0, std::max(r.t + r.ca, full));
            break;
        case CostModel::t5:
            out.value[1] = n + r.t + r.ca - 0.5 * g;
            out.value[2] = n + full - 0.5 * g;
            out.qram = g;
            break;
        case CostModel::noqram:
            out.count = 2;
            out.value[1] = n + 0.5 * (r.t + r.ca) + std::max(0.0, n + r.cb);
            break;
    }
    return out;
}

double effective_gamma(CostModel model, const BaseRates& r, double g) {
    const double bound = search_space_rate(model, r);
    return std::clamp(g, 0.0, std::max(0.0, bound));
}

double objective(CostModel model, double alpha, double beta, double g) {
    BaseRates r{};
    if (alpha <= 0.0 || beta <= 0.0 || !base_rates(alpha, beta, r)) return kInf;
    return terms_at(model, r, effective_gamma(model, r, g)).max();
}

struct Vertex {
    double x, y, f;
};

// Nelder-Mead on a 2-D function from `start` with initial edge `step`.
template <typename F>
Vertex nelder_mead(F&& f, double x0, double y0, double step, int& evals, int max_evals) {
    std::array<Vertex, 3> s{Vertex{x0, y0, 0.0}, Vertex{x0 + step, y0, 0.0}, Vertex{x0, y0 + step, 0.0}};
    for (auto& v : s) {
        v.f = f(v.x, v.y);
        ++evals;
    }
    auto eval = [&](double x, double y) {
        ++evals;
        return Vertex{x, y, f(x, y)};
    };
    while (evals < max_evals) {
        std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        const double size = std::max(std::hypot(s[1].x - s[0].x, s[1].y - s[0].y),
                                     std::hypot(s[2].x - s[0].x, s[2].y - s[0].y));
        if (size < 1e-12 || (std::isfinite(s[2].f) && s[2].f - s[0].f < 1e-14 && size < 1e-9)) break;
        const double cx = 0.5 * (s[0].x + s[1].x);
        const double cy = 0.5 * (s[0].y + s[1].y);
        const Vertex refl = eval(cx + (cx - s[2].x), cy + (cy - s[2].y));
        if (refl.f < s[0].f) {
            const Vertex exp = eval(cx + 2.0 * (cx - s[2].x), cy + 2.0 * (cy - s[2].y));
            s[2] = exp.f < refl.f ? exp : refl;
        } else if (refl.f < s[1].f) {
            s[2] = refl;
        } else {
            const bool outside = refl.f < s[2].f;
            const Vertex con = outside ? eval(cx + 0.5 * (refl.x - cx), cy + 0.5 * (refl.y - cy))
                                       : eval(cx + 0.5 * (s[2].x - cx), cy + 0.5 * (s[2].y - cy));
            if (con.f < std::min(refl.f, s[2].f)) {
                s[2] = con;
            } else {
                for (int i = 1; i < 3; ++i) s[i] = eval(0.5 * (s[0].x + s[i].x), 0.5 * (s[0].y + s[i].y));
            }
        }
    }
    return *std::min_element(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
}

TradeoffPoint make_point(CostModel model, double alpha, double beta, double g) {
    BaseRates r{};
    base_rates(alpha, beta, r);
    const Terms terms = terms_at(model, r, effective_gamma(model, r, g));
    TradeoffPoint p;
    p.gamma_rate = Rate(g);
    p.alpha = alpha;
    p.beta = beta;
    p.t_rate = Rate(r.t);
    p.time_rate = Rate(terms.max());
    for (int i = 0; i < terms.count; ++i) p.term_rates.emplace_back(terms.value[i]);
    p.qram_rate = Rate(terms.qram);
    return p;
}

double noqram_time(double alpha, double beta) {
    BaseRates r{};
    if (!base_rates(alpha, beta, r)) return kInf;
    return terms_at(CostModel::noqram, r, 0.0).max();
}

}  // namespace

std::string_view to_string(CostModel model) {
    switch (model) {
        case CostModel::classical: return "classical";
        case CostModel::t1: return "t1";
        case CostModel::t2: return "t2";
        case CostModel::t3: return "t3";
        case CostModel::t4: return "t4";
        case CostModel::t5: return "t5";
        case CostModel::noqram: return "noqram";
    }
    return "unknown";
}

std::optional<CostModel> parse_cost_model(std::string_view name) {
    for (CostModel m : {CostModel::classical, CostModel::t1, CostModel::t2, CostModel::t3, CostModel::t4,
                        CostModel::t5, CostModel::noqram}) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

std::optional<Rate> qram_bound(CostModel model, double alpha, double beta) {
    BaseRates r{};
    if (!base_rates(alpha, beta, r)) throw DomainError("qram_bound: alpha, beta outside the admissible region");
    if (model == CostModel::t2 || model == CostModel::t5) return Rate(search_space_rate(model, r));
    return std::nullopt;
}

std::vector<Rate> model_terms(CostModel model, double alpha, double beta, Rate gamma_rate) {
    if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0))
        throw DomainError("model_terms: alpha and beta must lie in (0, 1)");
    BaseRates r{};
    if (!base_rates(alpha, beta, r)) throw DomainError("model_terms: 1 - 4/3 (a^2 - ab + b^2) must be positive");
    const double g = gamma_rate.value;
    if (g < 0.0) throw RangeError("model_terms: gamma_rate must be nonnegative", 0.0);
    if (model == CostModel::t2 || model == CostModel::t5) {
        const double bound = search_space_rate(model, r);
        if (g > bound) throw RangeError("model_terms: QRAM larger than the search space it serves", bound);
    }
    const Terms terms = terms_at(model, r, g);
    std::vector<Rate> out;
    for (int i = 0; i < terms.count; ++i) out.emplace_back(terms.value[i]);
    return out;
}

double closed_form_gamma_max(CostModel model) {
    switch (model) {
        case CostModel::t2: return 13.0 / 12.0;
        case CostModel::t3: return std::sqrt(13.0 / 12.0);
        case CostModel::t5: return 1.07122;
        default: throw DomainError("closed_form_gamma_max: only t2, t3 and t5 have closed forms");
    }
}

Rate closed_form_rate(CostModel model, double gamma) {
    const double hi = closed_form_gamma_max(model);
    if (gamma < 1.0) throw RangeError("closed_form_rate: gamma below 1", 1.0);
    if (gamma > hi) throw RangeError("closed_form_rate: gamma above the closed form's range", hi);
    switch (model) {
        case CostModel::t2: return Rate(0.5 * std::log2(3.0 * gamma / (3.0 * gamma - 1.0)));
        case CostModel::t3: {
            const double g2 = gamma * gamma;
            return Rate(0.5 * std::log2(3.0 * g2 / (3.0 * g2 - 1.0)));
        }
        default:
            return Rate(-0.5 * std::log2(gamma - 2.0 / 3.0 + 2.0 / 3.0 * std::sqrt(1.0 - 0.75 * gamma)));
    }
}

TradeoffPoint optimize(CostModel model, Rate gamma_rate) {
    const double g = gamma_rate.value;
    if (!(g >= 0.0) || !std::isfinite(g)) throw RangeError("optimize: gamma_rate must be finite and nonnegative", 0.0);
    auto f = [&](double a, double b) { return objective(model, a, b, g); };

    Vertex best{0.5, 0.5, kInf};
    const int steps = static_cast<int>(std::lround((kGridHi - kGridLo) / kGridStep));
    for (int i = 0; i <= steps; ++i) {
        for (int j = 0; j <= steps; ++j) {
            const double a = kGridLo + i * kGridStep;
            const double b = kGridLo + j * kGridStep;
            const double v = f(a, b);
            if (v < best.f) best = {a, b, v};
        }
    }
    if (!std::isfinite(best.f)) throw ConvergenceError("optimize: no feasible grid point", best.x, best.y, best.f);

    int evals = 0;
    bool converged = false;
    double step = kGridStep;
    for (int round = 0; round < 200 && evals < kEvalBudget; ++round) {
        const Vertex v = nelder_mead(f, best.x, best.y, step, evals, kEvalBudget);
        const double gain = best.f - v.f;
        if (v.f < best.f) best = v;
        if (gain < kRefineTolerance * 1e-3) {
            if (step < 1e-6) {
                converged = true;
                break;
            }
            step *= 0.1;
        }
    }
    if (!converged) throw ConvergenceError("optimize: refinement budget exhausted", best.x, best.y, best.f);
    return make_point(model, best.x, best.y, g);
}

std::vector<TradeoffPoint> tradeoff_curve(CostModel model, std::span<const double> gamma_rate_grid) {
    if (!std::is_sorted(gamma_rate_grid.begin(), gamma_rate_grid.end()))
        throw DomainError("tradeoff_curve: grid must be sorted ascending");
    std::vector<TradeoffPoint> out;
    out.reserve(gamma_rate_grid.size());
    for (double g : gamma_rate_grid) out.push_back(optimize(model, Rate(g)));
    return out;
}

Rate saturation_gamma_rate(CostModel model) {
    if (model != CostModel::t2 && model != CostModel::t3 && model != CostModel::t5)
        throw DomainError("saturation_gamma_rate: only t2, t3 and t5 trade time for QRAM");
    double hi = 0.5;
    const double floor = optimize(model, Rate(hi)).time_rate.value;
    double lo = 0.0;
    while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        if (optimize(model, Rate(mid)).time_rate.value <= floor + kSaturationSlack) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return Rate(hi);
}

Rate lower_bound_rate(Rate s_rate) {
    if (s_rate.value < 0.0) throw RangeError("lower_bound_rate: s_rate must be nonnegative", 0.0);
    return Rate(std::max(0.0, kClassicalTimeRate - 2.0 * s_rate.value));
}

Rate blocked_search_rate(Rate m_rate, Rate s_rate) {
    if (s_rate.value < 0.0) throw RangeError("blocked_search_rate: s_rate must be nonnegative", 0.0);
    if (s_rate > m_rate) throw RangeError("blocked_search_rate: QRAM larger than the search space", m_rate.value);
    return m_rate - s_rate / 2.0;
}

NoQramPoint noqram_optimize(Rate t) {
    if (t.value < 0.0) throw RangeError("noqram_optimize: t_rate must be nonnegative", 0.0);
    NoQramPoint out;
    out.t_rate = t;
    // a^2 - ab + b^2 = q is an ellipse; parametrize a+b and a-b along it.
    const double q = 0.75 * (1.0 - std::exp2(-2.0 * t.value));
    if (q <= 0.0) {
        out.time_rate = Rate(noqram_time(0.0, 0.0));
        return out;
    }
    const double rq = std::sqrt(q);
    auto point = [&](double phi) {
        const double u = 2.0 * rq * std::cos(phi);
        const double v = 2.0 / std::sqrt(3.0) * rq * std::sin(phi);
        return std::pair{0.5 * (u + v), 0.5 * (u - v)};
    };
    auto f = [&](double phi) {
        const auto [a, b] = point(phi);
        return noqram_time(a, b);
    };
    constexpr int kGrid = 7200;
    const double h = 2.0 * std::numbers::pi / kGrid;
    double best_phi = 0.0;
    double best = kInf;
    for (int i = 0; i < kGrid; ++i) {
        const double phi = -std::numbers::pi + i * h;
        const double v = f(phi);
        if (v < best) {
            best = v;
            best_phi = phi;
        }
    }
    if (!std::isfinite(best)) throw RangeError("noqram_optimize: no (alpha, beta) in [0, 1)^2 reaches this t_rate", t.value);

    // Golden-section refinement inside the bracketing grid cell pair.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = best_phi - h;
    double hi = best_phi + h;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > 1e-12) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    const double phi = f1 < f2 ? x1 : x2;
    if (std::min(f1, f2) < best) {
        best = std::min(f1, f2);
        best_phi = phi;
    }
    const auto [a, b] = point(best_phi);
    out.alpha = a;
    out.beta = b;
    out.time_rate = Rate(best);
    return out;
}

std::vector<NoQramPoint> noqram_curve(std::span<const double> t_rate_grid) {
    std::vector<NoQramPoint> out;
    out.reserve(t_rate_grid.size());
    for (double t : t_rate_grid) out.push_back(noqram_optimize(Rate(t)));
    return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("fit_line: need two or more (x, y) pairs");
    const double count = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= count;
    my /= count;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw DomainError("fit_line: x values are all equal");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

Rate bkz_enum_rate(double k) {
    if (!(k >= 70.0)) throw RangeError("bkz_enum_rate: block size must be at least 70", 70.0);
    return Rate((k * std::log(k) / (8.0 * std::numbers::ln2) - 0.547 * k + 10.4) / (2.0 * k));
}

std::vector<BkzRow> bkz_curves(std::span<const double> k_grid) {
    std::vector<BkzRow> out;
    out.reserve(k_grid.size());
    for (double k : k_grid) {
        out.push_back({k, bkz_enum_rate(k), Rate(kClassicalTimeRate), Rate(kQuantumWalkSieveRate)});
    }
    return out;
}

double bkz_crossover(Rate sieve_rate) {
    double lo = 70.0;
    double hi = 1e9;
    if (bkz_enum_rate(lo) >= sieve_rate || bkz_enum_rate(hi) <= sieve_rate)
        throw RangeError("bkz_crossover: no crossing in [70, 1e9]", sieve_rate.value);
    for (int i = 0; i < 200 && hi - lo > 1e-9 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (bkz_enum_rate(mid) < sieve_rate ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace sievelab
