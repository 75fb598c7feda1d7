#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <cstring>
#include <sstream>

#include "sievelab/errors.hpp"
#include "sievelab/geometry.hpp"
#include "sievelab/sieve.hpp"

using namespace sievelab;
using std::numbers::pi;

namespace {

// Ordered pairs covered by some filter: x alpha-relevant and y beta-relevant.
PairSet covered_pairs(const SieveInstance& inst, const FilterFamily& family, double alpha, double beta, double theta) {
    std::vector<std::set<std::uint64_t>> qa(inst.size());
    std::vector<std::set<std::uint64_t>> qb(inst.size());
    for (std::size_t i = 0; i < inst.size(); ++i) {
        for (auto f : relevant_filters(family, inst.vectors[i], alpha).indices) qa[i].insert(f);
        for (auto f : relevant_filters(family, inst.vectors[i], beta).indices) qb[i].insert(f);
    }
    PairSet out;
    for (std::uint32_t x = 0; x < inst.size(); ++x) {
        for (std::uint32_t y = 0; y < inst.size(); ++y) {
            if (x == y || dot(inst.vectors[x], inst.vectors[y]) < std::cos(theta)) continue;
            const bool shared = std::any_of(qa[x].begin(), qa[x].end(), [&](auto f) { return qb[y].count(f) > 0; });
            if (shared) out.push_back({x, y});
        }
    }
    return out;
}

SieveInstance from_rows(std::size_t d, std::vector<double> data, InstanceMode mode = InstanceMode::unit,
                        double radius = 1.0) {
    SieveInstance inst;
    inst.vectors = VectorList(d, std::move(data));
    inst.mode = mode;
    inst.radius = radius;
    return inst;
}

}  // namespace

TEST_CASE("preprocess on an empty list") {
    SieveInstance inst;
    inst.vectors = VectorList(8);
    const auto family = FilterFamily::explicit_centers(8, 10, 1);
    QueryLedger ledger;
    const Buckets b = preprocess(inst, family, 0.5, ledger);
    CHECK(b.insert_side.size() == 10);
    for (const auto& bucket : b.insert_side) CHECK(bucket.empty());
    CHECK(ledger == QueryLedger{});
}

TEST_CASE("bucket sizes and exact membership") {
    const auto inst = SieveInstance::random_unit(500, 24, 3);
    const auto family = FilterFamily::explicit_centers(24, 400, 4);
    QueryLedger ledger;
    const Buckets b = preprocess(inst, family, 0.5, ledger);
    std::size_t total = 0;
    for (const auto& bucket : b.insert_side) total += bucket.size();
    const double expected = 500.0 * 400.0 * cap_volume_exact(24, 0.5);
    CHECK(total > expected / 2);
    CHECK(total < expected * 2);
    CHECK(ledger.filter_queries == 500 + total);
    CHECK(ledger.insertions == total);

    Rng rng(5);
    for (int k = 0; k < 100; ++k) {
        const auto i = static_cast<std::uint32_t>(rng.below(500));
        const auto j = rng.below(400);
        const bool member = std::binary_search(b.insert_side[j].begin(), b.insert_side[j].end(), i);
        CHECK(member == (dot(inst.vectors[i], family.centers()[j]) >= 0.5));
    }
}

TEST_CASE("query and FAS return the covered close pairs") {
    const auto inst = SieveInstance::random_unit(300, 10, 6);
    for (const auto& family : {FilterFamily::explicit_centers(10, 60, 7), FilterFamily::random_product_code(10, 8, 2, 8)}) {
        QueryLedger lq;
        const Buckets b = preprocess(inst, family, 0.35, lq);
        const PairSet q = query_method(inst, family, 0.3, b, lq);
        QueryLedger lf;
        const PairSet f = fas_method(inst, family, 0.3, 0.35, lf);
        CHECK(q == f);
        CHECK(q == covered_pairs(inst, family, 0.3, 0.35, inst.theta));
        for (const auto& p : q) CHECK(dot(inst.vectors[p.query], inst.vectors[p.insert]) >= 0.5);
        CHECK(lq.inner_product_queries == lf.inner_product_queries);
        CHECK(lq.filter_queries + lq.insertions <= lf.filter_queries + lf.insertions);
        CHECK(lq.filter_queries >= inst.size());
    }
}

TEST_CASE("vacuous threshold returns every covered pair") {
    auto inst = SieveInstance::random_unit(120, 8, 9);
    inst.theta = pi;
    const auto family = FilterFamily::explicit_centers(8, 30, 10);
    QueryLedger ledger;
    const Buckets b = preprocess(inst, family, 0.2, ledger);
    CHECK(query_method(inst, family, 0.2, b, ledger) == covered_pairs(inst, family, 0.2, 0.2, pi));
}

TEST_CASE("a planted close pair is found") {
    // x = e1, y = rotate(x, pi/4) in the e1-e2 plane, one center at their midpoint.
    const double c = std::cos(pi / 4);
    const double s = std::sin(pi / 4);
    const auto inst = from_rows(4, {1, 0, 0, 0, c, s, 0, 0, 0, 0, 1, 0});
    FilterFamily family = FilterFamily::explicit_centers(4, 1, 0);
    const double mc = std::cos(pi / 8);
    const double ms = std::sin(pi / 8);
    std::stringstream buf;
    {
        // Replace the random center with the midpoint direction via the file format.
        family.save(buf);
        std::string bytes = buf.str();
        const std::vector<double> mid{mc, ms, 0, 0};
        std::memcpy(bytes.data() + bytes.size() - 32, mid.data(), 32);
        std::stringstream patched(bytes);
        family = FilterFamily::load(patched);
    }
    QueryLedger ledger;
    const Buckets b = preprocess(inst, family, 0.9, ledger);
    const PairSet pairs = query_method(inst, family, 0.9, b, ledger);
    CHECK(pairs == PairSet{{0, 1}, {1, 0}});
}

TEST_CASE("single global bucket") {
    const auto inst = SieveInstance::random_unit(200, 6, 11);
    const auto family = FilterFamily::explicit_centers(6, 1, 12);
    QueryLedger ledger;
    const PairSet pairs = fas_method(inst, family, -1.0, -1.0, ledger);
    CHECK(pairs == brute_force_pairs(inst, inst.theta));
    CHECK(ledger.inner_product_queries == 200u * 200u);

    const auto e = expected_ledger(200, 1, -1.0, -1.0, 6);
    CHECK(e.insert_filter_hits == doctest::Approx(200));
    CHECK(e.query_filter_hits == doctest::Approx(200));
    CHECK(e.inner_products == doctest::Approx(200.0 * 200.0));
}

TEST_CASE("expected ledger is linear in t and matches a run") {
    const auto one = expected_ledger(500, 100, 0.4, 0.45, 24);
    const auto two = expected_ledger(500, 200, 0.4, 0.45, 24);
    CHECK(two.insert_filter_hits == doctest::Approx(2 * one.insert_filter_hits));
    CHECK(two.query_filter_hits == doctest::Approx(2 * one.query_filter_hits));
    CHECK(two.inner_products == doctest::Approx(2 * one.inner_products));

    const auto inst = SieveInstance::random_unit(500, 24, 13);
    const std::uint64_t t = 2000;
    const auto family = FilterFamily::explicit_centers(24, t, 14);
    QueryLedger ledger;
    (void)fas_method(inst, family, 0.4, 0.45, ledger);
    const auto e = expected_ledger(500, t, 0.4, 0.45, 24);
    const auto within2 = [](double measured, double predicted) {
        return measured <= 2 * predicted && measured >= predicted / 2;
    };
    CHECK(within2(static_cast<double>(ledger.filter_queries), e.filter_queries()));
    CHECK(within2(static_cast<double>(ledger.inner_product_queries), e.inner_products));
    CHECK(within2(static_cast<double>(ledger.insertions), e.insert_filter_hits + e.query_filter_hits));
}

TEST_CASE("brute_force_pairs reference cases") {
    CHECK(brute_force_pairs(from_rows(2, {1, 0, 0, 1}), pi / 3).empty());
    const auto close = from_rows(2, {1, 0, std::cos(pi / 6), std::sin(pi / 6)});
    CHECK(brute_force_pairs(close, pi / 3) == PairSet{{0, 1}, {1, 0}});

    const auto inst = SieveInstance::random_unit(1000, 24, 15);
    const double p = cap_volume_exact(24, 0.5);
    const double unordered = 1000.0 * 999.0 / 2.0;
    const double ordered = static_cast<double>(brute_force_pairs(inst, pi / 3).size());
    CHECK(std::fabs(ordered - 2 * unordered * p) <= 3 * 2 * std::sqrt(unordered * p * (1 - p)));
}

TEST_CASE("sieve_step contracts") {
    const auto same = from_rows(3, {0, 1, 0, 0, 1, 0, 0, 1, 0}, InstanceMode::norm, 1.0);
    const auto family = FilterFamily::explicit_centers(3, 20, 16);
    QueryLedger ledger;
    CHECK(sieve_step(same, family, -1.0, -1.0, 1.0, ledger).size() == 0);

    const double radius = 3.0;
    const auto inst = SieveInstance::random_sphere(400, 8, radius, 17);
    inst.validate();
    const auto wide = FilterFamily::explicit_centers(8, 1, 18);
    const VectorList out = sieve_step(inst, wide, -1.0, -1.0, 1.0, ledger);
    const PairSet exact = brute_force_pairs(inst, pi / 3);
    CHECK(out.size() == vectors_with_partner(exact));
    for (std::size_t i = 0; i < out.size(); ++i) {
        CHECK(norm(out[i]) <= radius + 1e-9);
        CHECK(norm(out[i]) > 0.0);
    }
    // Law of cosines: on the radius-R sphere, |v - w| <= R iff the angle is at most pi/3.
    for (const auto& p : exact) CHECK(distance(inst.vectors[p.query], inst.vectors[p.insert]) <= radius + 1e-9);

    const VectorList tighter = sieve_step(inst, wide, -1.0, -1.0, 0.4, ledger);
    for (std::size_t i = 0; i < tighter.size(); ++i) CHECK(norm(tighter[i]) <= 0.4 * radius + 1e-9);
    CHECK(tighter.size() < out.size());
}

TEST_CASE("runs are deterministic") {
    const auto a = SieveInstance::random_unit(300, 12, 19);
    const auto b = SieveInstance::random_unit(300, 12, 19);
    CHECK(a == b);
    const auto family = FilterFamily::random_product_code(12, 9, 2, 20);
    QueryLedger la;
    QueryLedger lb;
    CHECK(fas_method(a, family, 0.3, 0.3, la) == fas_method(b, family, 0.3, 0.3, lb));
    CHECK(la == lb);
}

TEST_CASE("instance serialization") {
    const auto inst = SieveInstance::random_sphere(50, 6, 2.5, 21);
    std::stringstream buf;
    inst.save(buf);
    CHECK(SieveInstance::load(buf) == inst);
    auto bad = SieveInstance::random_unit(5, 4, 1);
    bad.vectors.row(0)[0] += 0.1;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}
