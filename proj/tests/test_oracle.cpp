#include <random>

#include "doctest.h"
#include "npsim/oracle.hpp"
#include "support/lemmas.hpp"
#include "support/random_instances.hpp"

using namespace npsim;

TEST_CASE("eval_cnf") {
    CHECK(eval_cnf({{1}}, {true}));
    CHECK_FALSE(eval_cnf({{1}, {-1}}, {true}));
    CHECK_FALSE(eval_cnf({{1}, {-1}}, {false}));
    CHECK(eval_cnf({{1, -2}, {2}}, {true, true}));
}

TEST_CASE("brute_force_sat") {
    auto r = brute_force_sat({{1, 2}}, 2);
    CHECK(r.yes);
    CHECK(r.witness == "TT");
    CHECK_FALSE(brute_force_sat({{1}, {-1}}, 1).yes);
}

TEST_CASE("subset_sum_solve") {
    CHECK_FALSE(subset_sum_solve(25, {35, 48, 47, 3, 32, 28, 34, 5, 8}).yes);
    auto r = subset_sum_solve(42, {41, 2, 26, 42, 23, 12, 32, 31, 23});
    REQUIRE(r.yes);
    auto picked = parse_subset_certificate(*r.witness);
    REQUIRE(picked);
    CHECK(is_subset_witness(42, {41, 2, 26, 42, 23, 12, 32, 31, 23}, *picked));
    auto zero = subset_sum_solve(0, {5, 7});
    CHECK(zero.yes);
    CHECK(zero.witness == ";");
    CHECK(subset_sum_solve(46, {23, 5, 23}).yes);
    CHECK_FALSE(subset_sum_solve(46, {23, 5}).yes);
}

TEST_CASE("multiset witnesses") {
    CHECK(is_subset_witness(38, {19, 19}, {19, 19}));
    CHECK_FALSE(is_subset_witness(38, {19, 20}, {19, 19}));
}

TEST_CASE("analytic oracle agrees with a plain enumeration of subsets") {
    std::mt19937 rng(7);
    for (int n = 0; n < 300; ++n) {
        auto inst = testing::random_subset_sum(rng, 6, 40);
        bool any = false;
        for (std::size_t mask = 0; mask < (std::size_t{1} << inst.elements.size()); ++mask) {
            std::uint64_t s = 0;
            for (std::size_t i = 0; i < inst.elements.size(); ++i)
                if ((mask >> i) & 1) s += inst.elements[i];
            any = any || s == inst.target;
        }
        auto r = subset_sum_solve(inst.target, inst.elements);
        REQUIRE(r.yes == any);
        if (r.yes) CHECK(witness_valid(inst, *r.witness));
    }
}

TEST_CASE("exhaustive TM oracle agrees with the analytic oracles") {
    std::mt19937 rng(11);
    for (int n = 0; n < 50; ++n) {
        auto inst = testing::random_sat(rng, 4, 4);
        auto a = brute_force_sat(inst.clauses, inst.var_count);
        auto b = exhaustive_tm_decide(Variant::sat_fixed, inst);
        auto c = exhaustive_tm_decide(Variant::sat_id, inst);
        REQUIRE_FALSE(b.budget_exceeded);
        CHECK(a.yes == b.yes);
        CHECK(a.yes == c.yes);
        if (b.yes) CHECK(witness_valid(inst, *b.witness));
    }
    for (int n = 0; n < 50; ++n) {
        auto inst = testing::random_subset_sum(rng, 3, 9);
        inst.trailing_delim = false;
        auto a = subset_sum_solve(inst.target, inst.elements);
        auto b = exhaustive_tm_decide(Variant::subset_sum, inst);
        REQUIRE_FALSE(b.budget_exceeded);
        CHECK(a.yes == b.yes);
        if (b.yes) CHECK(witness_valid(inst, *b.witness));
    }
}

TEST_CASE("verifier lemma suite") {
    auto sat = testing::sat_lemma_suite(2024, 200);
    for (std::size_t i = 0; i < std::min<std::size_t>(sat.failures.size(), 10); ++i) MESSAGE(sat.failures[i]);
    CHECK(sat.ok());
    CHECK(sat.cases > 200);
    auto ss = testing::subset_sum_lemma_suite(2024, 200);
    for (std::size_t i = 0; i < std::min<std::size_t>(ss.failures.size(), 10); ++i) MESSAGE(ss.failures[i]);
    CHECK(ss.ok());
    CHECK(ss.cases > 200);
}
