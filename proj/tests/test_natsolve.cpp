#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pf/natsolve.hpp"

using namespace pf;

namespace {

CountTerm v(const std::string& name) { return CountTerm::variable(name); }
CountTerm c(long long value) { return CountTerm::constant(value); }

CountRelation rel(CountTerm lhs, RelOp op, CountTerm rhs) {
    return CountRelation{std::move(lhs), op, std::move(rhs)};
}

/// Random term of depth <= 2 over the given variables.
CountTerm random_term(std::mt19937& rng, const std::vector<std::string>& vars, int depth) {
    auto leaf = [&]() {
        if (!vars.empty() && rng() % 2)
            return v(vars[rng() % vars.size()]);
        return c(static_cast<long long>(rng() % 11));
    };
    if (depth == 0 || rng() % 3 == 0) return leaf();
    CountTerm l = random_term(rng, vars, depth - 1);
    CountTerm r = random_term(rng, vars, depth - 1);
    switch (rng() % 3) {
    case 0: return CountTerm::add(std::move(l), std::move(r));
    case 1: return CountTerm::sub(std::move(l), std::move(r));
    default: return CountTerm::mul(std::move(l), std::move(r));
    }
}

CountRelation random_relation(std::mt19937& rng, const std::vector<std::string>& vars) {
    // count relations support <, <=, =, >, >= (never !=)
    return rel(random_term(rng, vars, 2), static_cast<RelOp>(rng() % 5),
               random_term(rng, vars, 2));
}

} // namespace

TEST_CASE("terms evaluate by structural recursion") {
    // (x + 2) * (y - 1)
    CountTerm t = CountTerm::mul(CountTerm::add(v("x"), c(2)), CountTerm::sub(v("y"), c(1)));
    ReplicaAssignment a{{"x", 3}, {"y", 4}};
    CHECK(t.evaluate(a) == 15);
    CHECK(oracle::eval_term(t, a) == 15);

    SUBCASE("subtraction is over the integers") {
        CountTerm s = CountTerm::sub(c(1), c(5));
        CHECK(s.evaluate({}) == -4);
    }
    SUBCASE("unknown variables raise") {
        CHECK_THROWS_AS(t.evaluate({{"x", 1}}), PfError);
    }
    SUBCASE("to_string round-trips through the display syntax") {
        CHECK(t.to_string() == "(x + 2) * (y - 1)");
        CHECK(rel(v("x"), RelOp::Ge, c(0)).display() == "x >= 0");
    }
    SUBCASE("random terms agree with the oracle evaluator") {
        std::mt19937 rng(4242);
        std::vector<std::string> vars{"x", "y", "z"};
        for (int i = 0; i < 200; ++i) {
            CountTerm t2 = random_term(rng, vars, 2);
            ReplicaAssignment a2{{"x", static_cast<long long>(rng() % 7)},
                                 {"y", static_cast<long long>(rng() % 7)},
                                 {"z", static_cast<long long>(rng() % 7)}};
            CHECK(t2.evaluate(a2) == oracle::eval_term(t2, a2));
        }
    }
}

TEST_CASE("variable order is first appearance then extras") {
    EquationSystem sys({rel(CountTerm::add(v("b"), v("a")), RelOp::Eq, v("c"))}, {"d", "b"});
    CHECK(sys.variables() == std::vector<std::string>{"b", "a", "c", "d"});
}

TEST_CASE("enumerate_solutions matches the odometer oracle") {
    SUBCASE("linear system") {
        EquationSystem sys({rel(v("x"), RelOp::Gt, c(0)),
                            rel(CountTerm::add(v("x"), v("y")), RelOp::Eq, c(3))});
        auto got = sys.enumerate_solutions(3);
        auto want = oracle::grid_solutions(sys.relations(), sys.variables(), 3);
        CHECK(got == want);
        CHECK(got.size() == 3); // x=1..3
        CHECK(got.front() == ReplicaAssignment{{"x", 1}, {"y", 2}});
    }
    SUBCASE("multiplicative coupling") {
        EquationSystem sys({rel(CountTerm::mul(v("a"), v("b")), RelOp::Eq, c(6))});
        auto got = sys.enumerate_solutions(6);
        auto want = oracle::grid_solutions(sys.relations(), sys.variables(), 6);
        CHECK(got == want);
        CHECK(got.size() == 4); // 1x6 2x3 3x2 6x1
    }
    SUBCASE("infeasible system yields nothing") {
        EquationSystem sys({rel(v("x"), RelOp::Gt, v("x"))});
        CHECK(sys.enumerate_solutions(5).empty());
    }
    SUBCASE("no variables yields the empty assignment when relations hold") {
        EquationSystem tautology({rel(c(1), RelOp::Le, c(2))});
        CHECK(tautology.enumerate_solutions(4) ==
              std::vector<ReplicaAssignment>{ReplicaAssignment{}});
        EquationSystem contradiction({rel(c(2), RelOp::Lt, c(1))});
        CHECK(contradiction.enumerate_solutions(4).empty());
    }
    SUBCASE("unconstrained extras still enumerate") {
        EquationSystem sys({rel(v("x"), RelOp::Eq, c(1))}, {"free"});
        auto got = sys.enumerate_solutions(2);
        CHECK(got.size() == 3); // free = 0..2
        for (const auto& a : got) CHECK(a.at("x") == 1);
    }
    SUBCASE("max_solutions returns a prefix") {
        EquationSystem sys({rel(v("x"), RelOp::Ge, c(0))});
        auto all = sys.enumerate_solutions(9);
        auto two = sys.enumerate_solutions(9, 2);
        REQUIRE(two.size() == 2);
        CHECK(two[0] == all[0]);
        CHECK(two[1] == all[1]);
    }
    SUBCASE("solutions come in lexicographic tuple order") {
        EquationSystem sys({rel(CountTerm::add(v("p"), v("q")), RelOp::Ge, c(0))});
        auto got = sys.enumerate_solutions(1);
        REQUIRE(got.size() == 4);
        CHECK(got[0] == ReplicaAssignment{{"p", 0}, {"q", 0}});
        CHECK(got[1] == ReplicaAssignment{{"p", 0}, {"q", 1}});
        CHECK(got[2] == ReplicaAssignment{{"p", 1}, {"q", 0}});
        CHECK(got[3] == ReplicaAssignment{{"p", 1}, {"q", 1}});
    }
}

TEST_CASE("minimal_solutions are the Pareto frontier") {
    // x + y >= 2 has minimal points (0,2), (1,1), (2,0)
    EquationSystem sys({rel(CountTerm::add(v("x"), v("y")), RelOp::Ge, c(2))});
    auto minimal = sys.minimal_solutions(4);
    auto want = oracle::pareto_filter(sys.enumerate_solutions(4));
    // order-insensitive comparison; the engine keeps enumeration order
    auto sorted = [](std::vector<ReplicaAssignment> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    CHECK(sorted(minimal) == sorted(want));
    CHECK(minimal.size() == 3);

    SUBCASE("downward-closed systems have a single minimum") {
        EquationSystem box({rel(v("x"), RelOp::Ge, c(0)), rel(v("y"), RelOp::Ge, c(0))});
        auto m = box.minimal_solutions(3);
        REQUIRE(m.size() == 1);
        CHECK(m[0] == ReplicaAssignment{{"x", 0}, {"y", 0}});
    }
}

TEST_CASE("satisfied_by agrees with direct evaluation") {
    EquationSystem sys({rel(v("x"), RelOp::Gt, c(0)),
                        rel(CountTerm::mul(v("x"), v("y")), RelOp::Le, c(10))});
    CHECK(sys.satisfied_by({{"x", 2}, {"y", 5}}));
    CHECK_FALSE(sys.satisfied_by({{"x", 0}, {"y", 5}}));
    CHECK_FALSE(sys.satisfied_by({{"x", 3}, {"y", 4}}));
}

TEST_CASE("random systems agree with the oracle end to end") {
    std::mt19937 rng(777);
    for (int i = 0; i < 60; ++i) {
        int nvars = 1 + int(rng() % 3);
        std::vector<std::string> vars;
        for (int j = 0; j < nvars; ++j) vars.push_back(std::string(1, char('a' + j)));
        std::vector<CountRelation> rels;
        int nrels = 1 + int(rng() % 4);
        for (int j = 0; j < nrels; ++j) rels.push_back(random_relation(rng, vars));
        EquationSystem sys(rels, vars);
        auto got = sys.enumerate_solutions(5);
        auto want = oracle::grid_solutions(sys.relations(), sys.variables(), 5);
        REQUIRE(got == want);
        auto min_got = sys.minimal_solutions(5);
        auto min_want = oracle::pareto_filter(want);
        std::sort(min_got.begin(), min_got.end());
        std::sort(min_want.begin(), min_want.end());
        REQUIRE(min_got == min_want);
    }
}
