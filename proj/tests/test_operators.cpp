#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dedb/errors.hpp"
#include "dedb/ground.hpp"
#include "dedb/operators.hpp"
#include "support/generators.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace dedb;
using namespace testsupport;

namespace {

const std::vector<Rule> path_rules = rls({
    "o(X,Y) :- not p(Y,X), p(X,Y).",
    "p(X,Y) :- e(X,Y).",
    "p(X,Y) :- e(X,Z), p(Z,Y).",
});

// Reachability closure computed independently of the engine.
std::set<std::pair<std::string, std::string>> reach_oracle(const std::vector<Atom>& edges) {
    std::set<std::pair<std::string, std::string>> r;
    for (const Atom& e : edges) r.insert({e.args[0].text, e.args[1].text});
    bool changed = true;
    while (changed) {
        changed = false;
        auto snapshot = r;
        for (const auto& [a, b] : snapshot)
            for (const auto& [c, d] : snapshot)
                if (b == c && r.insert({a, d}).second) changed = true;
    }
    return r;
}

}  // namespace

TEST_CASE("ground instances against definite stores") {
    FactStore s = store({"e(1,2)"});
    auto gi = ground_instances(rls({"p(X,Y) :- e(X,Y)."}), s);
    REQUIRE(gi.size() == 1);
    CHECK(gi[0] == rl("p(1,2) :- e(1,2)."));

    // Join (expected instance worked out by hand).
    FactStore j = store({"e(1,2)", "p(2,3)"});
    auto gj = ground_instances(rls({"p(X,Y) :- e(X,Z), p(Z,Y)."}), j);
    REQUIRE(gj.size() == 1);
    CHECK(gj[0] == rl("p(1,3) :- e(1,2), p(2,3)."));

    CHECK(ground_instances(path_rules, FactStore{}).empty());
}

TEST_CASE("ground instances match the substitution-enumeration oracle") {
    std::mt19937 rng(41);
    for (int i = 0; i < 60; ++i) {
        Database d = gen_stratifiable_db(rng, {.max_constants = 4});
        FactStore s = FactStore::of_atoms(d.facts);
        CHECK(ground_instances(d.rules, s) == ground_instances_oracle(d.rules, s));
    }
}

TEST_CASE("ground instances inside disjunctions") {
    FactStore s = store({"a(1) | c(1)"});
    auto gi = ground_instances(rls({"b(X) :- a(X)."}), s);
    REQUIRE(gi.size() == 1);
    CHECK(gi[0] == rl("b(1) :- a(1)."));
}

TEST_CASE("immediate consequence single step") {
    FactStore s = store({"e(1,2)"});
    FactStore t = immediate_consequence(rls({"p(X,Y) :- e(X,Y)."}), s);
    CHECK(t.contains_definite(atm("p(1,2)")));
    CHECK(t.size() == 2);

    // Negation against the current store (worked out by hand).
    FactStore u = immediate_consequence(rls({"o(X,Y) :- not p(Y,X), p(X,Y)."}),
                                        store({"p(1,2)"}));
    CHECK(u.contains_definite(atm("o(1,2)")));

    FactStore fix = immediate_consequence(path_rules, store({"e(1,2)", "p(1,2)", "o(1,2)"}));
    CHECK(fix == store({"e(1,2)", "p(1,2)", "o(1,2)"}));

    CHECK_THROWS(immediate_consequence(rls({"a(X) | b(X) :- c(X)."}), store({"c(1)"})));
    CHECK_THROWS(immediate_consequence(rls({"b(X) :- c(X)."}), store({"c(1) | d(1)"})));
}

TEST_CASE("least fixpoint of the transitive closure") {
    std::vector<Rule> p_rules = rls({"p(X,Y) :- e(X,Y).", "p(X,Y) :- e(X,Z), p(Z,Y)."});
    FactStore seed = store({"e(1,2)", "e(2,3)"});
    FactStore fix = lfp([&](const FactStore& s) { return immediate_consequence(p_rules, s); }, seed);
    auto want = reach_oracle({atm("e(1,2)"), atm("e(2,3)")});
    CHECK(want == decltype(want){{"1", "2"}, {"1", "3"}, {"2", "3"}});
    for (const auto& [a, b] : want)
        CHECK(fix.contains_definite(Atom{"p", {Term::constant(a), Term::constant(b)}}));
    CHECK(fix.size() == seed.size() + want.size());

    CHECK(lfp([&](const FactStore& s) { return immediate_consequence({}, s); }, seed) == seed);
}

TEST_CASE("iterated fixpoint model evaluates strata in order") {
    Database d = db("e(1,2).\no(X,Y) :- not p(Y,X), p(X,Y).\np(X,Y) :- e(X,Y).\np(X,Y) :- e(X,Z), p(Z,Y).");
    FactStore m = iterated_fixpoint_model(d).positive;
    CHECK(fact_strings(m) == std::set<std::string>{"e(1,2)", "p(1,2)", "o(1,2)"});

    Database d2 = db("e(1,2). e(2,1).\no(X,Y) :- not p(Y,X), p(X,Y).\np(X,Y) :- e(X,Y).\np(X,Y) :- e(X,Z), p(Z,Y).");
    FactStore m2 = iterated_fixpoint_model(d2).positive;
    CHECK(m2.definite_of("o").empty());
    CHECK(m2.definite_of("p").size() == 4);  // all pairs over {1,2}

    Database facts_only = db("e(1,2). e(3,4).");
    CHECK(iterated_fixpoint_model(facts_only).positive == store({"e(1,2)", "e(3,4)"}));

    CHECK_THROWS_AS(iterated_fixpoint_model(db("p(1).\nq(X) :- p(X), not r(X).\nr(X) :- p(X), not q(X).")),
                    UnstratifiableError);
}

TEST_CASE("soft operator over a stratification-induced partition") {
    Partition part = require_stratification(path_rules).partition;
    FactStore seed = store({"e(1,2)"});

    // Single step applies the lowest growing layer only.
    FactStore one = soft_consequence(part, seed);
    CHECK(one.contains_definite(atm("p(1,2)")));
    CHECK_FALSE(one.contains_definite(atm("o(1,2)")));

    ModelResult fix = soft_fixpoint(part, seed);
    Database d;
    d.facts = {atm("e(1,2)")};
    d.rules = path_rules;
    CHECK(fix.positive == iterated_fixpoint_model(d).positive);

    CHECK(soft_consequence(part, fix.positive) == fix.positive);
}

TEST_CASE("alternating fixpoint computes the well-founded positive part") {
    // Mutual negation: both atoms undefined, positive part empty.
    Database d;
    d.rules = rls({"p :- t, not q.", "q :- t, not p."});
    d.facts = {atm("t")};
    FactStore m = alternating_fixpoint_model(d).positive;
    CHECK_FALSE(m.contains_definite(atm("p")));
    CHECK_FALSE(m.contains_definite(atm("q")));
    CHECK(m.contains_definite(atm("t")));

    // Odd negation loop: w is false, v true.
    Database d2;
    d2.rules = rls({"w :- t, not w2.", "w2 :- t, not w3.", "w3 :- t, not w.", "v :- t."});
    d2.facts = {atm("t")};
    FactStore m2 = alternating_fixpoint_model(d2).positive;
    CHECK(m2.contains_definite(atm("v")));
    CHECK_FALSE(m2.contains_definite(atm("w")));

    std::mt19937 rng(43);
    for (int i = 0; i < 80; ++i) {
        Database rd = gen_stratifiable_db(rng);
        CHECK(alternating_fixpoint_model(rd).positive == iterated_fixpoint_model(rd).positive);
    }
}

TEST_CASE("disjunctive consequence derives heads, residues and contexts") {
    // Direct head derivation.
    FactStore s1 = state_consequence(rls({"a(X) | b(X) :- c(X)."}), store({"c(1)"}));
    CHECK(fact_strings(s1) == std::set<std::string>{"c(1)", "a(1) | b(1)"});

    // Residue from matching inside a disjunction; checked against the models.
    FactStore s2 = state_consequence(rls({"b :- a."}), store({"a | c"}));
    CHECK(fact_strings(s2) == std::set<std::string>{"a | c", "b | c"});
    CHECK(model_strings(min_models(s2)) == std::set<std::string>{"{a,b}", "{c}"});

    // Context: the negated atom may still hold in some minimal model.
    FactStore s3 = state_consequence(rls({"a :- t, not b."}), store({"t", "b | c"}));
    CHECK(s3.contains_fact(dfact("a | b")));

    // Definite rule over definite facts behaves like the immediate operator.
    FactStore f = store({"e(1,2)"});
    CHECK(state_consequence(rls({"p(X,Y) :- e(X,Y)."}), f) ==
          immediate_consequence(rls({"p(X,Y) :- e(X,Y)."}), f));
}

TEST_CASE("single applications of the immediate and disjunctive operators agree on definite input") {
    std::mt19937 rng(47);
    for (int i = 0; i < 400; ++i) {
        auto [rule, facts] = gen_rule_and_facts(rng);
        CHECK(state_consequence({rule}, facts) == immediate_consequence({rule}, facts));
    }
}

TEST_CASE("iterated fixpoint state with constraints") {
    // Worked example: q2 blocked by s(2), au absent, ic(2) derivable.
    Database d = db(
        "r2(2). s(2).\n"
        "constraint ic(2).\n"
        "p(X) :- q1(X).\np(X) :- q2(X).\n"
        "q1(X) :- r1(X), s(X).\nq2(X) :- r2(X), not s(X).\n"
        "ic(2) :- not au(2).\nau(X) :- q2(X), not q1(X).\n");
    StateModel sm = fixpoint_state_model(d);
    CHECK(sm.state.contains_definite(atm("ic(2)")));
    CHECK_FALSE(sm.state.contains_definite(atm("q2(2)")));
    CHECK_FALSE(sm.state.contains_definite(atm("au(2)")));
    REQUIRE(sm.models.size() == 1);

    // Disjunctive base via a ground disjunctive rule; constraint filters models.
    Database d2 = db("t.\na | b :- t.\nconstraint a.\n");
    StateModel sm2 = fixpoint_state_model(d2);
    REQUIRE(sm2.models.size() == 1);
    CHECK(std::binary_search(sm2.models[0].begin(), sm2.models[0].end(), atm("a")));

    Database d3 = db("t.\nb :- t.\nconstraint a.\na :- t, not t2.\nt2 :- b.");
    CHECK_THROWS_AS(fixpoint_state_model(d3), InconsistencyError);

    // Purely definite database: state equals the iterated fixpoint model.
    std::mt19937 rng(53);
    for (int i = 0; i < 50; ++i) {
        Database rd = gen_stratifiable_db(rng, {.max_constants = 4});
        CHECK(fixpoint_state_model(rd).state == iterated_fixpoint_model(rd).positive);
    }
}

TEST_CASE("general soft operator fixpoint equals the iterated fixpoint state") {
    std::mt19937 rng(59);
    for (int i = 0; i < 80; ++i) {
        Database d = gen_disjunctive_db(rng);
        Partition part = require_stratification(d.rules).partition;
        FactStore seed = FactStore::of_atoms(d.facts);
        ModelResult g = general_soft_fixpoint(part, seed);
        Database no_constraints = d;
        no_constraints.constraints.clear();
        StateModel s = fixpoint_state_model(no_constraints);
        CHECK(g.positive == s.state);
        // A store at the global fixpoint stays put.
        CHECK(general_soft_consequence(part, g.positive) == g.positive);
    }
}

TEST_CASE("all four engines agree on stratifiable definite databases") {
    std::mt19937 rng(61);
    for (int i = 0; i < 60; ++i) {
        Database d = gen_stratifiable_db(rng, {.max_constants = 5});
        FactStore iterated = iterated_fixpoint_model(d).positive;
        Partition part = require_stratification(d.rules).partition;
        FactStore seed = FactStore::of_atoms(d.facts);
        CHECK(soft_fixpoint(part, seed).positive == iterated);
        CHECK(alternating_fixpoint_model(d).positive == iterated);
        CHECK(general_soft_fixpoint(part, seed).positive == iterated);
    }
}

TEST_CASE("iterating the single-step operators reaches the engine fixpoints") {
    std::mt19937 rng(101);
    for (int i = 0; i < 30; ++i) {
        Database d = gen_stratifiable_db(rng, {.max_constants = 4});
        Partition part = require_stratification(d.rules).partition;
        FactStore seed = FactStore::of_atoms(d.facts);
        FactStore stepped =
            lfp([&](const FactStore& s) { return soft_consequence(part, s); }, seed);
        CHECK(stepped == soft_fixpoint(part, seed).positive);
    }
    for (int i = 0; i < 30; ++i) {
        Database d = gen_disjunctive_db(rng);
        Partition part = require_stratification(d.rules).partition;
        FactStore seed = FactStore::of_atoms(d.facts);
        FactStore stepped =
            lfp([&](const FactStore& s) { return general_soft_consequence(part, s); }, seed);
        CHECK(stepped == general_soft_fixpoint(part, seed).positive);
    }
}

TEST_CASE("naive and delta-driven evaluation reach identical fixpoints") {
    std::mt19937 rng(67);
    EvalOptions naive{.semi_naive = false};
    EvalOptions delta{.semi_naive = true};
    for (int i = 0; i < 60; ++i) {
        Database d = gen_stratifiable_db(rng);
        CHECK(iterated_fixpoint_model(d, naive).positive ==
              iterated_fixpoint_model(d, delta).positive);
        Partition part = require_stratification(d.rules).partition;
        FactStore seed = FactStore::of_atoms(d.facts);
        CHECK(soft_fixpoint(part, seed, naive).positive ==
              soft_fixpoint(part, seed, delta).positive);
    }
}
