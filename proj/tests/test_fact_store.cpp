#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dedb/errors.hpp"
#include "dedb/fact_store.hpp"
#include "support/helpers.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace dedb;
using namespace testsupport;

TEST_CASE("reduction keeps exactly the non-subsumed facts") {
    CHECK(fact_strings(store({"a"})) == std::set<std::string>{"a"});
    CHECK(fact_strings(store({"a | b", "a"})) == std::set<std::string>{"a"});
    // Expected value fixed from the pairwise-subset oracle.
    std::vector<DisjunctiveFact> input{dfact("a | b"), dfact("b | c"), dfact("a | b | c")};
    auto expect = red_oracle(input);
    CHECK(expect.size() == 2);
    CHECK(fact_strings(red(input)) == std::set<std::string>{"a | b", "b | c"});
    // Insertion order does not matter.
    std::vector<DisjunctiveFact> reversed(input.rbegin(), input.rend());
    CHECK(red(reversed) == red(input));
}

TEST_CASE("reduction is idempotent and order-insensitive on random stores") {
    std::mt19937 rng(7);
    const char* names[] = {"a", "b", "c", "d", "e"};
    for (int round = 0; round < 200; ++round) {
        std::vector<DisjunctiveFact> facts;
        int n = pick(rng, 1, 8);
        for (int i = 0; i < n; ++i) {
            std::vector<Atom> as;
            int width = pick(rng, 1, 3);
            for (int k = 0; k < width; ++k) as.push_back(Atom{names[pick(rng, 0, 4)], {}});
            facts.push_back(DisjunctiveFact(std::move(as)));
        }
        FactStore once = red(facts);
        CHECK(red(once) == once);
        auto expected = red_oracle(facts);
        CHECK(once.facts() == expected);
        // Reduction does not change the minimal models.
        CHECK(min_models(once) == min_models_oracle(facts));
        CHECK(min_models(once) == min_models_oracle(expected));
    }
}

TEST_CASE("minimal models of simple stores") {
    CHECK(model_strings(min_models(store({"a | b"}))) ==
          std::set<std::string>{"{a}", "{b}"});
    CHECK(model_strings(min_models(store({"a"}))) == std::set<std::string>{"{a}"});
    // Expected set computed by subset enumeration + minimality filtering.
    auto oracle = min_models_oracle({dfact("a | b"), dfact("a | c"), dfact("b | c")});
    CHECK(model_strings(oracle) == std::set<std::string>{"{a,b}", "{a,c}", "{b,c}"});
    CHECK(min_models(store({"a | b", "a | c", "b | c"})) == oracle);
}

TEST_CASE("minimal models respect forced definite atoms") {
    FactStore s = store({"a", "b | c"});
    CHECK(model_strings(min_models(s)) == std::set<std::string>{"{a,b}", "{a,c}"});
    // A definite atom silences disjunctions containing it.
    FactStore t = store({"b | c", "b"});
    CHECK(model_strings(min_models(t)) == std::set<std::string>{"{b}"});
}

TEST_CASE("every minimal model hits every disjunction and is minimal") {
    std::mt19937 rng(11);
    const char* names[] = {"a", "b", "c", "d", "e", "f"};
    for (int round = 0; round < 100; ++round) {
        std::vector<DisjunctiveFact> facts;
        int n = pick(rng, 1, 6);
        for (int i = 0; i < n; ++i) {
            std::vector<Atom> as;
            int width = pick(rng, 1, 3);
            for (int k = 0; k < width; ++k) as.push_back(Atom{names[pick(rng, 0, 5)], {}});
            facts.push_back(DisjunctiveFact(std::move(as)));
        }
        FactStore s = red(facts);
        auto models = min_models(s);
        for (const auto& m : models) {
            for (const DisjunctiveFact& f : s.facts()) {
                bool hit = std::any_of(f.atoms.begin(), f.atoms.end(), [&](const Atom& a) {
                    return std::binary_search(m.begin(), m.end(), a);
                });
                CHECK(hit);
            }
            // Dropping any atom breaks some disjunction.
            for (const Atom& drop : m) {
                std::vector<Atom> smaller;
                for (const Atom& a : m)
                    if (!(a == drop)) smaller.push_back(a);
                bool still_model = true;
                for (const DisjunctiveFact& f : s.facts()) {
                    bool hit = std::any_of(f.atoms.begin(), f.atoms.end(), [&](const Atom& a) {
                        return std::binary_search(smaller.begin(), smaller.end(), a);
                    });
                    if (!hit) still_model = false;
                }
                CHECK_FALSE(still_model);
            }
        }
    }
}

TEST_CASE("inconsistent store has no model set") {
    FactStore s = store({"a"});
    s.mark_inconsistent();
    CHECK_THROWS_AS(min_models(s), InconsistencyError);
}

TEST_CASE("model enumeration cap") {
    FactStore s;
    for (int i = 0; i < 11; ++i) {
        s.insert_fact(DisjunctiveFact(
            {Atom{"x" + std::to_string(2 * i), {}}, Atom{"x" + std::to_string(2 * i + 1), {}}}));
    }
    CHECK_THROWS_AS(min_models(s, 20), EnumerationCapError);
    CHECK_NOTHROW(min_models(s, 22));
    // Definite facts do not count against the cap.
    FactStore t = store({"a | b"});
    for (int i = 0; i < 40; ++i) t.insert_atom(Atom{"y" + std::to_string(i), {}});
    CHECK(min_models(t, 20).size() == 2);
}

TEST_CASE("antichain invariant under interleaved insertion") {
    FactStore s;
    CHECK(s.insert_fact(dfact("a | b | c")));
    CHECK(s.insert_fact(dfact("a | b")));        // replaces the superset
    CHECK_FALSE(s.insert_fact(dfact("a | b | c")));  // now subsumed
    CHECK(s.insert_atom(atm("b")));              // kills a | b
    CHECK(fact_strings(s) == std::set<std::string>{"b"});
    CHECK_FALSE(s.insert_fact(dfact("b | c")));
    CHECK(s.size() == 1);
}

TEST_CASE("store equality is canonical") {
    FactStore a = store({"p(1)", "q(1) | q(2)"});
    FactStore b = store({"q(2) | q(1)", "p(1)"});
    CHECK(a == b);
    CHECK_FALSE(a == store({"p(1)"}));
}

TEST_CASE("duplicate atoms inside a disjunction collapse") {
    CHECK(dfact("a | a").definite());
    CHECK(to_string(dfact("b | a | b")) == "a | b");
}
