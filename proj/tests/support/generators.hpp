#pragma once

#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dedb/ast.hpp"
#include "dedb/database.hpp"
#include "dedb/propagate.hpp"

// Random instance generators for the property suites. Everything is driven by
// a caller-seeded mt19937 so failures reproduce.
namespace testsupport {

using namespace dedb;
using Rng = std::mt19937;

inline int pick(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

struct ProgramShape {
    int max_constants = 8;
    int max_base = 2;
    int max_derived = 4;
    int max_rules_per_pred = 2;
    int max_body = 3;
    bool allow_negation = true;
    double fact_density = 0.35;
};

// Stratifiable definite program: derived predicate i may use predicates
// 0..i positively and 0..i-1 under negation.
inline Database gen_stratifiable_db(Rng& rng, const ProgramShape& shape = {}) {
    Database db;
    const int n_const = pick(rng, 2, shape.max_constants);
    const int n_base = pick(rng, 1, shape.max_base);
    const int n_derived = pick(rng, 1, shape.max_derived);

    std::vector<std::string> base_names, derived_names;
    std::vector<std::size_t> base_arity, derived_arity;
    for (int i = 0; i < n_base; ++i) {
        base_names.push_back("b" + std::to_string(i));
        base_arity.push_back(static_cast<std::size_t>(pick(rng, 1, 2)));
    }
    for (int i = 0; i < n_derived; ++i) {
        derived_names.push_back("d" + std::to_string(i));
        derived_arity.push_back(static_cast<std::size_t>(pick(rng, 1, 2)));
    }

    const char* varpool[] = {"X", "Y", "Z", "W"};

    for (int i = 0; i < n_derived; ++i) {
        const int n_rules = pick(rng, 1, shape.max_rules_per_pred);
        for (int r = 0; r < n_rules; ++r) {
            Rule rule;
            const int body_len = pick(rng, 1, shape.max_body);
            std::set<std::string> posvars;

            int positives = 0;
            for (int k = 0; k < body_len; ++k) {
                // Positive literal over base or derived <= i; at least one.
                bool negative = shape.allow_negation && positives > 0 && k + 1 < body_len
                                    ? pick(rng, 0, 3) == 0
                                    : false;
                std::string pred;
                std::size_t n_args;
                if (negative) {
                    // Strictly lower stratum (or base) keeps it stratifiable.
                    int j = pick(rng, -static_cast<int>(base_names.size()), i - 1);
                    if (j < 0) {
                        pred = base_names[static_cast<std::size_t>(-j - 1)];
                        n_args = base_arity[static_cast<std::size_t>(-j - 1)];
                    } else {
                        pred = derived_names[static_cast<std::size_t>(j)];
                        n_args = derived_arity[static_cast<std::size_t>(j)];
                    }
                } else {
                    int j = pick(rng, -static_cast<int>(base_names.size()), i);
                    if (j < 0 || (j == i && r == 0)) {
                        // First rule of a predicate never self-recurses, so
                        // every derived predicate has a non-recursive support.
                        int jb = j < 0 ? -j - 1 : pick(rng, 0, static_cast<int>(base_names.size()) - 1);
                        pred = base_names[static_cast<std::size_t>(jb)];
                        n_args = base_arity[static_cast<std::size_t>(jb)];
                    } else {
                        pred = derived_names[static_cast<std::size_t>(j)];
                        n_args = derived_arity[static_cast<std::size_t>(j)];
                    }
                }
                Atom a{pred, {}};
                for (std::size_t p = 0; p < n_args; ++p) {
                    if (pick(rng, 0, 4) == 0) {
                        a.args.push_back(Term::constant(std::to_string(pick(rng, 1, n_const))));
                    } else {
                        a.args.push_back(Term::var(varpool[pick(rng, 0, 3)]));
                    }
                }
                if (negative) {
                    // Negative arguments must already be positively bound.
                    for (Term& t : a.args)
                        if (t.is_var() && !posvars.count(t.text)) {
                            if (posvars.empty()) {
                                t = Term::constant(std::to_string(pick(rng, 1, n_const)));
                            } else {
                                auto it = posvars.begin();
                                std::advance(it, pick(rng, 0, static_cast<int>(posvars.size()) - 1));
                                t = Term::var(*it);
                            }
                        }
                    rule.body.push_back(neg(std::move(a)));
                } else {
                    ++positives;
                    for (const Term& t : a.args)
                        if (t.is_var()) posvars.insert(t.text);
                    rule.body.push_back(pos(std::move(a)));
                }
            }

            Atom head{derived_names[static_cast<std::size_t>(i)], {}};
            for (std::size_t p = 0; p < derived_arity[static_cast<std::size_t>(i)]; ++p) {
                if (!posvars.empty() && pick(rng, 0, 4) != 0) {
                    auto it = posvars.begin();
                    std::advance(it, pick(rng, 0, static_cast<int>(posvars.size()) - 1));
                    head.args.push_back(Term::var(*it));
                } else {
                    head.args.push_back(Term::constant(std::to_string(pick(rng, 1, n_const))));
                }
            }
            rule.head.push_back(std::move(head));
            db.rules.push_back(std::move(rule));
        }
    }

    std::set<Atom> facts;
    for (std::size_t b = 0; b < base_names.size(); ++b) {
        std::vector<std::vector<std::string>> tuples{{}};
        for (std::size_t p = 0; p < base_arity[b]; ++p) {
            std::vector<std::vector<std::string>> next;
            for (const auto& t : tuples)
                for (int c = 1; c <= n_const; ++c) {
                    auto t2 = t;
                    t2.push_back(std::to_string(c));
                    next.push_back(std::move(t2));
                }
            tuples = std::move(next);
        }
        for (const auto& t : tuples) {
            if (std::uniform_real_distribution<double>(0, 1)(rng) > shape.fact_density) continue;
            Atom a{base_names[b], {}};
            for (const std::string& c : t) a.args.push_back(Term::constant(c));
            facts.insert(std::move(a));
        }
    }
    db.facts.assign(facts.begin(), facts.end());
    return db;
}

// Ground query over a random derived predicate.
inline Atom gen_ground_query(Rng& rng, const Database& db) {
    std::vector<std::string> derived(derived_predicates(db.rules).begin(),
                                     derived_predicates(db.rules).end());
    std::sort(derived.begin(), derived.end());
    const std::string& pred = derived[static_cast<std::size_t>(
        pick(rng, 0, static_cast<int>(derived.size()) - 1))];
    std::size_t n = predicate_arities(db).at(pred);
    std::vector<std::string> dom = active_domain(db);
    if (dom.empty()) dom.push_back("1");
    Atom q{pred, {}};
    for (std::size_t i = 0; i < n; ++i)
        q.args.push_back(Term::constant(dom[static_cast<std::size_t>(
            pick(rng, 0, static_cast<int>(dom.size()) - 1))]));
    return q;
}

// Effective base update: 1..2 insertions of absent tuples and/or deletions of
// present facts. Returns nullopt when the database offers no usable change.
inline std::optional<DeltaSet> gen_true_update(Rng& rng, const Database& db) {
    auto arities = predicate_arities(db);
    std::vector<std::string> base(base_predicates(db).begin(), base_predicates(db).end());
    std::sort(base.begin(), base.end());
    if (base.empty()) return std::nullopt;
    std::vector<std::string> dom = active_domain(db);
    if (dom.empty()) dom.push_back("1");
    std::set<Atom> facts(db.facts.begin(), db.facts.end());

    DeltaSet ds;
    const int n_changes = pick(rng, 1, 2);
    for (int k = 0; k < n_changes; ++k) {
        const std::string& pred =
            base[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(base.size()) - 1))];
        bool deletion = pick(rng, 0, 2) == 0 && !db.facts.empty();
        if (deletion) {
            std::vector<Atom> of_pred;
            for (const Atom& f : db.facts)
                if (f.pred == pred) of_pred.push_back(f);
            if (of_pred.empty()) continue;
            ds.deletions.push_back(
                of_pred[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(of_pred.size()) - 1))]);
        } else {
            Atom a{pred, {}};
            for (std::size_t i = 0; i < arities.at(pred); ++i)
                a.args.push_back(Term::constant(
                    dom[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(dom.size()) - 1))]));
            if (facts.count(a)) continue;
            ds.insertions.push_back(std::move(a));
        }
    }
    ds.canonicalize();
    for (const Atom& a : ds.insertions)
        for (const Atom& d : ds.deletions)
            if (a == d) return std::nullopt;
    if (ds.empty()) return std::nullopt;
    return ds;
}

// Small stratifiable disjunctive database over a Herbrand base of at most
// `max_atoms` ground atoms (propositional plus unary predicates).
inline Database gen_disjunctive_db(Rng& rng, int max_atoms = 12) {
    Database db;
    const int n_const = pick(rng, 1, 2);
    const int n_pred = pick(rng, 3, 5);

    struct P {
        std::string name;
        std::size_t arity;
        int level;
    };
    std::vector<P> preds;
    int hb = 0;
    for (int i = 0; i < n_pred && hb < max_atoms; ++i) {
        std::size_t arity = pick(rng, 0, 1) == 0 ? 0u : 1u;
        int cost = arity == 0 ? 1 : n_const;
        if (hb + cost > max_atoms) arity = 0, cost = 1;
        preds.push_back({"q" + std::to_string(i), arity, i});
        hb += cost;
    }

    auto rand_atom = [&](int max_level, int min_level = 0) {
        std::vector<const P*> eligible;
        for (const P& p : preds)
            if (p.level <= max_level && p.level >= min_level) eligible.push_back(&p);
        const P& p = *eligible[static_cast<std::size_t>(
            pick(rng, 0, static_cast<int>(eligible.size()) - 1))];
        Atom a{p.name, {}};
        if (p.arity == 1) {
            if (pick(rng, 0, 2) == 0) {
                a.args.push_back(Term::var("X"));
            } else {
                a.args.push_back(Term::constant(std::to_string(pick(rng, 1, n_const))));
            }
        }
        return a;
    };

    const int n_rules = pick(rng, 1, 4);
    for (int r = 0; r < n_rules; ++r) {
        // Head predicates share the highest level in the rule.
        int level = pick(rng, 1, static_cast<int>(preds.size()) - 1);
        Rule rule;
        const int n_head = pick(rng, 1, 3);
        for (int h = 0; h < n_head; ++h) rule.head.push_back(rand_atom(level, level));
        const int n_body = pick(rng, 1, 2);
        bool have_pos = false;
        for (int b = 0; b < n_body; ++b) {
            bool negative = have_pos && pick(rng, 0, 2) == 0;
            Atom a = rand_atom(level - 1);
            if (negative) {
                rule.body.push_back(neg(std::move(a)));
            } else {
                have_pos = true;
                rule.body.push_back(pos(std::move(a)));
            }
        }
        // Safety: replace unbound head/negative variables by constants.
        std::set<std::string> posvars;
        for (const Literal& l : rule.body)
            if (l.positive)
                for (const Term& t : l.atom.args)
                    if (t.is_var()) posvars.insert(t.text);
        auto fix = [&](Atom& a) {
            for (Term& t : a.args)
                if (t.is_var() && !posvars.count(t.text))
                    t = Term::constant(std::to_string(pick(rng, 1, n_const)));
        };
        for (Atom& h : rule.head) fix(h);
        for (Literal& l : rule.body)
            if (!l.positive) fix(l.atom);
        db.rules.push_back(std::move(rule));
    }

    // Base facts over level-0 predicates only (head levels start at 1).
    std::set<Atom> facts;
    std::unordered_set<std::string> heads = derived_predicates(db.rules);
    for (const P& p : preds) {
        if (heads.count(p.name)) continue;
        if (p.arity == 0) {
            if (pick(rng, 0, 1) == 0) facts.insert(Atom{p.name, {}});
        } else {
            for (int c = 1; c <= n_const; ++c)
                if (pick(rng, 0, 1) == 0)
                    facts.insert(Atom{p.name, {Term::constant(std::to_string(c))}});
        }
    }
    db.facts.assign(facts.begin(), facts.end());
    return db;
}

// Random (definite ground-testable rule, definite fact set) pair over a tiny
// universe; used for single-application operator comparisons.
inline std::pair<Rule, FactStore> gen_rule_and_facts(Rng& rng) {
    const int n_const = pick(rng, 2, 4);
    const char* preds[] = {"r", "s", "t"};
    int arities[3];
    for (int& a : arities) a = pick(rng, 1, 2);
    const char* vars[] = {"X", "Y"};

    Rule rule;
    const int n_body = pick(rng, 1, 3);
    std::set<std::string> posvars;
    bool have_pos = false;
    for (int i = 0; i < n_body; ++i) {
        const int pi = pick(rng, 0, 2);
        Atom a{preds[pi], {}};
        for (int p = 0; p < arities[pi]; ++p) {
            if (pick(rng, 0, 2) == 0)
                a.args.push_back(Term::constant(std::to_string(pick(rng, 1, n_const))));
            else
                a.args.push_back(Term::var(vars[pick(rng, 0, 1)]));
        }
        bool negative = have_pos && pick(rng, 0, 2) == 0;
        if (negative) {
            for (Term& t : a.args)
                if (t.is_var() && !posvars.count(t.text))
                    t = Term::constant(std::to_string(pick(rng, 1, n_const)));
            rule.body.push_back(neg(std::move(a)));
        } else {
            have_pos = true;
            for (const Term& t : a.args)
                if (t.is_var()) posvars.insert(t.text);
            rule.body.push_back(pos(std::move(a)));
        }
    }
    Atom head{"h", {}};
    const int head_arity = pick(rng, 1, 2);
    for (int p = 0; p < head_arity; ++p) {
        if (!posvars.empty() && pick(rng, 0, 3) != 0) {
            auto it = posvars.begin();
            std::advance(it, pick(rng, 0, static_cast<int>(posvars.size()) - 1));
            head.args.push_back(Term::var(*it));
        } else {
            head.args.push_back(Term::constant(std::to_string(pick(rng, 1, n_const))));
        }
    }
    rule.head.push_back(std::move(head));

    FactStore facts;
    const int n_facts = pick(rng, 0, 8);
    for (int i = 0; i < n_facts; ++i) {
        const int pi = pick(rng, 0, 2);
        Atom a{preds[pi], {}};
        for (int p = 0; p < arities[pi]; ++p)
            a.args.push_back(Term::constant(std::to_string(pick(rng, 1, n_const))));
        facts.insert_atom(a);
    }
    return {std::move(rule), std::move(facts)};
}

}  // namespace testsupport
