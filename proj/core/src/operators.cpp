#include "dedb/operators.hpp"

#include <algorithm>

#include "dedb/errors.hpp"
#include "dedb/ground.hpp"

namespace dedb {

namespace {

void require_definite(const std::vector<Rule>& rules) {
    for (const Rule& r : rules)
        if (!r.definite()) throw Error("definite evaluation given a disjunctive rule: " + to_string(r));
}

void require_definite(const FactStore& store) {
    if (store.has_disjunctions()) throw Error("definite evaluation given a disjunctive store");
}

// Atoms a synchronous step would add: negative literals are tested against
// neg_source (alternating evaluation points it at a separate store).
std::vector<Atom> step_new_atoms(const std::vector<Rule>& rules, const FactStore& store,
                                 const FactStore& neg_source,
                                 const std::unordered_set<Atom, AtomHash>* delta) {
    std::vector<Atom> out;
    std::unordered_set<Atom, AtomHash> seen;
    for (const Rule& r : rules) {
        for_each_body_match(r, store, MatchMode::Definite, delta, [&](const BodyMatch& m) {
            for (const Literal& l : r.body) {
                if (l.positive) continue;
                if (neg_source.contains_definite(substitute(l.atom, m.subst))) return;
            }
            Atom h = substitute(r.head[0], m.subst);
            if (!store.contains_definite(h) && seen.insert(h).second) out.push_back(std::move(h));
        });
    }
    return out;
}

// Saturates `rules` over `store` in place with synchronous rounds.
// Returns the number of rounds that added at least one atom.
std::size_t saturate(const std::vector<Rule>& rules, FactStore& store, const FactStore* neg_source,
                     const EvalOptions& opts) {
    std::size_t rounds = 0;
    std::unordered_set<Atom, AtomHash> delta;
    bool first = true;
    for (;;) {
        std::vector<Atom> fresh = step_new_atoms(rules, store, neg_source ? *neg_source : store,
                                                 (first || !opts.semi_naive) ? nullptr : &delta);
        first = false;
        if (fresh.empty()) return rounds;
        ++rounds;
        delta.clear();
        for (Atom& a : fresh) {
            delta.insert(a);
            store.insert_atom(a);
        }
    }
}

EvalStats stats_against(const FactStore& result, const std::unordered_set<Atom, AtomHash>& seed,
                        std::size_t iterations) {
    EvalStats st;
    st.iterations = iterations;
    for (const Atom& a : result.definite())
        if (!seed.count(a)) ++st.derived_by_pred[a.pred];
    return st;
}

std::unordered_set<Atom, AtomHash> atom_set(const FactStore& s) {
    return s.definite();
}

// Predicates occurring positively in some body of the layer; used to decide
// whether new facts can possibly grow the layer again.
std::unordered_set<std::string> positive_body_preds(const std::vector<Rule>& layer) {
    std::unordered_set<std::string> out;
    for (const Rule& r : layer)
        for (const Literal& l : r.body)
            if (l.positive) out.insert(l.atom.pred);
    return out;
}

}  // namespace

FactStore immediate_consequence(const std::vector<Rule>& rules, const FactStore& store) {
    require_definite(rules);
    require_definite(store);
    FactStore result = store;
    for (const Atom& a : step_new_atoms(rules, store, store, nullptr)) result.insert_atom(a);
    return result;
}

FactStore lfp(const std::function<FactStore(const FactStore&)>& op, FactStore seed) {
    for (;;) {
        FactStore next = op(seed);
        if (next == seed) return seed;
        seed = std::move(next);
    }
}

ModelResult stratified_fixpoint(const std::vector<Rule>& rules, const FactStore& seed_store,
                                const EvalOptions& opts) {
    require_definite(rules);
    require_definite(seed_store);
    Stratification strat = require_stratification(rules);

    FactStore store = seed_store;
    auto seed = atom_set(store);
    std::size_t iterations = 0;
    for (const std::vector<Rule>& layer : strat.partition.layers)
        iterations += saturate(layer, store, nullptr, opts);

    // Completed layers must not be able to fire again.
    for (const std::vector<Rule>& layer : strat.partition.layers)
        if (!step_new_atoms(layer, store, store, nullptr).empty())
            throw InternalError("stratified evaluation re-fired a completed layer");

    EvalStats st = stats_against(store, seed, iterations);
    return {std::move(store), std::move(st)};
}

ModelResult iterated_fixpoint_model(const Database& db, const EvalOptions& opts) {
    return stratified_fixpoint(db.rules, FactStore::of_atoms(db.facts), opts);
}

FactStore soft_consequence(const Partition& partition, const FactStore& store) {
    for (const std::vector<Rule>& layer : partition.layers) {
        require_definite(layer);
        std::vector<Atom> fresh = step_new_atoms(layer, store, store, nullptr);
        if (!fresh.empty()) {
            FactStore next = store;
            for (const Atom& a : fresh) next.insert_atom(a);
            return next;
        }
    }
    return store;
}

ModelResult soft_fixpoint(const Partition& partition, const FactStore& seed_store,
                          const EvalOptions& opts) {
    for (const std::vector<Rule>& layer : partition.layers) require_definite(layer);
    FactStore store = seed_store;
    auto seed = atom_set(store);

    const std::size_t n = partition.layers.size();
    std::vector<std::unordered_set<std::string>> body_preds(n);
    for (std::size_t i = 0; i < n; ++i) body_preds[i] = positive_body_preds(partition.layers[i]);

    // Per layer: not yet applied, or atoms arrived since its last application.
    std::vector<char> first(n, 1);
    std::vector<std::unordered_set<Atom, AtomHash>> pending(n);
    std::size_t iterations = 0;

    for (;;) {
        std::size_t i = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (first[j] || !pending[j].empty()) { i = j; break; }
        }
        if (i == n) break;

        const std::unordered_set<Atom, AtomHash>* delta =
            (first[i] || !opts.semi_naive) ? nullptr : &pending[i];
        std::vector<Atom> fresh = step_new_atoms(partition.layers[i], store, store, delta);
        first[i] = 0;
        pending[i].clear();
        if (fresh.empty()) continue;
        ++iterations;
        for (const Atom& a : fresh) {
            store.insert_atom(a);
            for (std::size_t j = 0; j < n; ++j)
                if (body_preds[j].count(a.pred)) pending[j].insert(a);
        }
    }
    EvalStats st = stats_against(store, seed, iterations);
    return {std::move(store), std::move(st)};
}

ModelResult alternating_fixpoint_model(const Database& db, const EvalOptions& opts) {
    require_definite(db.rules);
    const FactStore base = FactStore::of_atoms(db.facts);
    auto seed = atom_set(base);

    auto eventual = [&](const FactStore& i_minus) {
        FactStore store = base;
        saturate(db.rules, store, &i_minus, opts);
        return store;
    };

    FactStore known;  // underestimate of true atoms
    std::size_t iterations = 0;
    for (;;) {
        ++iterations;
        FactStore over = eventual(known);
        FactStore next = eventual(over);
        if (next == known) break;
        known = std::move(next);
    }
    return {known, stats_against(known, seed, iterations)};
}

namespace {

// One synchronous application of the disjunctive operator. min_models of the
// input store is computed lazily, only when a firing rule carries negation
// over a store with disjunctions.
FactStore state_step(const std::vector<Rule>& rules, const FactStore& store,
                     const EvalOptions& opts) {
    FactStore result = store;
    std::vector<std::vector<Atom>> models;
    bool models_ready = false;
    auto model_set = [&]() -> const std::vector<std::vector<Atom>>& {
        if (!models_ready) {
            models = min_models(store, opts.min_models_cap);
            models_ready = true;
        }
        return models;
    };

    for (const Rule& r : rules) {
        std::vector<const Literal*> negatives;
        for (const Literal& l : r.body)
            if (!l.positive) negatives.push_back(&l);

        for_each_body_match(r, store, MatchMode::AnyOccurrence, nullptr, [&](const BodyMatch& m) {
            for (const Literal* l : negatives)
                if (store.contains_definite(substitute(l->atom, m.subst))) return;

            std::vector<Atom> head_atoms;
            for (const Atom& h : r.head) head_atoms.push_back(substitute(h, m.subst));

            std::vector<Atom> conclusion = head_atoms;

            // Residues f_i \ L_i of positive literals matched inside disjunctions.
            std::size_t pos_idx = 0;
            std::vector<Atom> matched_positives;
            for (const Literal& l : r.body) {
                if (!l.positive) continue;
                Atom ground = substitute(l.atom, m.subst);
                matched_positives.push_back(ground);
                int fid = m.fact_ids[pos_idx++];
                if (fid >= 0) {
                    for (const Atom& a : store.fact(fid).atoms)
                        if (!(a == ground)) conclusion.push_back(a);
                }
            }

            // Context disjunction: negated atoms still possible in some minimal
            // model that supports the positive body and none of the heads.
            if (!negatives.empty() && store.has_disjunctions()) {
                for (const Literal* l : negatives) {
                    Atom negated = substitute(l->atom, m.subst);
                    for (const std::vector<Atom>& model : model_set()) {
                        auto in_model = [&](const Atom& a) {
                            return std::binary_search(model.begin(), model.end(), a);
                        };
                        if (!in_model(negated)) continue;
                        bool positives_hold = std::all_of(matched_positives.begin(),
                                                          matched_positives.end(), in_model);
                        if (!positives_hold) continue;
                        bool head_absent = std::none_of(head_atoms.begin(), head_atoms.end(), in_model);
                        if (!head_absent) continue;
                        conclusion.push_back(negated);
                        break;
                    }
                }
            }

            result.insert_fact(DisjunctiveFact(std::move(conclusion)));
        });
    }
    return result;
}

}  // namespace

FactStore state_consequence(const std::vector<Rule>& rules, const FactStore& store,
                            const EvalOptions& opts) {
    return state_step(rules, store, opts);
}

StateModel fixpoint_state_model(const Database& db, const EvalOptions& opts) {
    Stratification strat = require_stratification(db.rules);

    FactStore store = FactStore::of_atoms(db.facts);
    auto seed = atom_set(store);
    std::size_t iterations = 0;
    for (const std::vector<Rule>& layer : strat.partition.layers) {
        for (;;) {
            FactStore next = state_step(layer, store, opts);
            if (next == store) break;
            store = std::move(next);
            ++iterations;
        }
    }

    StateModel out;
    out.stats = stats_against(store, seed, iterations);
    out.models = min_models(store, opts.min_models_cap);
    if (!db.constraints.empty()) {
        std::vector<std::vector<Atom>> kept;
        for (std::vector<Atom>& m : out.models) {
            bool ok = std::all_of(db.constraints.begin(), db.constraints.end(), [&](const Atom& c) {
                return std::binary_search(m.begin(), m.end(), c);
            });
            if (ok) kept.push_back(std::move(m));
        }
        if (kept.empty())
            throw InconsistencyError("no model state satisfies the integrity constraints");
        out.models = std::move(kept);
    }
    out.state = std::move(store);
    return out;
}

FactStore general_soft_consequence(const Partition& partition, const FactStore& store,
                                   const EvalOptions& opts) {
    for (const std::vector<Rule>& layer : partition.layers) {
        FactStore next = state_step(layer, store, opts);
        if (!(next == store)) return next;
    }
    return store;
}

ModelResult general_soft_fixpoint(const Partition& partition, const FactStore& seed_store,
                                  const EvalOptions& opts) {
    FactStore store = seed_store;
    auto seed = atom_set(store);
    const std::size_t n = partition.layers.size();

    // Layers are re-checked from the bottom whenever anything changed: the
    // context condition can react to growth anywhere in the store.
    std::vector<char> dirty(n, 1);
    std::size_t iterations = 0;
    for (;;) {
        std::size_t i = n;
        for (std::size_t j = 0; j < n; ++j)
            if (dirty[j]) { i = j; break; }
        if (i == n) break;
        FactStore next = state_step(partition.layers[i], store, opts);
        if (next == store) {
            dirty[i] = 0;
            continue;
        }
        store = std::move(next);
        ++iterations;
        std::fill(dirty.begin(), dirty.end(), 1);
    }
    EvalStats st = stats_against(store, seed, iterations);
    return {std::move(store), std::move(st)};
}

}  // namespace dedb
