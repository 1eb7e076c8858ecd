#include "dedb/propagate.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "dedb/errors.hpp"
#include "dedb/names.hpp"

namespace dedb {

namespace {

Literal rename_new(const Literal& l) {
    return {l.positive, {names::new_state(l.atom.pred), l.atom.args}};
}

Literal rename_old(const Literal& l, const std::unordered_set<std::string>& derived) {
    if (!derived.count(l.atom.pred)) return l;  // old base state is the base relation itself
    return {l.positive, {names::old_state(l.atom.pred), l.atom.args}};
}

}  // namespace

void DeltaSet::canonicalize() {
    std::sort(insertions.begin(), insertions.end());
    insertions.erase(std::unique(insertions.begin(), insertions.end()), insertions.end());
    std::sort(deletions.begin(), deletions.end());
    deletions.erase(std::unique(deletions.begin(), deletions.end()), deletions.end());
}

std::vector<Rule> derive_propagation_rules(const std::vector<Rule>& rules) {
    std::unordered_set<std::string> derived = derived_predicates(rules);
    std::vector<Rule> out;
    for (const Rule& r : rules) {
        const Atom& head = r.head[0];
        for (std::size_t i = 0; i < r.body.size(); ++i) {
            const Literal& dyn = r.body[i];
            for (bool head_insert : {true, false}) {
                // An insertion into a positive literal (or a deletion under a
                // negative one) can create derivations; the dual destroys them.
                bool delta_insert = dyn.positive ? head_insert : !head_insert;
                Rule up;
                up.head.push_back({names::delta(head.pred, head_insert), head.args});
                up.body.push_back(pos({names::delta(dyn.atom.pred, delta_insert), dyn.atom.args}));
                for (std::size_t j = 0; j < r.body.size(); ++j) {
                    if (j == i) continue;
                    up.body.push_back(head_insert ? rename_new(r.body[j])
                                                  : rename_old(r.body[j], derived));
                }
                up.body.push_back(neg({head_insert ? names::old_state(head.pred)
                                                   : names::new_state(head.pred),
                                       head.args}));
                out.push_back(std::move(up));
            }
        }
    }
    return out;
}

std::vector<Rule> derive_transition_rules(const std::vector<Rule>& rules,
                                          const std::vector<std::string>& base_preds) {
    std::vector<Rule> out;

    std::unordered_map<std::string, std::size_t> arity;
    for (const Rule& r : rules)
        for (const Literal& l : r.body) arity.emplace(l.atom.pred, l.atom.arity());

    for (const std::string& b : base_preds) {
        auto it = arity.find(b);
        if (it == arity.end()) continue;  // never referenced by a rule
        std::vector<Term> vars;
        for (std::size_t i = 0; i < it->second; ++i) vars.push_back(Term::var("X" + std::to_string(i + 1)));
        Atom cur{b, vars};
        Atom next{names::new_state(b), vars};
        out.push_back({{next}, {pos(cur), neg({names::delta(b, false), vars})}});
        out.push_back({{next}, {pos({names::delta(b, true), vars})}});
    }

    for (const Rule& r : rules) {
        Rule renamed;
        renamed.head.push_back({names::new_state(r.head[0].pred), r.head[0].args});
        for (const Literal& l : r.body) renamed.body.push_back(rename_new(l));
        out.push_back(std::move(renamed));
    }
    return out;
}

std::vector<Rule> derive_old_state_rules(const std::vector<Rule>& rules) {
    std::unordered_set<std::string> derived = derived_predicates(rules);
    std::vector<Rule> out;
    for (const Rule& r : rules) {
        Rule renamed;
        renamed.head.push_back({names::old_state(r.head[0].pred), r.head[0].args});
        for (const Literal& l : r.body) renamed.body.push_back(rename_old(l, derived));
        out.push_back(std::move(renamed));
    }
    return out;
}

MagicUpdateProgram magic_updates_rewrite(const std::vector<Rule>& rules,
                                         const std::vector<Rule>& up_rules,
                                         const std::vector<Rule>& transition_rules) {
    std::vector<Rule> old_rules = derive_old_state_rules(rules);

    std::vector<Rule> full = old_rules;
    full.insert(full.end(), transition_rules.begin(), transition_rules.end());
    full.insert(full.end(), up_rules.begin(), up_rules.end());
    Stratification strat = require_stratification(full);

    std::unordered_map<std::string, std::vector<const Rule*>> defs;
    for (const Rule& r : old_rules) defs[r.head[0].pred].push_back(&r);
    for (const Rule& r : transition_rules) defs[r.head[0].pred].push_back(&r);

    MagicUpdateProgram out;
    std::deque<std::pair<std::string, std::string>> queue;
    std::unordered_set<std::string> enqueued;

    auto stratum_of = [&](const std::string& pred) {
        auto it = strat.stratum.find(pred);
        return it == strat.stratum.end() ? 0 : it->second;
    };
    auto request = [&](const std::string& pred, const std::string& ad) {
        std::string name = names::adorned(pred, ad);
        out.provenance.display[name] = pred;
        out.provenance.display[names::magic(name)] = names::magic(name);
        if (enqueued.insert(name).second) queue.emplace_back(pred, ad);
        return name;
    };
    auto emit = [&](Rule r, int layer) {
        for (std::size_t i = 0; i < out.rules.size(); ++i)
            if (out.rules[i] == r && out.provenance.rule_layer[i] == layer) return;
        out.rules.push_back(std::move(r));
        out.provenance.rule_layer.push_back(layer);
    };

    // Rewrites one body: literals over definable state relations are adorned
    // (spawning their specialization) and get a subquery rule whose body is
    // the already-rewritten prefix. `guard` is prepended to subquery bodies.
    auto rewrite_body = [&](const std::vector<Literal>& body, const std::vector<Literal>& guard,
                            std::unordered_set<std::string> bound) {
        std::vector<Literal> rewritten;
        std::vector<Literal> remaining = body;
        while (!remaining.empty()) {
            auto all_bound = [&](const Literal& l) {
                return std::all_of(l.atom.args.begin(), l.atom.args.end(), [&](const Term& t) {
                    return !t.is_var() || bound.count(t.text);
                });
            };
            std::size_t pick = remaining.size();
            for (std::size_t i = 0; i < remaining.size(); ++i)
                if (remaining[i].positive || all_bound(remaining[i])) { pick = i; break; }
            if (pick == remaining.size())
                throw InternalError("cannot bind a negative literal during update rewriting");
            Literal lit = remaining[pick];
            remaining.erase(remaining.begin() + static_cast<long>(pick));

            if (defs.count(lit.atom.pred)) {
                std::string ad;
                for (const Term& t : lit.atom.args)
                    ad += (!t.is_var() || bound.count(t.text)) ? 'b' : 'f';
                std::string name = request(lit.atom.pred, ad);

                Rule subquery;
                std::vector<Term> bargs;
                for (std::size_t i = 0; i < lit.atom.args.size(); ++i)
                    if (ad[i] == 'b') bargs.push_back(lit.atom.args[i]);
                subquery.head.push_back({names::magic(name), std::move(bargs)});
                for (const Literal& g : guard) subquery.body.push_back(g);
                for (const Literal& p : rewritten) subquery.body.push_back(p);
                emit(std::move(subquery), stratum_of(lit.atom.pred));

                rewritten.push_back({lit.positive, {name, lit.atom.args}});
            } else {
                rewritten.push_back(lit);
            }
            if (lit.positive)
                for (const Term& t : lit.atom.args)
                    if (t.is_var()) bound.insert(t.text);
        }
        return rewritten;
    };

    // Propagation rules: the leading delta literal is the abstract query.
    for (const Rule& up : up_rules) {
        Rule rewritten;
        rewritten.head = up.head;
        std::unordered_set<std::string> bound;
        const Literal& delta = up.body.front();
        for (const Term& t : delta.atom.args)
            if (t.is_var()) bound.insert(t.text);
        rewritten.body.push_back(delta);
        std::vector<Literal> rest(up.body.begin() + 1, up.body.end());
        std::vector<Literal> prefix{delta};
        for (Literal& l : rewrite_body(rest, prefix, bound)) rewritten.body.push_back(std::move(l));
        emit(std::move(rewritten), stratum_of(up.head[0].pred));
        out.provenance.display[up.head[0].pred] = up.head[0].pred;
    }

    // Specialize the state relations that were requested.
    while (!queue.empty()) {
        auto [pred, ad] = queue.front();
        queue.pop_front();
        const std::string name = names::adorned(pred, ad);
        const int layer = stratum_of(pred);

        for (const Rule* src : defs.at(pred)) {
            const Atom& head = src->head[0];
            std::unordered_set<std::string> bound;
            std::vector<Term> bargs;
            for (std::size_t i = 0; i < head.args.size(); ++i) {
                if (ad[i] == 'b') {
                    bargs.push_back(head.args[i]);
                    if (head.args[i].is_var()) bound.insert(head.args[i].text);
                }
            }
            Atom magic_head{names::magic(name), std::move(bargs)};
            Rule specialized;
            specialized.head.push_back({name, head.args});
            specialized.body.push_back(pos(magic_head));
            std::vector<Literal> guard{pos(magic_head)};
            for (Literal& l : rewrite_body(src->body, guard, bound))
                specialized.body.push_back(std::move(l));
            emit(std::move(specialized), layer);
        }
    }

    return out;
}

namespace {

void check_effective(const Database& db, const DeltaSet& update) {
    std::unordered_set<std::string> derived = derived_predicates(db.rules);
    std::unordered_set<Atom, AtomHash> facts(db.facts.begin(), db.facts.end());
    for (const Atom& a : update.insertions) {
        if (!a.ground()) throw RequestError("update atom must be ground: " + to_string(a));
        if (derived.count(a.pred))
            throw RequestError("cannot update derived predicate " + a.pred + " directly");
        if (facts.count(a))
            throw RequestError("ineffective insertion: " + to_string(a) + " already holds");
    }
    for (const Atom& a : update.deletions) {
        if (!a.ground()) throw RequestError("update atom must be ground: " + to_string(a));
        if (derived.count(a.pred))
            throw RequestError("cannot update derived predicate " + a.pred + " directly");
        if (!facts.count(a))
            throw RequestError("ineffective deletion: " + to_string(a) + " does not hold");
    }
    for (const Atom& a : update.insertions)
        for (const Atom& d : update.deletions)
            if (a == d) throw RequestError("update both inserts and deletes " + to_string(a));
}

}  // namespace

PropagationResult propagate_update(const Database& db, const DeltaSet& update,
                                   PropagationMode mode, const EvalOptions& opts) {
    check_effective(db, update);

    std::unordered_set<std::string> derived = derived_predicates(db.rules);
    std::vector<std::string> base;
    for (const std::string& p : base_predicates(db)) base.push_back(p);
    std::sort(base.begin(), base.end());

    std::vector<Rule> up = derive_propagation_rules(db.rules);
    std::vector<Rule> trans = derive_transition_rules(db.rules, base);
    std::vector<Rule> old_rules = derive_old_state_rules(db.rules);

    FactStore seed = FactStore::of_atoms(db.facts);
    for (const Atom& a : update.insertions)
        seed.insert_atom({names::delta(a.pred, true), a.args});
    for (const Atom& a : update.deletions)
        seed.insert_atom({names::delta(a.pred, false), a.args});

    auto user_arity = predicate_arities(db);
    std::unordered_set<std::string> user_preds;
    for (const auto& [p, a] : user_arity) user_preds.insert(p);

    ModelResult model;
    std::unordered_map<std::string, std::string> display;
    if (mode == PropagationMode::Naive) {
        std::vector<Rule> all = old_rules;
        all.insert(all.end(), trans.begin(), trans.end());
        all.insert(all.end(), up.begin(), up.end());
        std::vector<std::string> generated;
        for (const Rule& r : all) generated.push_back(r.head[0].pred);
        ensure_fresh_predicates(generated, user_preds);
        model = stratified_fixpoint(all, seed, opts);
    } else {
        MagicUpdateProgram mu = magic_updates_rewrite(db.rules, up, trans);
        std::vector<std::string> generated;
        for (const Rule& r : mu.rules) generated.push_back(r.head[0].pred);
        ensure_fresh_predicates(generated, user_preds);
        Partition partition = soft_partition(mu.rules, mu.provenance);
        model = soft_fixpoint(partition, seed, opts);
        display = std::move(mu.provenance.display);
    }

    PropagationResult out;
    out.applied = update;
    out.applied.canonicalize();
    for (const std::string& p : derived) {
        for (const Atom& a : model.positive.definite_of(names::delta(p, true)))
            out.induced.insertions.push_back({p, a.args});
        for (const Atom& a : model.positive.definite_of(names::delta(p, false)))
            out.induced.deletions.push_back({p, a.args});
    }
    out.induced.canonicalize();

    for (const auto& [pred, count] : model.stats.derived_by_pred) {
        auto it = display.find(pred);
        const std::string& label = it == display.end() ? pred : it->second;
        out.generated_by_relation[label] += count;
        out.generated_total += count;
    }

    std::unordered_set<std::string> state_labels;
    for (const auto& [p, n] : user_arity) state_labels.insert(names::new_state(p));
    for (const std::string& p : derived) state_labels.insert(names::old_state(p));
    std::set<std::pair<std::string, std::vector<Term>>> state_facts;
    std::size_t delta_count = 0;
    std::unordered_set<Atom, AtomHash> seeded = seed.definite();
    for (const Atom& a : model.positive.definite()) {
        if (seeded.count(a)) continue;
        auto it = display.find(a.pred);
        const std::string& label = it == display.end() ? a.pred : it->second;
        if (state_labels.count(label)) state_facts.insert({label, a.args});
        if (label.rfind("delta_plus_", 0) == 0 || label.rfind("delta_minus_", 0) == 0)
            ++delta_count;
    }
    out.state_and_delta_total = state_facts.size() + delta_count;
    return out;
}

}  // namespace dedb
