#include "dedb/magic.hpp"

#include <algorithm>
#include <deque>

#include "dedb/errors.hpp"
#include "dedb/names.hpp"

namespace dedb {

void ensure_fresh_predicates(const std::vector<std::string>& generated,
                             const std::unordered_set<std::string>& user_predicates) {
    for (const std::string& g : generated)
        if (user_predicates.count(g))
            throw LoadError("generated predicate name collides with user predicate: " + g);
}

std::string binding_pattern(const Atom& query) {
    std::string s;
    for (const Term& t : query.args) s += t.is_var() ? 'f' : 'b';
    return s;
}

namespace {

std::string literal_adornment(const Atom& a, const std::unordered_set<std::string>& bound) {
    std::string s;
    for (const Term& t : a.args) s += (!t.is_var() || bound.count(t.text)) ? 'b' : 'f';
    return s;
}

std::vector<Term> bound_terms(const std::vector<Term>& args, const std::string& adornment) {
    std::vector<Term> out;
    for (std::size_t i = 0; i < args.size(); ++i)
        if (adornment[i] == 'b') out.push_back(args[i]);
    return out;
}

}  // namespace

AdornedRuleSet adorn(const std::vector<Rule>& rules, const Atom& query) {
    for (const Rule& r : rules)
        if (!r.definite()) throw Error("magic rewriting requires definite rules: " + to_string(r));

    AdornedRuleSet out;
    std::unordered_set<std::string> derived = derived_predicates(rules);
    Stratification strat = require_stratification(rules);

    std::unordered_map<std::string, std::vector<const Rule*>> defs;
    for (const Rule& r : rules) defs[r.head[0].pred].push_back(&r);
    for (const Rule& r : rules)
        for (const Literal& l : r.body)
            if (!derived.count(l.atom.pred)) out.base_preds.insert(l.atom.pred);

    if (!derived.count(query.pred)) {
        out.query_pred.clear();
        return out;
    }

    std::deque<std::pair<std::string, std::string>> queue;  // (pred, adornment)
    std::unordered_set<std::string> enqueued;
    auto enqueue = [&](const std::string& pred, const std::string& ad) {
        std::string name = names::adorned(pred, ad);
        if (enqueued.insert(name).second) queue.emplace_back(pred, ad);
        return name;
    };

    out.query_pred = enqueue(query.pred, binding_pattern(query));

    while (!queue.empty()) {
        auto [pred, ad] = queue.front();
        queue.pop_front();
        const std::string name = names::adorned(pred, ad);
        out.predicates[name] = {pred, ad, strat.stratum.at(pred)};

        for (const Rule* src : defs[pred]) {
            const Atom& head = src->head[0];
            std::unordered_set<std::string> bound;
            for (std::size_t i = 0; i < head.args.size(); ++i)
                if (ad[i] == 'b' && head.args[i].is_var()) bound.insert(head.args[i].text);

            Rule adorned_rule;
            adorned_rule.head.push_back({name, head.args});

            std::vector<Literal> remaining = src->body;
            while (!remaining.empty()) {
                auto all_bound = [&](const Literal& l) {
                    return std::all_of(l.atom.args.begin(), l.atom.args.end(), [&](const Term& t) {
                        return !t.is_var() || bound.count(t.text);
                    });
                };
                std::size_t pick = remaining.size();
                for (std::size_t i = 0; i < remaining.size(); ++i) {
                    if (remaining[i].positive || all_bound(remaining[i])) { pick = i; break; }
                }
                if (pick == remaining.size())
                    throw InternalError("cannot order body to bind a negative literal in " +
                                        to_string(*src));
                Literal lit = remaining[pick];
                remaining.erase(remaining.begin() + static_cast<long>(pick));

                if (derived.count(lit.atom.pred)) {
                    std::string sub_ad = literal_adornment(lit.atom, bound);
                    if (!lit.positive && sub_ad.find('f') != std::string::npos)
                        throw InternalError("negative literal not fully bound in " + to_string(*src));
                    std::string sub_name = enqueue(lit.atom.pred, sub_ad);
                    adorned_rule.body.push_back({lit.positive, {sub_name, lit.atom.args}});
                } else {
                    adorned_rule.body.push_back(lit);
                }
                if (lit.positive)
                    for (const Term& t : lit.atom.args)
                        if (t.is_var()) bound.insert(t.text);
            }
            out.rules.push_back(std::move(adorned_rule));
            out.rule_stratum.push_back(strat.stratum.at(pred));
        }
    }
    return out;
}

MagicProgram magic_rewrite(const AdornedRuleSet& adorned, const Atom& query) {
    if (adorned.query_pred.empty())
        throw Error("magic rewrite of a base-predicate query");

    MagicProgram out;
    out.answer_pred = adorned.query_pred;

    auto emit = [&](Rule r, int layer) {
        out.rules.push_back(std::move(r));
        out.provenance.rule_layer.push_back(layer);
    };

    for (std::size_t i = 0; i < adorned.rules.size(); ++i) {
        const Rule& r = adorned.rules[i];
        const std::string& head_name = r.head[0].pred;
        const std::string& head_ad = adorned.predicates.at(head_name).adornment;

        Atom magic_head{names::magic(head_name), bound_terms(r.head[0].args, head_ad)};

        Rule guarded;
        guarded.head = r.head;
        guarded.body.push_back(pos(magic_head));
        for (const Literal& l : r.body) guarded.body.push_back(l);
        emit(std::move(guarded), adorned.rule_stratum[i]);

        for (std::size_t k = 0; k < r.body.size(); ++k) {
            const Literal& l = r.body[k];
            auto it = adorned.predicates.find(l.atom.pred);
            if (it == adorned.predicates.end()) continue;  // base literal
            Rule magic_rule;
            magic_rule.head.push_back(
                {names::magic(l.atom.pred), bound_terms(l.atom.args, it->second.adornment)});
            magic_rule.body.push_back(pos(magic_head));
            for (std::size_t j = 0; j < k; ++j) magic_rule.body.push_back(r.body[j]);
            emit(std::move(magic_rule), it->second.stratum);
        }
    }

    // m_q(vars) <- m_s_q(vars) plus the ground seed fact for the query.
    const AdornedPredicate& qp = adorned.predicates.at(adorned.query_pred);
    std::vector<Term> seed_vars;
    std::vector<Term> seed_consts;
    for (std::size_t i = 0; i < query.args.size(); ++i) {
        if (qp.adornment[i] == 'b') {
            seed_vars.push_back(Term::var("X" + std::to_string(i + 1)));
            seed_consts.push_back(query.args[i]);
        }
    }
    Rule seed_rule;
    seed_rule.head.push_back({names::magic(adorned.query_pred), seed_vars});
    seed_rule.body.push_back(pos({names::magic_seed(adorned.query_pred), seed_vars}));
    emit(std::move(seed_rule), qp.stratum);
    out.seed = {names::magic_seed(adorned.query_pred), seed_consts};

    for (const auto& [name, ap] : adorned.predicates) {
        out.provenance.display[name] = ap.origin;
        out.provenance.display[names::magic(name)] = names::magic(name);
    }
    out.provenance.display[out.seed.pred] = out.seed.pred;
    return out;
}

QueryAnswer answer_query(const Database& db, const Atom& query, QueryEngine engine,
                         const EvalOptions& opts) {
    auto arity = predicate_arities(db);
    auto it = arity.find(query.pred);
    if (it == arity.end()) throw RequestError("query over unknown predicate " + query.pred);
    if (it->second != query.arity()) throw RequestError("query arity mismatch for " + query.pred);

    QueryAnswer ans;
    std::unordered_set<std::string> derived = derived_predicates(db.rules);
    if (!derived.count(query.pred)) {
        for (const Atom& f : db.facts) {
            if (f.pred != query.pred) continue;
            bool match = true;
            for (std::size_t i = 0; i < query.args.size(); ++i)
                if (!query.args[i].is_var() && !(query.args[i] == f.args[i])) match = false;
            if (match) ans.witnesses.push_back(f);
        }
        std::sort(ans.witnesses.begin(), ans.witnesses.end());
        ans.derivable = !ans.witnesses.empty();
        return ans;
    }

    AdornedRuleSet adorned = adorn(db.rules, query);
    MagicProgram mp = magic_rewrite(adorned, query);

    std::unordered_set<std::string> user_preds;
    for (const auto& [p, a] : arity) user_preds.insert(p);
    std::vector<std::string> generated;
    for (const Rule& r : mp.rules) generated.push_back(r.head[0].pred);
    generated.push_back(mp.seed.pred);
    ensure_fresh_predicates(generated, user_preds);

    FactStore seed_store = FactStore::of_atoms(db.facts);
    seed_store.insert_atom(mp.seed);

    ModelResult model;
    if (engine == QueryEngine::Soft) {
        Partition partition = soft_partition(mp.rules, mp.provenance);
        model = soft_fixpoint(partition, seed_store, opts);
    } else {
        Database rewritten;
        rewritten.facts = seed_store.definite_sorted();
        rewritten.rules = mp.rules;
        model = alternating_fixpoint_model(rewritten, opts);
    }
    ans.stats = model.stats;

    for (const Atom& a : model.positive.definite_of(mp.answer_pred)) {
        // The answer relation also holds subquery results; keep the atoms
        // matching the query's bound positions.
        bool match = true;
        for (std::size_t i = 0; i < query.args.size(); ++i)
            if (!query.args[i].is_var() && !(query.args[i] == a.args[i])) match = false;
        if (match) ans.witnesses.push_back({query.pred, a.args});
    }
    std::sort(ans.witnesses.begin(), ans.witnesses.end());
    ans.witnesses.erase(std::unique(ans.witnesses.begin(), ans.witnesses.end()),
                        ans.witnesses.end());

    if (query.ground()) {
        ans.derivable = model.positive.contains_definite({mp.answer_pred, query.args});
    } else {
        ans.derivable = !ans.witnesses.empty();
    }
    return ans;
}

}  // namespace dedb
