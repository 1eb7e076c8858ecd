#include "dedb/ground.hpp"

#include <algorithm>

#include "dedb/errors.hpp"

namespace dedb {

namespace {

bool unify(const Atom& pattern, const Atom& ground, Subst& subst, std::size_t& mark) {
    mark = subst.size();
    if (pattern.pred != ground.pred || pattern.args.size() != ground.args.size()) return false;
    for (std::size_t i = 0; i < pattern.args.size(); ++i) {
        const Term& t = pattern.args[i];
        const std::string& v = ground.args[i].text;
        if (t.is_var()) {
            if (!bind(subst, t.text, v)) { subst.resize(mark); return false; }
        } else if (t.text != v) {
            subst.resize(mark);
            return false;
        }
    }
    return true;
}

struct Matcher {
    const FactStore& store;
    MatchMode mode;
    const std::unordered_set<Atom, AtomHash>* delta;
    const std::vector<const Atom*>* positives;
    const std::function<void(const BodyMatch&)>* fn;
    BodyMatch current;
    // Index of the positive literal pinned to the delta set, or -1 for none.
    int delta_pos = -1;
    // Literal evaluation order; the delta literal goes first so its bindings
    // drive the joins instead of full scans.
    std::vector<std::size_t> order;

    void prepare() {
        order.clear();
        if (delta_pos >= 0) order.push_back(static_cast<std::size_t>(delta_pos));
        for (std::size_t i = 0; i < positives->size(); ++i)
            if (static_cast<int>(i) != delta_pos) order.push_back(i);
        current.fact_ids.assign(positives->size(), -1);
    }

    void run(std::size_t step_idx) {
        if (step_idx == order.size()) {
            (*fn)(current);
            return;
        }
        const std::size_t i = order[step_idx];
        const Atom& lit = *(*positives)[i];
        if (static_cast<int>(i) == delta_pos) {
            for (const Atom& a : *delta) {
                if (a.pred != lit.pred) continue;
                step(step_idx, i, lit, a, -1);
            }
            return;
        }
        // Prefer probing the definite index through a bound argument.
        int bound_pos = -1;
        std::string bound_val;
        for (std::size_t p = 0; p < lit.args.size(); ++p) {
            const Term& t = lit.args[p];
            if (!t.is_var()) {
                bound_pos = static_cast<int>(p);
                bound_val = t.text;
                break;
            }
            if (const std::string* c = lookup(current.subst, t.text)) {
                bound_pos = static_cast<int>(p);
                bound_val = *c;
                break;
            }
        }
        const std::vector<Atom>& all = store.definite_of(lit.pred);
        if (bound_pos >= 0) {
            if (const std::vector<int>* rows =
                    store.definite_index(lit.pred, static_cast<std::size_t>(bound_pos), bound_val)) {
                for (int r : *rows) step(step_idx, i, lit, all[static_cast<std::size_t>(r)], -1);
            }
        } else {
            for (const Atom& a : all) step(step_idx, i, lit, a, -1);
        }
        if (mode == MatchMode::AnyOccurrence) {
            for (const FactStore::Occurrence& occ : store.occurrences_of(lit.pred)) {
                if (!store.fact_alive(occ.fact_id)) continue;
                step(step_idx, i, lit, occ.atom, occ.fact_id);
            }
        }
    }

    void step(std::size_t step_idx, std::size_t i, const Atom& lit, const Atom& candidate,
              int fact_id) {
        std::size_t mark = 0;
        if (!unify(lit, candidate, current.subst, mark)) return;
        current.fact_ids[i] = fact_id;
        run(step_idx + 1);
        current.fact_ids[i] = -1;
        current.subst.resize(mark);
    }
};

}  // namespace

void for_each_body_match(const Rule& rule, const FactStore& store, MatchMode mode,
                         const std::unordered_set<Atom, AtomHash>* delta,
                         const std::function<void(const BodyMatch&)>& fn) {
    std::vector<const Atom*> positives;
    for (const Literal& l : rule.body)
        if (l.positive) positives.push_back(&l.atom);

    Matcher m{store, mode, delta, &positives, &fn, {}, -1, {}};
    if (!delta) {
        m.prepare();
        m.run(0);
        return;
    }
    if (delta->empty()) return;
    for (std::size_t dp = 0; dp < positives.size(); ++dp) {
        m.delta_pos = static_cast<int>(dp);
        m.prepare();
        m.run(0);
    }
}

std::vector<Rule> ground_instances(const std::vector<Rule>& rules, const FactStore& store) {
    MatchMode mode = store.has_disjunctions() ? MatchMode::AnyOccurrence : MatchMode::Definite;
    std::vector<Rule> out;
    for (const Rule& r : rules) {
        for_each_body_match(r, store, mode, nullptr, [&](const BodyMatch& m) {
            Rule g;
            for (const Atom& h : r.head) g.head.push_back(substitute(h, m.subst));
            for (const Literal& l : r.body) g.body.push_back({l.positive, substitute(l.atom, m.subst)});
            for (const Atom& h : g.head)
                if (!h.ground()) throw InternalError("unsafe rule reached grounding: " + to_string(r));
            for (const Literal& l : g.body)
                if (!l.atom.ground()) throw InternalError("unsafe rule reached grounding: " + to_string(r));
            out.push_back(std::move(g));
        });
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace dedb
