#include "dedb/viewupdate.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "dedb/errors.hpp"
#include "dedb/ground.hpp"
#include "dedb/magic.hpp"
#include "dedb/names.hpp"
#include "dedb/propagate.hpp"

namespace dedb {

namespace {

bool is_fresh_constant(const std::string& c) {
    if (c.rfind("c_new_", 0) != 0) return false;
    return c.size() > 6 && std::all_of(c.begin() + 6, c.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
}

}  // namespace

void Realization::canonicalize() {
    std::sort(insertions.begin(), insertions.end());
    insertions.erase(std::unique(insertions.begin(), insertions.end()), insertions.end());
    std::sort(deletions.begin(), deletions.end());
    deletions.erase(std::unique(deletions.begin(), deletions.end()), deletions.end());

    // Fresh constants are renamed by first occurrence so realizations that
    // differ only in fresh-name choice compare equal.
    std::map<std::string, std::string> rename;
    auto visit = [&](const Atom& a) {
        for (const Term& t : a.args)
            if (!t.is_var() && is_fresh_constant(t.text) && !rename.count(t.text))
                rename[t.text] = names::fresh_constant(rename.size() + 1);
    };
    for (const Atom& a : insertions) visit(a);
    for (const Atom& a : deletions) visit(a);
    bool identity = true;
    for (const auto& [from, to] : rename)
        if (from != to) identity = false;
    if (identity) return;
    auto apply_rename = [&](Atom& a) {
        for (Term& t : a.args) {
            auto it = rename.find(t.text);
            if (it != rename.end()) t.text = it->second;
        }
    };
    for (Atom& a : insertions) apply_rename(a);
    for (Atom& a : deletions) apply_rename(a);
    std::sort(insertions.begin(), insertions.end());
    std::sort(deletions.begin(), deletions.end());
}

bool Realization::subset_of(const Realization& other) const {
    auto sub = [](const std::vector<Atom>& a, const std::vector<Atom>& b) {
        return std::includes(b.begin(), b.end(), a.begin(), a.end(),
                             [](const Atom& x, const Atom& y) { return x < y; });
    };
    return sub(insertions, other.insertions) && sub(deletions, other.deletions);
}

bool Realization::subset_modulo_fresh(const Realization& other) const {
    auto fresh_of = [](const Realization& r) {
        std::vector<std::string> out;
        auto scan = [&](const std::vector<Atom>& atoms) {
            for (const Atom& a : atoms)
                for (const Term& t : a.args)
                    if (is_fresh_constant(t.text) && !std::count(out.begin(), out.end(), t.text))
                        out.push_back(t.text);
        };
        scan(r.insertions);
        scan(r.deletions);
        return out;
    };
    std::vector<std::string> mine = fresh_of(*this);
    if (mine.empty()) return subset_of(other);
    std::vector<std::string> theirs = fresh_of(other);
    if (mine.size() > theirs.size()) return false;

    std::sort(theirs.begin(), theirs.end());
    do {  // try every injective assignment mine[i] -> theirs[i]
        std::map<std::string, std::string> ren;
        for (std::size_t i = 0; i < mine.size(); ++i) ren[mine[i]] = theirs[i];
        Realization renamed = *this;
        auto apply_rename = [&](std::vector<Atom>& atoms) {
            for (Atom& a : atoms)
                for (Term& t : a.args) {
                    auto it = ren.find(t.text);
                    if (it != ren.end()) t.text = it->second;
                }
        };
        apply_rename(renamed.insertions);
        apply_rename(renamed.deletions);
        std::sort(renamed.insertions.begin(), renamed.insertions.end());
        std::sort(renamed.deletions.begin(), renamed.deletions.end());
        if (renamed.subset_of(other)) return true;
    } while (std::next_permutation(theirs.begin(), theirs.end()));
    return false;
}

bool operator<(const Realization& a, const Realization& b) {
    if (a.insertions != b.insertions) {
        return std::lexicographical_compare(a.insertions.begin(), a.insertions.end(),
                                            b.insertions.begin(), b.insertions.end(),
                                            [](const Atom& x, const Atom& y) { return x < y; });
    }
    return std::lexicographical_compare(a.deletions.begin(), a.deletions.end(),
                                        b.deletions.begin(), b.deletions.end(),
                                        [](const Atom& x, const Atom& y) { return x < y; });
}

std::string to_string(const Realization& r) {
    std::string out;
    for (const Atom& a : r.insertions) out += (out.empty() ? "" : ", ") + ("insert " + to_string(a));
    for (const Atom& a : r.deletions) out += (out.empty() ? "" : ", ") + ("delete " + to_string(a));
    return out.empty() ? "(no change)" : out;
}

namespace {

// The request atom for a literal that must be made true (positive literal
// missing) or false (negative literal currently satisfied... dual).
Atom request_atom(const Literal& l, bool make_true) {
    bool insert = l.positive == make_true;
    return {names::vu(l.atom.pred, insert), l.atom.args};
}

struct BinderGroup {
    Atom src;                          // marker or request pattern to hang off
    std::string binder;                // choice predicate
    std::vector<std::string> unbound;  // variables fixed by the choice
};

// Alternatives over a predicate whose defining-rule heads cannot be aligned
// statically (repeated variables or constants); the solver grounds the
// disjunction per node, offering only the unifiable markers.
struct AltGroup {
    std::string pred;
    std::vector<Atom> markers;  // vu_alt patterns with the original head args
};

struct VuRuleSet {
    std::vector<Rule> analysis;    // the public VU rules (all safe)
    std::vector<Rule> companions;  // vu_true_* / vu_false_* bookkeeping
    std::vector<BinderGroup> binders;
    std::vector<AltGroup> alts;
};

bool linear_head(const Atom& head) {
    std::set<std::string> seen;
    for (const Term& t : head.args)
        if (!t.is_var() || !seen.insert(t.text).second) return false;
    return true;
}

// Renames src so its head variables become `canon`, keeping the remaining
// variables distinct.
Rule align_head(const Rule& src, const std::vector<Term>& canon, std::size_t rule_index) {
    std::map<std::string, std::string> ren;
    std::set<std::string> taken;
    for (const Term& t : canon) taken.insert(t.text);
    for (std::size_t i = 0; i < src.head[0].args.size(); ++i)
        ren[src.head[0].args[i].text] = canon[i].text;
    auto map_term = [&](const Term& t) {
        if (!t.is_var()) return t;
        auto it = ren.find(t.text);
        if (it != ren.end()) return Term::var(it->second);
        std::string fresh = t.text;
        while (taken.count(fresh)) fresh += "_" + std::to_string(rule_index + 1);
        ren[t.text] = fresh;
        taken.insert(fresh);
        return Term::var(fresh);
    };
    Rule out;
    for (const Atom& h : src.head) {
        Atom a{h.pred, {}};
        for (const Term& t : h.args) a.args.push_back(map_term(t));
        out.head.push_back(std::move(a));
    }
    for (const Literal& l : src.body) {
        Atom a{l.atom.pred, {}};
        for (const Term& t : l.atom.args) a.args.push_back(map_term(t));
        out.body.push_back({l.positive, std::move(a)});
    }
    return out;
}

VuRuleSet build_vu_rules(const std::vector<Rule>& rules) {
    VuRuleSet out;
    std::map<std::string, std::vector<const Rule*>> defs;
    for (const Rule& r : rules) defs[r.head[0].pred].push_back(&r);

    // Request flow: analyzing a request on h spawns requests on its rules'
    // body predicates. An alternative may only collapse to the bare literal
    // request if that literal can never re-request the head predicate, which
    // would let the seed swallow the choice disjunction.
    std::map<std::string, std::set<std::string>> flows_to;
    {
        bool changed = true;
        for (const Rule& r : rules)
            for (const Literal& l : r.body) flows_to[r.head[0].pred].insert(l.atom.pred);
        while (changed) {
            changed = false;
            for (auto& [h, succ] : flows_to) {
                std::set<std::string> grow = succ;
                for (const std::string& q : succ) {
                    auto it = flows_to.find(q);
                    if (it != flows_to.end()) grow.insert(it->second.begin(), it->second.end());
                }
                if (grow.size() != succ.size()) {
                    succ = std::move(grow);
                    changed = true;
                }
            }
        }
    }
    auto may_rerequest = [&](const std::string& from, const std::string& head) {
        if (from == head) return true;
        auto it = flows_to.find(from);
        return it != flows_to.end() && it->second.count(head) > 0;
    };

    for (const auto& [pred, prules] : defs) {
        const bool multi = prules.size() > 1;
        const bool aligned = std::all_of(prules.begin(), prules.end(), [](const Rule* r) {
            return linear_head(r->head[0]);
        });
        std::vector<Term> canon = prules[0]->head[0].args;

        // Insertion requests: branch over the defining rules, then request the
        // body literals that do not currently hold.
        std::vector<Atom> alternatives;
        AltGroup alt_group{pred, {}};
        for (std::size_t ri = 0; ri < prules.size(); ++ri) {
            Rule src = (multi && aligned && ri > 0) ? align_head(*prules[ri], canon, ri)
                                                    : *prules[ri];
            const Atom& head = src.head[0];

            std::set<std::string> head_vars;
            for (const Term& t : head.args)
                if (t.is_var()) head_vars.insert(t.text);
            std::vector<std::string> unbound;
            {
                std::set<std::string> seen;
                for (const Literal& l : src.body)
                    for (const Term& t : l.atom.args)
                        if (t.is_var() && !head_vars.count(t.text) && seen.insert(t.text).second)
                            unbound.push_back(t.text);
            }

            Atom src_atom;  // the atom the rule's subrequests hang off
            if (!multi) {
                src_atom = {names::vu(pred, true), head.args};
            } else if (aligned && src.body.size() == 1 && unbound.empty() &&
                       !may_rerequest(src.body[0].atom.pred, pred)) {
                // The alternative is the single literal's request itself.
                alternatives.push_back(request_atom(src.body[0], true));
                continue;
            } else {
                src_atom = {names::vu_alt(pred, ri), head.args};
                if (aligned) alternatives.push_back(src_atom);
                else alt_group.markers.push_back(src_atom);
            }

            Atom hook = src_atom;
            if (!unbound.empty()) {
                // Route the rule group through a binding-choice predicate;
                // the solver grounds its alternatives per node.
                BinderGroup g;
                g.src = src_atom;
                g.binder = names::vu_bind(pred, ri);
                g.unbound = unbound;
                hook = Atom{g.binder, src_atom.args};
                for (const std::string& v : unbound) hook.args.push_back(Term::var(v));
                out.binders.push_back(std::move(g));
            }

            for (const Literal& l : src.body) {
                Rule sub;
                sub.head.push_back(request_atom(l, true));
                sub.body.push_back(pos(hook));
                sub.body.push_back({!l.positive, l.atom});  // request only when not satisfied
                out.analysis.push_back(std::move(sub));

                Rule keep;
                keep.head.push_back({names::wants(l.atom.pred, l.positive), l.atom.args});
                keep.body.push_back(pos(hook));
                keep.body.push_back(l);  // literal already holds: the path relies on it
                out.companions.push_back(std::move(keep));
            }
        }
        if (multi && aligned) {
            Rule choice;
            choice.head = std::move(alternatives);
            choice.body.push_back(pos({names::vu(pred, true), canon}));
            out.analysis.push_back(std::move(choice));
        } else if (multi) {
            out.alts.push_back(std::move(alt_group));
        }

        // Deletion requests: every live derivation must be broken by flipping
        // one of its body literals.
        for (const Rule* srcp : prules) {
            const Rule& src = *srcp;
            Rule breaking;
            for (const Literal& l : src.body) breaking.head.push_back(request_atom(l, false));
            breaking.body.push_back(pos({names::vu(pred, false), src.head[0].args}));
            for (const Literal& l : src.body) breaking.body.push_back(l);
            out.analysis.push_back(std::move(breaking));
        }
    }
    return out;
}

}  // namespace

std::vector<Rule> derive_vu_rules(const std::vector<Rule>& rules) {
    return build_vu_rules(rules).analysis;
}

std::vector<Rule> derive_vu_transition_rules(const std::vector<Atom>& constraints,
                                             const std::vector<Rule>& rules) {
    std::vector<Rule> out;
    for (const Atom& ic : constraints) {
        Rule r;
        r.head.push_back({names::vu(ic.pred, true), ic.args});
        r.body.push_back(pos({names::delta(ic.pred, false), ic.args}));
        out.push_back(std::move(r));
    }

    // Side-effect repair: re-request atoms the path needs true (false) when
    // propagation deletes (inserts) them.
    std::map<std::string, std::size_t> arity;
    for (const Rule& r : rules) {
        for (const Atom& h : r.head) arity.emplace(h.pred, h.arity());
        for (const Literal& l : r.body) arity.emplace(l.atom.pred, l.atom.arity());
    }
    for (const auto& [pred, n] : arity) {
        std::vector<Term> vars;
        for (std::size_t i = 0; i < n; ++i) vars.push_back(Term::var("X" + std::to_string(i + 1)));
        Rule up;
        up.head.push_back({names::vu(pred, true), vars});
        up.body.push_back(pos({names::wants(pred, true), vars}));
        up.body.push_back(pos({names::delta(pred, false), vars}));
        out.push_back(std::move(up));
        Rule down;
        down.head.push_back({names::vu(pred, false), vars});
        down.body.push_back(pos({names::wants(pred, false), vars}));
        down.body.push_back(pos({names::delta(pred, true), vars}));
        out.push_back(std::move(down));
    }
    return out;
}

namespace {

struct SignedAtom {
    bool truth;  // wanted true or wanted false
    Atom atom;
    bool operator<(const SignedAtom& o) const {
        if (truth != o.truth) return truth < o.truth;
        return atom < o.atom;
    }
    bool operator==(const SignedAtom&) const = default;
};

struct Node {
    std::set<Atom> state;         // current base facts of this path
    std::vector<Atom> pending;    // vu_* request atoms to analyze next
    std::set<SignedAtom> wants;   // atoms the path requires true/false
    Realization updates;          // accumulated diff against the original facts
    std::string label;
    int fresh_next = 1;
};

struct Solver {
    const Database& db;
    const SolveOptions& opts;
    std::unordered_set<std::string> derived;
    std::map<std::string, std::size_t> arity;

    VuRuleSet vu;
    std::vector<Rule> bottomup_rules;
    RewriteProvenance bottomup_prov;

    std::vector<std::string> log;

    static std::string pretty(const Atom& a) {
        // vu_plus_p(2) and friends are readable as-is.
        return to_string(a);
    }

    explicit Solver(const Database& db_, const SolveOptions& opts_) : db(db_), opts(opts_) {
        derived = derived_predicates(db.rules);
        for (const Rule& r : db.rules) {
            for (const Atom& h : r.head) arity.emplace(h.pred, h.arity());
            for (const Literal& l : r.body) arity.emplace(l.atom.pred, l.atom.arity());
        }
        for (const Atom& f : db.facts) arity.emplace(f.pred, f.arity());

        vu = build_vu_rules(db.rules);

        std::vector<std::string> base;
        for (const std::string& b : base_predicates(db)) base.push_back(b);
        std::sort(base.begin(), base.end());
        std::vector<Rule> up = derive_propagation_rules(db.rules);
        std::vector<Rule> trans = derive_transition_rules(db.rules, base);
        MagicUpdateProgram mu = magic_updates_rewrite(db.rules, up, trans);
        bottomup_rules = std::move(mu.rules);
        bottomup_prov = std::move(mu.provenance);
        int top = 0;
        for (int l : bottomup_prov.rule_layer) top = std::max(top, l);
        for (Rule& r : derive_vu_transition_rules(db.constraints, db.rules)) {
            bottomup_rules.push_back(std::move(r));
            bottomup_prov.rule_layer.push_back(top + 1);
        }

        std::unordered_set<std::string> user_preds;
        for (const auto& [p, n] : arity) user_preds.insert(p);
        for (const std::string& p : user_preds) {
            for (const char* prefix : {"vu_plus_", "vu_minus_", "vu_true_", "vu_false_",
                                       "vu_alt_", "vu_bind_", "delta_plus_", "delta_minus_"})
                if (p.rfind(prefix, 0) == 0)
                    throw LoadError("predicate name " + p + " is reserved for view updating");
        }
        std::vector<std::string> generated;
        for (const Rule& r : vu.analysis)
            for (const Atom& h : r.head) generated.push_back(h.pred);
        for (const Rule& r : vu.companions) generated.push_back(r.head[0].pred);
        for (const Rule& r : bottomup_rules)
            for (const Atom& h : r.head) generated.push_back(h.pred);
        ensure_fresh_predicates(generated, user_preds);
    }

    std::vector<std::string> node_domain(const Node& n) const {
        std::set<std::string> dom;
        for (const Atom& a : n.state)
            for (const Term& t : a.args) dom.insert(t.text);
        for (const Atom& a : n.pending)
            for (const Term& t : a.args) dom.insert(t.text);
        for (const std::string& c : active_domain(db)) dom.insert(c);
        return {dom.begin(), dom.end()};
    }

    // Ground tuples over `domain` that unify with the argument pattern.
    static std::vector<std::vector<std::string>> unifying_tuples(
        const std::vector<Term>& pattern, const std::vector<std::string>& domain) {
        std::vector<std::vector<std::string>> tuples{{}};
        std::vector<std::map<std::string, std::string>> bindings{{}};
        for (const Term& t : pattern) {
            std::vector<std::vector<std::string>> next;
            std::vector<std::map<std::string, std::string>> next_b;
            for (std::size_t i = 0; i < tuples.size(); ++i) {
                if (!t.is_var()) {
                    auto t2 = tuples[i];
                    t2.push_back(t.text);
                    next.push_back(std::move(t2));
                    next_b.push_back(bindings[i]);
                    continue;
                }
                auto bound = bindings[i].find(t.text);
                if (bound != bindings[i].end()) {
                    auto t2 = tuples[i];
                    t2.push_back(bound->second);
                    next.push_back(std::move(t2));
                    next_b.push_back(bindings[i]);
                    continue;
                }
                for (const std::string& c : domain) {
                    auto t2 = tuples[i];
                    t2.push_back(c);
                    next.push_back(std::move(t2));
                    auto b2 = bindings[i];
                    b2[t.text] = c;
                    next_b.push_back(std::move(b2));
                }
            }
            tuples = std::move(next);
            bindings = std::move(next_b);
        }
        return tuples;
    }

    // Ground binding-choice rules for the node: each unbound variable of a
    // binder group ranges over the active domain plus one fresh constant, and
    // statically unalignable alternatives are offered where they unify.
    std::vector<Rule> choice_rules(Node& n) const {
        std::vector<Rule> out;
        std::vector<std::string> domain = node_domain(n);

        for (const BinderGroup& g : vu.binders) {
            std::map<std::string, std::string> fresh;
            for (const std::string& v : g.unbound) {
                std::string c;
                do {
                    c = names::fresh_constant(static_cast<std::size_t>(n.fresh_next++));
                } while (std::count(domain.begin(), domain.end(), c));
                fresh[v] = c;
            }
            for (const auto& src_tuple : unifying_tuples(g.src.args, domain)) {
                Rule choice;
                std::vector<std::vector<std::string>> combos{{}};
                std::vector<std::string> fresh_so_far;
                for (const std::string& v : g.unbound) {
                    fresh_so_far.push_back(fresh.at(v));
                    std::vector<std::vector<std::string>> next;
                    for (const auto& c : combos) {
                        for (const std::string& d : domain) {
                            auto c2 = c;
                            c2.push_back(d);
                            next.push_back(std::move(c2));
                        }
                        // A fresh constant of this or an earlier position; two
                        // unknowns may need to coincide.
                        for (const std::string& f : fresh_so_far) {
                            auto c2 = c;
                            c2.push_back(f);
                            next.push_back(std::move(c2));
                        }
                    }
                    combos = std::move(next);
                }
                for (const auto& combo : combos) {
                    Atom head{g.binder, {}};
                    for (const std::string& c : src_tuple) head.args.push_back(Term::constant(c));
                    for (const std::string& c : combo) head.args.push_back(Term::constant(c));
                    choice.head.push_back(std::move(head));
                }
                Atom src{g.src.pred, {}};
                for (const std::string& c : src_tuple) src.args.push_back(Term::constant(c));
                choice.body.push_back(pos(src));
                out.push_back(std::move(choice));
            }
        }

        for (const AltGroup& g : vu.alts) {
            std::size_t arity_n = g.markers[0].args.size();
            std::vector<Term> any;
            for (std::size_t i = 0; i < arity_n; ++i) any.push_back(Term::var("A" + std::to_string(i)));
            for (const auto& tuple : unifying_tuples(any, domain)) {
                Rule choice;
                for (const Atom& marker : g.markers) {
                    // Offer the alternative only where its head pattern fits.
                    std::map<std::string, std::string> b;
                    bool fits = true;
                    for (std::size_t i = 0; i < arity_n; ++i) {
                        const Term& t = marker.args[i];
                        if (!t.is_var()) {
                            if (t.text != tuple[i]) fits = false;
                        } else {
                            auto [it, isnew] = b.emplace(t.text, tuple[i]);
                            if (!isnew && it->second != tuple[i]) fits = false;
                        }
                    }
                    if (!fits) continue;
                    Atom head{marker.pred, {}};
                    for (const std::string& c : tuple) head.args.push_back(Term::constant(c));
                    choice.head.push_back(std::move(head));
                }
                if (choice.head.empty()) continue;
                Atom src{names::vu(g.pred, true), {}};
                for (const std::string& c : tuple) src.args.push_back(Term::constant(c));
                choice.body.push_back(pos(src));
                out.push_back(std::move(choice));
            }
        }
        return out;
    }

    bool atom_holds(const std::set<Atom>& state, const Atom& a) const {
        if (!derived.count(a.pred)) return state.count(a) > 0;
        Database cur;
        cur.facts.assign(state.begin(), state.end());
        cur.rules = db.rules;
        return iterated_fixpoint_model(cur, opts.eval).positive.contains_definite(a);
    }

    struct Classified {
        std::vector<Atom> requests;      // vu_plus_* / vu_minus_* (raw names)
        std::set<SignedAtom> wants;      // from companions and request projection
    };

    Classified classify(const std::vector<Atom>& atoms) const {
        Classified c;
        auto strip = [](const std::string& s, const std::string& prefix) {
            return s.substr(prefix.size());
        };
        for (const Atom& a : atoms) {
            if (a.pred.rfind("vu_plus_", 0) == 0) {
                c.requests.push_back(a);
                c.wants.insert({true, {strip(a.pred, "vu_plus_"), a.args}});
            } else if (a.pred.rfind("vu_minus_", 0) == 0) {
                c.requests.push_back(a);
                c.wants.insert({false, {strip(a.pred, "vu_minus_"), a.args}});
            } else if (a.pred.rfind("vu_true_", 0) == 0) {
                c.wants.insert({true, {strip(a.pred, "vu_true_"), a.args}});
            } else if (a.pred.rfind("vu_false_", 0) == 0) {
                c.wants.insert({false, {strip(a.pred, "vu_false_"), a.args}});
            }
        }
        return c;
    }

    // Top-down phase: evaluate R + VU rules over the node state and pending
    // requests with the disjunctive engine, returning its minimal models.
    std::vector<std::vector<Atom>> analyze(Node& n) {
        std::vector<Rule> rules = db.rules;
        rules.insert(rules.end(), vu.analysis.begin(), vu.analysis.end());
        rules.insert(rules.end(), vu.companions.begin(), vu.companions.end());
        for (Rule& r : choice_rules(n)) rules.push_back(std::move(r));

        Stratification strat = require_stratification(rules);
        FactStore seed;
        for (const Atom& a : n.state) seed.insert_atom(a);
        for (const Atom& a : n.pending) seed.insert_atom(a);
        ModelResult res = general_soft_fixpoint(
            Partition{strat.partition.layers}, seed, opts.eval);
        return min_models(res.positive, opts.eval.min_models_cap);
    }

    // Bottom-up phase: propagate this round's base updates and fire the
    // constraint and repair rules. Returns the follow-up requests.
    struct Consequences {
        std::vector<Atom> new_requests;
        std::vector<Atom> violated_constraints;
    };

    Consequences consequences(const std::set<Atom>& pre_state, const DeltaSet& round_updates,
                              const std::set<SignedAtom>& wants) {
        Consequences out;
        if (round_updates.empty()) return out;
        FactStore seed;
        for (const Atom& a : pre_state) seed.insert_atom(a);
        for (const Atom& a : round_updates.insertions)
            seed.insert_atom({names::delta(a.pred, true), a.args});
        for (const Atom& a : round_updates.deletions)
            seed.insert_atom({names::delta(a.pred, false), a.args});
        for (const SignedAtom& w : wants)
            seed.insert_atom({names::wants(w.atom.pred, w.truth), w.atom.args});

        Partition partition = soft_partition(bottomup_rules, bottomup_prov);
        ModelResult res = soft_fixpoint(partition, seed, opts.eval);

        std::set<Atom> requests;
        for (const auto& [pred, n_] : arity) {
            for (const Atom& a : res.positive.definite_of(names::vu(pred, true)))
                requests.insert({names::vu(pred, true), a.args});
            for (const Atom& a : res.positive.definite_of(names::vu(pred, false)))
                requests.insert({names::vu(pred, false), a.args});
        }
        out.new_requests.assign(requests.begin(), requests.end());
        for (const Atom& ic : db.constraints)
            if (res.positive.contains_definite({names::delta(ic.pred, false), ic.args}))
                out.violated_constraints.push_back(ic);
        return out;
    }
};

}  // namespace

SolveResult solve_view_update(const Database& db, const VURequest& request,
                              const SolveOptions& opts) {
    for (const Rule& r : db.rules)
        if (!r.definite()) throw Error("view updating requires definite source rules");
    {
        auto arities = predicate_arities(db);
        auto it = arities.find(request.atom.pred);
        if (it == arities.end())
            throw RequestError("request over unknown predicate " + request.atom.pred);
        if (it->second != request.atom.arity())
            throw RequestError("request arity mismatch for " + request.atom.pred);
        if (!request.atom.ground())
            throw RequestError("request atom must be ground: " + to_string(request.atom));
    }

    Solver solver(db, opts);
    SolveResult result;

    std::set<Atom> initial_state(db.facts.begin(), db.facts.end());
    bool currently = solver.atom_holds(initial_state, request.atom);
    if (request.insert && currently)
        throw RequestError("not a true view update: " + to_string(request.atom) +
                           " is already derivable");
    if (!request.insert && !currently)
        throw RequestError("not a true view update: " + to_string(request.atom) +
                           " is not derivable");

    Node root;
    root.state = initial_state;
    root.pending.push_back({names::vu(request.atom.pred, request.insert), request.atom.args});
    root.wants.insert({request.insert, request.atom});
    root.label = "request " + Solver::pretty(root.pending[0]);

    std::vector<Node> frontier{root};
    std::vector<Realization> solutions;
    int depth = 0;
    bool exhausted = false;

    auto log_line = [&](const std::string& s) { result.log.push_back(s); };
    log_line("solve " + root.label);

    while (!frontier.empty()) {
        if (depth >= opts.max_depth) {
            exhausted = true;
            break;
        }
        ++depth;
        std::vector<Node> next_frontier;
        bool found_this_depth = false;

        for (Node& node : frontier) {
            std::vector<std::vector<Atom>> models = solver.analyze(node);

            for (const std::vector<Atom>& model : models) {
                Solver::Classified cls = solver.classify(model);

                Node child = node;
                child.pending.clear();

                std::vector<std::string> choice_desc;
                for (const Atom& rq : cls.requests) choice_desc.push_back(Solver::pretty(rq));
                std::sort(choice_desc.begin(), choice_desc.end());
                std::string branch_label;
                for (const std::string& s : choice_desc)
                    branch_label += (branch_label.empty() ? "" : ", ") + s;
                child.label = "branch [" + branch_label + "]";

                for (const SignedAtom& w : cls.wants) child.wants.insert(w);

                // Contradictory commitments kill the path.
                const SignedAtom* clash = nullptr;
                for (const SignedAtom& w : child.wants) {
                    if (child.wants.count({!w.truth, w.atom})) { clash = &w; break; }
                }
                if (clash) {
                    log_line(child.label + ": false (contradictory requests on " +
                             to_string(clash->atom) + ")");
                    continue;
                }

                // Materialize base-level requests as tentative updates.
                DeltaSet round;
                for (const Atom& rq : cls.requests) {
                    bool insert = rq.pred.rfind("vu_plus_", 0) == 0;
                    Atom a{rq.pred.substr(insert ? 8 : 9), rq.args};
                    if (solver.derived.count(a.pred)) continue;
                    if (insert && !child.state.count(a)) round.insertions.push_back(a);
                    if (!insert && child.state.count(a)) round.deletions.push_back(a);
                }
                round.canonicalize();

                std::set<Atom> pre_state = child.state;
                for (const Atom& a : round.insertions) {
                    child.state.insert(a);
                    child.updates.insertions.push_back(a);
                }
                for (const Atom& a : round.deletions) {
                    child.state.erase(a);
                    child.updates.deletions.push_back(a);
                }
                std::sort(child.updates.insertions.begin(), child.updates.insertions.end());
                std::sort(child.updates.deletions.begin(), child.updates.deletions.end());

                Solver::Consequences cons = solver.consequences(pre_state, round, child.wants);

                for (const Atom& ic : cons.violated_constraints)
                    log_line(child.label + ": false (constraint " + to_string(ic) +
                             " violated, repair pending)");

                // Follow-up requests not yet honored by the child state.
                for (const Atom& rq : cons.new_requests) {
                    bool insert = rq.pred.rfind("vu_plus_", 0) == 0;
                    Atom a{rq.pred.substr(insert ? 8 : 9), rq.args};
                    bool holds = solver.atom_holds(child.state, a);
                    if (insert == holds) continue;
                    child.pending.push_back(rq);
                }
                std::sort(child.pending.begin(), child.pending.end());

                if (child.pending.empty()) {
                    // Analysis settled; verify against the definition.
                    bool satisfied =
                        solver.atom_holds(child.state, request.atom) == request.insert;
                    bool consistent = true;
                    for (const Atom& ic : db.constraints)
                        if (!solver.atom_holds(child.state, ic)) consistent = false;
                    if (satisfied && consistent) {
                        Realization r = child.updates;
                        r.canonicalize();
                        log_line(child.label + ": solution {" + to_string(r) + "}");
                        solutions.push_back(std::move(r));
                        found_this_depth = true;
                    } else {
                        log_line(child.label + ": false (" +
                                 std::string(satisfied ? "constraint violated"
                                                       : "request not satisfied") +
                                 ")");
                    }
                    continue;
                }

                if (round.empty() && child.pending == node.pending &&
                    child.state == node.state) {
                    log_line(child.label + ": false (no progress)");
                    continue;
                }
                next_frontier.push_back(std::move(child));
            }
        }

        if (found_this_depth && opts.stop_at_first_solution_depth) {
            if (!next_frontier.empty())
                log_line("stopping at depth " + std::to_string(depth) +
                         "; open branches remain unexplored");
            break;
        }
        frontier = std::move(next_frontier);
    }
    if (exhausted)
        log_line("depth limit " + std::to_string(opts.max_depth) + " reached with open branches");

    // Keep minimal realizations only.
    for (Realization& r : solutions) r.canonicalize();
    std::sort(solutions.begin(), solutions.end());
    solutions.erase(std::unique(solutions.begin(), solutions.end()), solutions.end());
    std::vector<Realization> minimal;
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        const Realization& r = solutions[i];
        bool drop = false;
        for (std::size_t j = 0; j < solutions.size() && !drop; ++j) {
            if (i == j) continue;
            const Realization& other = solutions[j];
            bool o_in_r = other.subset_modulo_fresh(r);
            if (!o_in_r) continue;
            bool r_in_o = r.subset_modulo_fresh(other);
            if (!r_in_o) drop = true;                 // strictly dominated
            else if (other < r) drop = true;          // same set up to naming
        }
        if (!drop) minimal.push_back(r);
    }
    result.realizations = std::move(minimal);
    result.depth_exhausted = exhausted;
    return result;
}

}  // namespace dedb
