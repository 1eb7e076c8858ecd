#include "dedb/database.hpp"

#include <algorithm>

#include "dedb/errors.hpp"

namespace dedb {

std::unordered_set<std::string> derived_predicates(const std::vector<Rule>& rules) {
    std::unordered_set<std::string> out;
    for (const Rule& r : rules)
        for (const Atom& h : r.head) out.insert(h.pred);
    return out;
}

std::unordered_set<std::string> base_predicates(const Database& db) {
    std::unordered_set<std::string> derived = derived_predicates(db.rules);
    std::unordered_set<std::string> out;
    for (const Atom& f : db.facts) out.insert(f.pred);
    for (const Rule& r : db.rules)
        for (const Literal& l : r.body)
            if (!derived.count(l.atom.pred)) out.insert(l.atom.pred);
    return out;
}

std::unordered_map<std::string, std::size_t> predicate_arities(const Database& db) {
    std::unordered_map<std::string, std::size_t> arity;
    auto note = [&](const Atom& a, const char* where) {
        auto [it, fresh] = arity.emplace(a.pred, a.arity());
        if (!fresh && it->second != a.arity())
            throw LoadError("arity clash for predicate " + a.pred + " in " + where + ": " +
                            std::to_string(it->second) + " vs " + std::to_string(a.arity()));
    };
    for (const Atom& f : db.facts) note(f, "facts");
    for (const Rule& r : db.rules) {
        for (const Atom& h : r.head) note(h, to_string(r).c_str());
        for (const Literal& l : r.body) note(l.atom, to_string(r).c_str());
    }
    for (const Atom& c : db.constraints) note(c, "constraints");
    return arity;
}

void validate(const Database& db) {
    predicate_arities(db);

    std::unordered_set<std::string> derived = derived_predicates(db.rules);
    for (const Atom& f : db.facts) {
        if (!f.ground()) throw LoadError("non-ground base fact " + to_string(f));
        if (derived.count(f.pred))
            throw LoadError("predicate " + f.pred + " is both base (has facts) and derived (has rules)");
    }
    for (const Rule& r : db.rules) {
        if (r.head.empty() || r.body.empty())
            throw LoadError("rule with empty head or body: " + to_string(r));
        if (auto v = safety_violation(r)) throw SafetyError(to_string(r), *v);
    }
    std::unordered_set<std::string> known;
    for (const Atom& f : db.facts) known.insert(f.pred);
    known.insert(derived.begin(), derived.end());
    for (const Atom& c : db.constraints) {
        if (!c.ground()) throw LoadError("non-ground constraint " + to_string(c));
        if (!known.count(c.pred))
            throw LoadError("constraint over unknown predicate " + c.pred);
    }
}

std::vector<std::string> active_domain(const Database& db) {
    std::unordered_set<std::string> seen;
    auto note_atom = [&](const Atom& a) {
        for (const Term& t : a.args)
            if (!t.is_var()) seen.insert(t.text);
    };
    for (const Atom& f : db.facts) note_atom(f);
    for (const Rule& r : db.rules) {
        for (const Atom& h : r.head) note_atom(h);
        for (const Literal& l : r.body) note_atom(l.atom);
    }
    for (const Atom& c : db.constraints) note_atom(c);
    std::vector<std::string> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
        return compare(Term::constant(a), Term::constant(b)) < 0;
    });
    return out;
}

}  // namespace dedb
