#include "dedb/ast.hpp"

#include <algorithm>
#include <cctype>

namespace dedb {

namespace {

bool is_integer(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

}  // namespace

int compare(const Term& a, const Term& b) {
    if (a.kind != b.kind) return a.kind == TermKind::Constant ? -1 : 1;
    if (a.kind == TermKind::Constant) {
        bool na = is_integer(a.text), nb = is_integer(b.text);
        if (na != nb) return na ? -1 : 1;
        if (na) {
            long long va = std::stoll(a.text), vb = std::stoll(b.text);
            if (va != vb) return va < vb ? -1 : 1;
            return 0;
        }
    }
    return a.text.compare(b.text) < 0 ? -1 : (a.text == b.text ? 0 : 1);
}

bool Atom::ground() const {
    return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_var(); });
}

int compare(const Atom& a, const Atom& b) {
    if (int c = a.pred.compare(b.pred); c != 0) return c < 0 ? -1 : 1;
    if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (int c = compare(a.args[i], b.args[i]); c != 0) return c;
    return 0;
}

std::size_t AtomHash::operator()(const Atom& a) const {
    std::size_t h = std::hash<std::string>{}(a.pred);
    for (const Term& t : a.args) {
        h ^= std::hash<std::string>{}(t.text) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= static_cast<std::size_t>(t.kind) + (h << 1);
    }
    return h;
}

int compare(const Rule& a, const Rule& b) {
    auto cmp_atoms = [](const std::vector<Atom>& x, const std::vector<Atom>& y) {
        if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (int c = compare(x[i], y[i]); c != 0) return c;
        return 0;
    };
    if (int c = cmp_atoms(a.head, b.head); c != 0) return c;
    if (a.body.size() != b.body.size()) return a.body.size() < b.body.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.body.size(); ++i) {
        if (a.body[i].positive != b.body[i].positive) return a.body[i].positive ? -1 : 1;
        if (int c = compare(a.body[i].atom, b.body[i].atom); c != 0) return c;
    }
    return 0;
}

std::optional<std::string> safety_violation(const Rule& r) {
    auto bound = [&](const std::string& v) {
        for (const Literal& l : r.body)
            if (l.positive)
                for (const Term& t : l.atom.args)
                    if (t.is_var() && t.text == v) return true;
        return false;
    };
    for (const Atom& h : r.head)
        for (const Term& t : h.args)
            if (t.is_var() && !bound(t.text)) return t.text;
    for (const Literal& l : r.body)
        if (!l.positive)
            for (const Term& t : l.atom.args)
                if (t.is_var() && !bound(t.text)) return t.text;
    return std::nullopt;
}

std::string to_string(const Term& t) { return t.text; }

std::string to_string(const Atom& a) {
    if (a.args.empty()) return a.pred;
    std::string out = a.pred + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ",";
        out += a.args[i].text;
    }
    out += ")";
    return out;
}

std::string to_string(const Literal& l) {
    return l.positive ? to_string(l.atom) : "not " + to_string(l.atom);
}

std::string to_string(const Rule& r) {
    std::string out;
    for (std::size_t i = 0; i < r.head.size(); ++i) {
        if (i) out += " | ";
        out += to_string(r.head[i]);
    }
    out += " :- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
        if (i) out += ", ";
        out += to_string(r.body[i]);
    }
    out += ".";
    return out;
}

const std::string* lookup(const Subst& s, const std::string& var) {
    for (const auto& [v, c] : s)
        if (v == var) return &c;
    return nullptr;
}

bool bind(Subst& s, const std::string& var, const std::string& value) {
    if (const std::string* existing = lookup(s, var)) return *existing == value;
    s.emplace_back(var, value);
    return true;
}

Atom substitute(const Atom& a, const Subst& s) {
    Atom out{a.pred, {}};
    out.args.reserve(a.args.size());
    for (const Term& t : a.args) {
        if (t.is_var()) {
            const std::string* c = lookup(s, t.text);
            out.args.push_back(c ? Term::constant(*c) : t);
        } else {
            out.args.push_back(t);
        }
    }
    return out;
}

Atom make_atom(std::string pred, std::vector<Term> args) { return {std::move(pred), std::move(args)}; }
Literal pos(Atom a) { return {true, std::move(a)}; }
Literal neg(Atom a) { return {false, std::move(a)}; }

}  // namespace dedb
