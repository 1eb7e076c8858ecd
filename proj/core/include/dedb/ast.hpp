#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dedb {

enum class TermKind : uint8_t { Variable, Constant };

// A term is a variable or a constant; there are no function symbols.
struct Term {
    TermKind kind = TermKind::Constant;
    std::string text;

    static Term var(std::string name) { return {TermKind::Variable, std::move(name)}; }
    static Term constant(std::string name) { return {TermKind::Constant, std::move(name)}; }

    bool is_var() const { return kind == TermKind::Variable; }
    bool operator==(const Term&) const = default;
};

// Total order used everywhere facts are kept canonical: integer constants by
// value, then identifiers lexicographically, then variables.
int compare(const Term& a, const Term& b);
inline bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

struct Atom {
    std::string pred;
    std::vector<Term> args;

    std::size_t arity() const { return args.size(); }
    bool ground() const;
    bool operator==(const Atom&) const = default;
};

int compare(const Atom& a, const Atom& b);
inline bool operator<(const Atom& a, const Atom& b) { return compare(a, b) < 0; }

struct AtomHash {
    std::size_t operator()(const Atom& a) const;
};

struct Literal {
    bool positive = true;
    Atom atom;
    bool operator==(const Literal&) const = default;
};

// head is a nonempty disjunction; |head| == 1 for definite rules.
struct Rule {
    std::vector<Atom> head;
    std::vector<Literal> body;

    bool definite() const { return head.size() == 1; }
    bool operator==(const Rule&) const = default;
};

int compare(const Rule& a, const Rule& b);
inline bool operator<(const Rule& a, const Rule& b) { return compare(a, b) < 0; }

// Returns the name of a variable violating safety (occurring in the head or a
// negative literal but in no positive body literal), or nullopt if safe.
std::optional<std::string> safety_violation(const Rule& r);

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Literal& l);
std::string to_string(const Rule& r);

// Substitutions are small; a flat vector beats a map for the arities here.
using Subst = std::vector<std::pair<std::string, std::string>>;

const std::string* lookup(const Subst& s, const std::string& var);
bool bind(Subst& s, const std::string& var, const std::string& value);
Atom substitute(const Atom& a, const Subst& s);

// Convenience constructors used by the transformations and tests.
Atom make_atom(std::string pred, std::vector<Term> args = {});
Literal pos(Atom a);
Literal neg(Atom a);

}  // namespace dedb
