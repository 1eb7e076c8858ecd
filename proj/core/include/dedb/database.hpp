#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dedb/ast.hpp"

namespace dedb {

// A database is base facts F, rules R and integrity constraints I (definite
// ground atoms). pred(F) and pred(R) are disjoint; a predicate is either base
// or derived.
struct Database {
    std::vector<Atom> facts;
    std::vector<Rule> rules;
    std::vector<Atom> constraints;

    bool operator==(const Database&) const = default;
};

// Throws LoadError subclasses on safety violations, arity clashes, a predicate
// that is both base and derived, or constraints over unknown predicates.
void validate(const Database& db);

std::unordered_set<std::string> derived_predicates(const std::vector<Rule>& rules);
std::unordered_set<std::string> base_predicates(const Database& db);

// Arity of every predicate mentioned anywhere; throws on clashes.
std::unordered_map<std::string, std::size_t> predicate_arities(const Database& db);

// All constants appearing in facts, rules and constraints.
std::vector<std::string> active_domain(const Database& db);

}  // namespace dedb
