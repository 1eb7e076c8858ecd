#pragma once

#include <functional>
#include <unordered_set>
#include <vector>

#include "dedb/ast.hpp"
#include "dedb/fact_store.hpp"

namespace dedb {

// How positive body literals are matched against a store. Definite matches
// only definite facts; AnyOccurrence also matches atoms inside disjunctions
// (the hyperresolution reading, which reports which fact each literal hit).
enum class MatchMode { Definite, AnyOccurrence };

struct BodyMatch {
    Subst subst;
    // Per positive body literal: -1 when a definite fact was matched,
    // otherwise the id of the disjunctive fact containing the matched atom.
    std::vector<int> fact_ids;
};

// Enumerates substitutions under which every positive body literal of `rule`
// matches the store. When `delta` is non-null, only matches using at least one
// delta atom in some positive literal are produced (each such instance may be
// reported more than once). Negative literals are ignored here.
void for_each_body_match(const Rule& rule, const FactStore& store, MatchMode mode,
                         const std::unordered_set<Atom, AtomHash>* delta,
                         const std::function<void(const BodyMatch&)>& fn);

// All ground instances of the rules whose positive body literals can be
// matched against the store; substitutions bind every variable (safety).
std::vector<Rule> ground_instances(const std::vector<Rule>& rules, const FactStore& store);

}  // namespace dedb
