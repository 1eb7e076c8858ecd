#pragma once

#include <string>
#include <vector>

#include "dedb/ast.hpp"
#include "dedb/database.hpp"
#include "dedb/operators.hpp"

namespace dedb {

struct VURequest {
    bool insert = true;
    Atom atom;
};

// Base-relation updates realizing a request; minimal under set inclusion.
struct Realization {
    std::vector<Atom> insertions;
    std::vector<Atom> deletions;

    void canonicalize();
    std::size_t size() const { return insertions.size() + deletions.size(); }
    bool subset_of(const Realization& other) const;
    // Subset under some injective renaming of this realization's fresh
    // constants into the other's; the minimality filter works modulo naming.
    bool subset_modulo_fresh(const Realization& other) const;
    bool operator==(const Realization&) const = default;
};
bool operator<(const Realization& a, const Realization& b);
std::string to_string(const Realization& r);

// Top-down analysis rules: a vu_plus request on a derived predicate branches
// over its defining rules (disjunctive head) and, per rule, requests the body
// literals that do not currently hold; vu_minus requests branch over which
// body literal of each live derivation to falsify. State predicates act as
// tests. Rules whose variables cannot be bound from the request are grounded
// by the solver over the active domain plus fresh constants.
std::vector<Rule> derive_vu_rules(const std::vector<Rule>& rules);

// Restart rules: vu_plus_ic(c) <- delta_minus_ic(c) per constraint atom, plus
// side-effect repair rules re-requesting atoms the current path needs true
// (resp. false) when propagation deletes (resp. inserts) them.
std::vector<Rule> derive_vu_transition_rules(const std::vector<Atom>& constraints,
                                             const std::vector<Rule>& rules);

struct SolveOptions {
    int max_depth = 10;
    // Breadth-first: report the realizations of the first depth with any
    // solution. When false, keep exploring to max_depth and report everything
    // (minimality-filtered); used by exhaustive-comparison tests.
    bool stop_at_first_solution_depth = true;
    EvalOptions eval;
};

struct SolveResult {
    std::vector<Realization> realizations;
    std::vector<std::string> log;
    bool depth_exhausted = false;  // open paths remained beyond max_depth
};

// Alternates the disjunctive top-down analysis with bottom-up propagation,
// breadth-first over alternation rounds. Throws RequestError unless the
// request is a true view update.
SolveResult solve_view_update(const Database& db, const VURequest& request,
                              const SolveOptions& opts = {});

}  // namespace dedb
