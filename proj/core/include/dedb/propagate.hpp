#pragma once

#include <map>
#include <string>
#include <vector>

#include "dedb/ast.hpp"
#include "dedb/database.hpp"
#include "dedb/operators.hpp"
#include "dedb/stratify.hpp"

namespace dedb {

// True changes only: insertions absent from the old state, deletions present.
struct DeltaSet {
    std::vector<Atom> insertions;
    std::vector<Atom> deletions;

    bool empty() const { return insertions.empty() && deletions.empty(); }
    void canonicalize();
    bool operator==(const DeltaSet&) const = default;
};

// Propagation rules: per source rule and body literal, one rule computing the
// induced insertions and one computing the induced deletions, with the
// remaining literals as side conditions (new state for insertions, old state
// for deletions) and the head effectiveness test last.
std::vector<Rule> derive_propagation_rules(const std::vector<Rule>& rules);

// e_new(x) <- e(x), not delta_minus_e(x) and e_new(x) <- delta_plus_e(x) for
// base predicates; renamed copies of the source rules for derived ones.
std::vector<Rule> derive_transition_rules(const std::vector<Rule>& rules,
                                          const std::vector<std::string>& base_preds);

// Old-state relations for derived predicates: the source rules with derived
// predicates renamed *_old, evaluated against the unmodified base facts.
std::vector<Rule> derive_old_state_rules(const std::vector<Rule>& rules);

struct MagicUpdateProgram {
    std::vector<Rule> rules;
    RewriteProvenance provenance;
};

// Magic Updates: delta literals in propagation-rule bodies act as queries on
// the rest of the body; state relations are adorned and their defining rules
// specialized so they are only materialized where a delta asks for them.
MagicUpdateProgram magic_updates_rewrite(const std::vector<Rule>& rules,
                                         const std::vector<Rule>& up_rules,
                                         const std::vector<Rule>& transition_rules);

enum class PropagationMode { Naive, Magic };

struct PropagationResult {
    DeltaSet applied;  // the base update itself
    DeltaSet induced;  // deltas of derived predicates
    // Ground atoms materialized by rule evaluation (inputs and seeds do not
    // count), keyed by display relation; adorned state relations aggregate
    // under their plain names (p_old, p_new, ...).
    std::map<std::string, std::size_t> generated_by_relation;
    std::size_t generated_total = 0;
    // Distinct state facts (de-adorned) plus deltas, leaving the magic
    // bookkeeping facts out; this is the materialization the rewriting is
    // meant to shrink and is never larger in magic mode.
    std::size_t state_and_delta_total = 0;
};

// Seeds the delta relations from `update`, evaluates the chosen rule system to
// fixpoint and reports the induced deltas for every derived predicate.
// Throws RequestError if the update is not effective w.r.t. the database.
PropagationResult propagate_update(const Database& db, const DeltaSet& update,
                                   PropagationMode mode, const EvalOptions& opts = {});

}  // namespace dedb
