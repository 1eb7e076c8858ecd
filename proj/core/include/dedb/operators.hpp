#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dedb/database.hpp"
#include "dedb/fact_store.hpp"
#include "dedb/stratify.hpp"

namespace dedb {

struct EvalOptions {
    // Delta-driven matching inside fixpoint loops; naive mode re-matches
    // everything each round. Both reach the same fixpoint.
    bool semi_naive = true;
    // Cap on branching atoms handed to min_models.
    int min_models_cap = 20;
};

struct EvalStats {
    std::size_t iterations = 0;
    // Ground atoms derived by rules, i.e. present in the result but not in the
    // seed store, keyed by predicate.
    std::unordered_map<std::string, std::size_t> derived_by_pred;

    std::size_t derived_total() const {
        std::size_t n = 0;
        for (const auto& [p, c] : derived_by_pred) n += c;
        return n;
    }
};

struct ModelResult {
    FactStore positive;
    EvalStats stats;
};

// One simultaneous application of the immediate consequence operator.
// Requires definite rules and a definite store.
FactStore immediate_consequence(const std::vector<Rule>& rules, const FactStore& store);

// Iterates an inflationary operator to its least fixpoint containing seed.
FactStore lfp(const std::function<FactStore(const FactStore&)>& op, FactStore seed);

// Stratum-by-stratum least fixpoints along the canonical stratification.
// Throws UnstratifiableError on unstratifiable rules.
ModelResult iterated_fixpoint_model(const Database& db, const EvalOptions& opts = {});

// Same evaluation from an arbitrary seed store; used by the rewriting passes
// whose seed relations (deltas, magic seeds) are not ordinary base facts.
ModelResult stratified_fixpoint(const std::vector<Rule>& rules, const FactStore& seed,
                                const EvalOptions& opts = {});

// One soft step: applies the lowest layer that grows the store, if any.
FactStore soft_consequence(const Partition& partition, const FactStore& store);

// Least fixpoint of the soft operator over the given partition.
ModelResult soft_fixpoint(const Partition& partition, const FactStore& seed,
                          const EvalOptions& opts = {});

// Well-founded model (positive part) via nested eventual-consequence fixpoints.
// Handles arbitrary, possibly unstratifiable definite rules.
ModelResult alternating_fixpoint_model(const Database& db, const EvalOptions& opts = {});

// One application of the disjunctive consequence operator: hyperresolution
// with residues and the minimal-model context disjunction, then reduction.
FactStore state_consequence(const std::vector<Rule>& rules, const FactStore& store,
                            const EvalOptions& opts = {});

struct StateModel {
    FactStore state;
    std::vector<std::vector<Atom>> models;  // minimal models, constraint-filtered
    EvalStats stats;
};

// Stratum-by-stratum fixpoints of the disjunctive operator; keeps only model
// states satisfying the constraints. Throws InconsistencyError if none remain.
StateModel fixpoint_state_model(const Database& db, const EvalOptions& opts = {});

// One general soft step: the lowest layer whose disjunctive application grows
// the store, if any.
FactStore general_soft_consequence(const Partition& partition, const FactStore& store,
                                   const EvalOptions& opts = {});

// Least fixpoint of the general soft operator.
ModelResult general_soft_fixpoint(const Partition& partition, const FactStore& seed,
                                  const EvalOptions& opts = {});

}  // namespace dedb
