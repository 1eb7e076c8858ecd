#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "dedb/ast.hpp"

namespace dedb {

struct DepEdge {
    std::string from;
    std::string to;
    bool positive = true;

    bool operator==(const DepEdge&) const = default;
    bool operator<(const DepEdge& o) const {
        return std::tie(from, to, positive) < std::tie(o.from, o.to, o.positive);
    }
};

// Edge (q, p, pol) iff q occurs with polarity pol in the body of a rule with p
// in its head; disjunctive heads contribute one edge per head atom.
struct DependencyGraph {
    std::vector<std::string> nodes;
    std::vector<DepEdge> edges;

    std::string to_dot() const;
};

DependencyGraph build_dependency_graph(const std::vector<Rule>& rules);

// Ordered rule layers P_1 ... P_n; every rule in exactly one layer.
struct Partition {
    std::vector<std::vector<Rule>> layers;
};

struct Stratification {
    // Lowest admissible stratum per predicate: equal across positive arcs,
    // strictly higher across negative arcs; head atoms of one rule share a
    // stratum. Base predicates sit at stratum 0.
    std::unordered_map<std::string, int> stratum;
    Partition partition;
};

struct StratifyResult {
    bool ok = false;
    Stratification strat;
    // Predicates along a cycle through a negative edge, when not stratifiable.
    std::vector<std::string> witness_cycle;
    std::string witness_text;
};

StratifyResult stratification(const std::vector<Rule>& rules);

// Same, but throws UnstratifiableError with the witness.
Stratification require_stratification(const std::vector<Rule>& rules);

// Metadata a rewriting pass attaches to its output so the soft engine can
// order it: one layer index per emitted rule, plus per-predicate display
// names used when reporting generated-fact statistics.
struct RewriteProvenance {
    std::vector<int> rule_layer;
    std::unordered_map<std::string, std::string> display;
};

// Groups rewritten rules by their provenance layer, preserving layer order.
// Throws on missing or inconsistent provenance.
Partition soft_partition(const std::vector<Rule>& rules, const RewriteProvenance& provenance);

}  // namespace dedb
