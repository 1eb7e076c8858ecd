#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dedb/ast.hpp"
#include "dedb/database.hpp"
#include "dedb/operators.hpp"
#include "dedb/stratify.hpp"

namespace dedb {

// One letter per argument position: 'b' bound, 'f' free.
std::string binding_pattern(const Atom& query);

struct AdornedPredicate {
    std::string origin;      // predicate in the source program
    std::string adornment;
    int stratum = 0;         // origin stratum in the source program
};

struct AdornedRuleSet {
    std::vector<Rule> rules;
    // Stratum of the source rule each adorned rule came from, parallel to rules.
    std::vector<int> rule_stratum;
    std::unordered_map<std::string, AdornedPredicate> predicates;  // adorned name -> origin
    std::unordered_set<std::string> base_preds;
    std::string query_pred;  // adorned name of the query predicate ("" if base)
};

// Adorns the rules reachable from the query's binding pattern under the full
// left-to-right sip strategy. Negative literals must end up fully bound; body
// literals are reordered (positives first) when needed to achieve that.
AdornedRuleSet adorn(const std::vector<Rule>& rules, const Atom& query);

struct MagicProgram {
    std::vector<Rule> rules;
    RewriteProvenance provenance;
    Atom seed;               // ground magic seed fact
    std::string answer_pred; // adorned query predicate ("" when query is base)
};

// Adds magic guards, magic rules and the seed; provenance layers rules for
// soft_partition by origin stratum.
MagicProgram magic_rewrite(const AdornedRuleSet& adorned, const Atom& query);

enum class QueryEngine { Soft, Alternating };

struct QueryAnswer {
    bool derivable = false;
    std::vector<Atom> witnesses;  // derived answers, de-adorned
    EvalStats stats;
};

// Magic-rewrites the program for the query and evaluates it bottom-up with the
// chosen engine; equals membership in the full materialization.
QueryAnswer answer_query(const Database& db, const Atom& query, QueryEngine engine,
                         const EvalOptions& opts = {});

}  // namespace dedb
