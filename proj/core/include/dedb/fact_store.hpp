#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dedb/ast.hpp"

namespace dedb {

// A nonempty set of ground atoms read as a disjunction; definite iff singleton.
// Atoms are kept sorted and unique so equality and hashing are canonical.
struct DisjunctiveFact {
    std::vector<Atom> atoms;

    DisjunctiveFact() = default;
    explicit DisjunctiveFact(std::vector<Atom> as);

    bool definite() const { return atoms.size() == 1; }
    bool contains(const Atom& a) const;
    bool subset_of(const DisjunctiveFact& other) const;
    bool operator==(const DisjunctiveFact&) const = default;
};

int compare(const DisjunctiveFact& a, const DisjunctiveFact& b);
inline bool operator<(const DisjunctiveFact& a, const DisjunctiveFact& b) { return compare(a, b) < 0; }
std::string to_string(const DisjunctiveFact& f);

// Subsumption-free set of disjunctive facts. Insertion keeps the antichain
// invariant: no stored fact is a proper superset of another, no duplicates.
// `false` (the empty disjunction) is a store-level flag, never a fact.
//
// Stores are mutated only while being built; once shared they are read-only
// and safe to use from several threads without locking.
class FactStore {
public:
    struct Occurrence {
        Atom atom;
        int fact_id;
    };

    FactStore() = default;
    static FactStore of_atoms(const std::vector<Atom>& atoms);
    static FactStore of_facts(const std::vector<DisjunctiveFact>& facts);

    bool inconsistent() const { return inconsistent_; }
    void mark_inconsistent() { inconsistent_ = true; }

    bool empty() const { return definite_.empty() && alive_count_ == 0; }
    std::size_t size() const { return definite_.size() + alive_count_; }
    std::size_t definite_count() const { return definite_.size(); }
    bool has_disjunctions() const { return alive_count_ > 0; }

    bool contains_definite(const Atom& a) const { return definite_.count(a) > 0; }
    bool contains_fact(const DisjunctiveFact& f) const;

    // True if the store gained information (new fact not subsumed by an
    // existing one; subsumed older facts are dropped).
    bool insert_atom(const Atom& a);
    bool insert_fact(const DisjunctiveFact& f);
    bool insert_all(const FactStore& other);

    const std::unordered_set<Atom, AtomHash>& definite() const { return definite_; }
    const std::vector<Atom>& definite_of(const std::string& pred) const;

    // Atoms occurring inside alive disjunctive facts of the predicate.
    const std::vector<Occurrence>& occurrences_of(const std::string& pred) const;
    bool fact_alive(int id) const { return alive_[static_cast<std::size_t>(id)] != 0; }
    const DisjunctiveFact& fact(int id) const { return disjunctive_[static_cast<std::size_t>(id)]; }

    // Canonical contents: definite facts as singletons plus alive disjunctions,
    // sorted. Two stores are equal iff these lists are equal.
    std::vector<DisjunctiveFact> facts() const;
    std::vector<Atom> definite_sorted() const;

    bool operator==(const FactStore& other) const;

    // Fast lookup of definite atoms matching a partially bound pattern is done
    // through the per-position index; see ground.cpp.
    const std::vector<int>* definite_index(const std::string& pred, std::size_t pos,
                                           const std::string& value) const;

private:
    std::unordered_set<Atom, AtomHash> definite_;
    struct PredIndex {
        std::vector<Atom> atoms;
        std::vector<std::unordered_map<std::string, std::vector<int>>> by_pos;
    };
    std::unordered_map<std::string, PredIndex> definite_by_pred_;

    std::vector<DisjunctiveFact> disjunctive_;
    std::vector<char> alive_;
    std::size_t alive_count_ = 0;
    std::unordered_map<Atom, std::vector<int>, AtomHash> occ_by_atom_;
    std::unordered_map<std::string, std::vector<Occurrence>> occ_by_pred_;
    bool occ_by_pred_dirty_ = false;
    bool inconsistent_ = false;

    void kill_fact(int id);
    void rebuild_pred_occurrences() const;
};

// Subsumption reduction. Building a store performs it incrementally, so this
// is the identity on stores and the canonical constructor for raw fact lists.
FactStore red(const FactStore& store);
FactStore red(const std::vector<DisjunctiveFact>& facts);

// All subset-minimal atom sets hitting every disjunction of the store. The
// definite atoms are forced; enumeration only branches over atoms of unsolved
// disjunctions, capped at `branch_cap` distinct atoms (throws beyond).
// Throws InconsistencyError on a store flagged inconsistent.
std::vector<std::vector<Atom>> min_models(const FactStore& store, int branch_cap = 20);

}  // namespace dedb
