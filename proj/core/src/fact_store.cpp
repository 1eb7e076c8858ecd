#include "dedb/fact_store.hpp"

#include <algorithm>
#include <bit>

#include "dedb/errors.hpp"

namespace dedb {

DisjunctiveFact::DisjunctiveFact(std::vector<Atom> as) : atoms(std::move(as)) {
    if (atoms.empty()) throw InternalError("empty disjunction is not a fact");
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    for (const Atom& a : atoms)
        if (!a.ground()) throw InternalError("non-ground atom in disjunctive fact: " + to_string(a));
}

bool DisjunctiveFact::contains(const Atom& a) const {
    return std::binary_search(atoms.begin(), atoms.end(), a);
}

bool DisjunctiveFact::subset_of(const DisjunctiveFact& other) const {
    if (atoms.size() > other.atoms.size()) return false;
    return std::includes(other.atoms.begin(), other.atoms.end(), atoms.begin(), atoms.end(),
                         [](const Atom& x, const Atom& y) { return x < y; });
}

int compare(const DisjunctiveFact& a, const DisjunctiveFact& b) {
    if (a.atoms.size() != b.atoms.size()) return a.atoms.size() < b.atoms.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.atoms.size(); ++i)
        if (int c = compare(a.atoms[i], b.atoms[i]); c != 0) return c;
    return 0;
}

std::string to_string(const DisjunctiveFact& f) {
    std::string out;
    for (std::size_t i = 0; i < f.atoms.size(); ++i) {
        if (i) out += " | ";
        out += to_string(f.atoms[i]);
    }
    return out;
}

FactStore FactStore::of_atoms(const std::vector<Atom>& atoms) {
    FactStore s;
    for (const Atom& a : atoms) s.insert_atom(a);
    return s;
}

FactStore FactStore::of_facts(const std::vector<DisjunctiveFact>& facts) {
    FactStore s;
    for (const DisjunctiveFact& f : facts) s.insert_fact(f);
    return s;
}

bool FactStore::contains_fact(const DisjunctiveFact& f) const {
    if (f.definite()) return contains_definite(f.atoms[0]);
    auto it = occ_by_atom_.find(f.atoms[0]);
    if (it == occ_by_atom_.end()) return false;
    for (int id : it->second)
        if (fact_alive(id) && fact(id) == f) return true;
    return false;
}

bool FactStore::insert_atom(const Atom& a) {
    if (!a.ground()) throw InternalError("non-ground atom inserted: " + to_string(a));
    if (definite_.count(a)) return false;
    definite_.insert(a);
    PredIndex& idx = definite_by_pred_[a.pred];
    if (idx.by_pos.size() < a.args.size()) idx.by_pos.resize(a.args.size());
    int row = static_cast<int>(idx.atoms.size());
    idx.atoms.push_back(a);
    for (std::size_t p = 0; p < a.args.size(); ++p) idx.by_pos[p][a.args[p].text].push_back(row);

    // Any disjunction containing the new definite atom is now subsumed.
    if (auto it = occ_by_atom_.find(a); it != occ_by_atom_.end()) {
        for (int id : it->second)
            if (fact_alive(id)) kill_fact(id);
    }
    return true;
}

bool FactStore::insert_fact(const DisjunctiveFact& f) {
    if (f.definite()) return insert_atom(f.atoms[0]);
    for (const Atom& a : f.atoms)
        if (definite_.count(a)) return false;

    std::vector<int> supersets;
    std::unordered_set<int> seen;
    for (const Atom& a : f.atoms) {
        auto it = occ_by_atom_.find(a);
        if (it == occ_by_atom_.end()) continue;
        for (int id : it->second) {
            if (!fact_alive(id) || !seen.insert(id).second) continue;
            const DisjunctiveFact& g = fact(id);
            if (g.subset_of(f)) return false;  // f subsumed (covers g == f too)
            if (f.subset_of(g)) supersets.push_back(id);
        }
    }
    for (int id : supersets) kill_fact(id);

    int id = static_cast<int>(disjunctive_.size());
    disjunctive_.push_back(f);
    alive_.push_back(1);
    ++alive_count_;
    for (const Atom& a : f.atoms) occ_by_atom_[a].push_back(id);
    occ_by_pred_dirty_ = true;
    return true;
}

bool FactStore::insert_all(const FactStore& other) {
    bool grew = false;
    for (const Atom& a : other.definite_) grew |= insert_atom(a);
    for (std::size_t i = 0; i < other.disjunctive_.size(); ++i)
        if (other.alive_[i]) grew |= insert_fact(other.disjunctive_[i]);
    if (other.inconsistent_) inconsistent_ = true;
    return grew;
}

const std::vector<Atom>& FactStore::definite_of(const std::string& pred) const {
    static const std::vector<Atom> empty;
    auto it = definite_by_pred_.find(pred);
    return it == definite_by_pred_.end() ? empty : it->second.atoms;
}

void FactStore::rebuild_pred_occurrences() const {
    auto* self = const_cast<FactStore*>(this);
    self->occ_by_pred_.clear();
    for (std::size_t id = 0; id < disjunctive_.size(); ++id) {
        if (!alive_[id]) continue;
        for (const Atom& a : disjunctive_[id].atoms)
            self->occ_by_pred_[a.pred].push_back({a, static_cast<int>(id)});
    }
    self->occ_by_pred_dirty_ = false;
}

const std::vector<FactStore::Occurrence>& FactStore::occurrences_of(const std::string& pred) const {
    static const std::vector<Occurrence> empty;
    if (occ_by_pred_dirty_) rebuild_pred_occurrences();
    auto it = occ_by_pred_.find(pred);
    return it == occ_by_pred_.end() ? empty : it->second;
}

std::vector<DisjunctiveFact> FactStore::facts() const {
    std::vector<DisjunctiveFact> out;
    out.reserve(size());
    for (const Atom& a : definite_) out.push_back(DisjunctiveFact({a}));
    for (std::size_t i = 0; i < disjunctive_.size(); ++i)
        if (alive_[i]) out.push_back(disjunctive_[i]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Atom> FactStore::definite_sorted() const {
    std::vector<Atom> out(definite_.begin(), definite_.end());
    std::sort(out.begin(), out.end());
    return out;
}

bool FactStore::operator==(const FactStore& other) const {
    if (inconsistent_ != other.inconsistent_) return false;
    if (definite_.size() != other.definite_.size() || alive_count_ != other.alive_count_) return false;
    if (definite_ != other.definite_) return false;
    if (alive_count_ == 0) return true;
    return facts() == other.facts();
}

const std::vector<int>* FactStore::definite_index(const std::string& pred, std::size_t pos,
                                                  const std::string& value) const {
    auto it = definite_by_pred_.find(pred);
    if (it == definite_by_pred_.end() || pos >= it->second.by_pos.size()) return nullptr;
    auto vit = it->second.by_pos[pos].find(value);
    static const std::vector<int> empty;
    return vit == it->second.by_pos[pos].end() ? &empty : &vit->second;
}

void FactStore::kill_fact(int id) {
    if (!alive_[static_cast<std::size_t>(id)]) return;
    alive_[static_cast<std::size_t>(id)] = 0;
    --alive_count_;
    occ_by_pred_dirty_ = true;
}

FactStore red(const FactStore& store) {
    FactStore out;
    out.insert_all(store);
    return out;
}

FactStore red(const std::vector<DisjunctiveFact>& facts) { return FactStore::of_facts(facts); }

std::vector<std::vector<Atom>> min_models(const FactStore& store, int branch_cap) {
    if (store.inconsistent())
        throw InconsistencyError("minimal models are undefined for an inconsistent store");

    std::vector<Atom> forced = store.definite_sorted();
    std::vector<DisjunctiveFact> active;
    for (const DisjunctiveFact& f : store.facts())
        if (!f.definite()) active.push_back(f);

    if (active.empty()) return {forced};

    std::vector<Atom> branch_atoms;
    for (const DisjunctiveFact& f : active)
        for (const Atom& a : f.atoms) branch_atoms.push_back(a);
    std::sort(branch_atoms.begin(), branch_atoms.end());
    branch_atoms.erase(std::unique(branch_atoms.begin(), branch_atoms.end()), branch_atoms.end());

    const std::size_t k = branch_atoms.size();
    if (k > static_cast<std::size_t>(branch_cap))
        throw EnumerationCapError("model enumeration over " + std::to_string(k) +
                                  " atoms exceeds the cap of " + std::to_string(branch_cap));

    std::vector<uint64_t> clause_masks;
    clause_masks.reserve(active.size());
    for (const DisjunctiveFact& f : active) {
        uint64_t m = 0;
        for (const Atom& a : f.atoms) {
            auto it = std::lower_bound(branch_atoms.begin(), branch_atoms.end(), a);
            m |= uint64_t{1} << (it - branch_atoms.begin());
        }
        clause_masks.push_back(m);
    }

    std::vector<uint64_t> candidates;
    const uint64_t limit = uint64_t{1} << k;
    for (uint64_t m = 0; m < limit; ++m) {
        bool hits = true;
        for (uint64_t cm : clause_masks)
            if ((m & cm) == 0) { hits = false; break; }
        if (hits) candidates.push_back(m);
    }
    std::sort(candidates.begin(), candidates.end(), [](uint64_t a, uint64_t b) {
        int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    std::vector<uint64_t> minimal;
    for (uint64_t m : candidates) {
        bool dominated = false;
        for (uint64_t mm : minimal)
            if ((mm & m) == mm) { dominated = true; break; }
        if (!dominated) minimal.push_back(m);
    }

    std::vector<std::vector<Atom>> models;
    models.reserve(minimal.size());
    for (uint64_t m : minimal) {
        std::vector<Atom> model = forced;
        for (std::size_t i = 0; i < k; ++i)
            if (m & (uint64_t{1} << i)) model.push_back(branch_atoms[i]);
        std::sort(model.begin(), model.end());
        models.push_back(std::move(model));
    }
    std::sort(models.begin(), models.end());
    return models;
}

}  // namespace dedb
