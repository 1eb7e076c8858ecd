#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "dedb/ast.hpp"

namespace dedb {

// Naming scheme for predicates introduced by the rewriting passes. Generated
// names are checked against the user program's predicates; a clash is a load
// error rather than silent capture.
namespace names {

inline std::string adorned(const std::string& pred, const std::string& adornment) {
    return adornment.empty() ? pred : pred + "_" + adornment;
}
inline std::string magic(const std::string& adorned_pred) { return "m_" + adorned_pred; }
inline std::string magic_seed(const std::string& adorned_pred) { return "m_s_" + adorned_pred; }
inline std::string new_state(const std::string& pred) { return pred + "_new"; }
inline std::string old_state(const std::string& pred) { return pred + "_old"; }
inline std::string delta(const std::string& pred, bool insert) {
    return (insert ? "delta_plus_" : "delta_minus_") + pred;
}
inline std::string vu(const std::string& pred, bool insert) {
    return (insert ? "vu_plus_" : "vu_minus_") + pred;
}
inline std::string vu_alt(const std::string& pred, std::size_t rule_index) {
    return "vu_alt_" + pred + "_" + std::to_string(rule_index + 1);
}
inline std::string vu_bind(const std::string& pred, std::size_t rule_index) {
    return "vu_bind_" + pred + "_" + std::to_string(rule_index + 1);
}
inline std::string wants(const std::string& pred, bool truth) {
    return (truth ? "vu_true_" : "vu_false_") + pred;
}
inline std::string fresh_constant(std::size_t i) { return "c_new_" + std::to_string(i); }

}  // namespace names

// Throws LoadError if any generated predicate name is already a user predicate.
void ensure_fresh_predicates(const std::vector<std::string>& generated,
                             const std::unordered_set<std::string>& user_predicates);

}  // namespace dedb
