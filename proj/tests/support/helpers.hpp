#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "dedb/ast.hpp"
#include "dedb/database.hpp"
#include "dedb/fact_store.hpp"
#include "dedb/parser.hpp"

namespace testsupport {

using namespace dedb;

inline Atom atm(const std::string& s) { return parse_atom(s); }
inline Rule rl(const std::string& s) { return parse_rule(s); }

inline std::vector<Rule> rls(std::initializer_list<const char*> texts) {
    std::vector<Rule> out;
    for (const char* t : texts) out.push_back(parse_rule(t));
    return out;
}

// "a | b" parses as a body-less rule; its head atoms form the disjunction.
inline DisjunctiveFact dfact(const std::string& s) {
    return DisjunctiveFact(parse_rule(s).head);
}

inline FactStore store(std::initializer_list<const char*> facts) {
    FactStore s;
    for (const char* f : facts) s.insert_fact(dfact(f));
    return s;
}

inline std::vector<Atom> atoms(std::initializer_list<const char*> texts) {
    std::vector<Atom> out;
    for (const char* t : texts) out.push_back(parse_atom(t));
    std::sort(out.begin(), out.end());
    return out;
}

inline Database db(const std::string& program_text) {
    return parse_program(program_text).db;
}

inline std::set<std::string> fact_strings(const FactStore& s) {
    std::set<std::string> out;
    for (const DisjunctiveFact& f : s.facts()) out.insert(to_string(f));
    return out;
}

inline std::set<std::string> model_strings(const std::vector<std::vector<Atom>>& models) {
    std::set<std::string> out;
    for (const auto& m : models) {
        std::string s;
        for (const Atom& a : m) s += (s.empty() ? "" : ",") + to_string(a);
        out.insert("{" + s + "}");
    }
    return out;
}

}  // namespace testsupport
