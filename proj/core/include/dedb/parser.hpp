#pragma once

#include <string>
#include <vector>

#include "dedb/ast.hpp"
#include "dedb/database.hpp"

namespace dedb {

// A parsed source file: the database plus any ?- query atoms it contains.
struct Program {
    Database db;
    std::vector<Atom> queries;

    bool operator==(const Program&) const = default;
};

enum class RequestKind { BaseUpdate, ViewUpdate };

struct Request {
    RequestKind kind = RequestKind::BaseUpdate;
    bool insert = true;
    Atom atom;

    bool operator==(const Request&) const = default;
};

// Grammar: facts `e(1,2).`, rules `p(X,Y) :- e(X,Y), not q(Y).`, disjunctive
// heads `a(X) | b(X) :- c(X).`, constraints `constraint ic(2).`, queries
// `?- o(1,2).`, comments `% ...`. Variables start with an uppercase letter;
// constants are lowercase identifiers or integers.
// Throws ParseError (with location) and LoadError subclasses.
Program parse_program(const std::string& text);

// `+e(2,3)` / `-s(2)` base updates, `vu +p(2)` / `vu -p(2)` view updates.
// The atom must be ground.
Request parse_request(const std::string& text);

// A single atom, e.g. `o(1,2)` or `p(1,Y)`; used for query arguments.
Atom parse_atom(const std::string& text);

// A single rule or fact in program syntax (without validation context).
Rule parse_rule(const std::string& text);

// Checks the request predicate exists in the database with the right arity.
void validate_request(const Request& r, const Database& db);

// Canonical text form; parse_program(print_program(p)) == canonical(p).
std::string print_program(const Program& p);
std::string print_rules(const std::vector<Rule>& rules);

// Sorts facts and constraints, dedupes, keeps rule order.
Program canonical(Program p);

}  // namespace dedb
