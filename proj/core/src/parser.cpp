#include "dedb/parser.hpp"

#include <algorithm>
#include <cctype>

#include "dedb/errors.hpp"

namespace dedb {

namespace {

enum class Tok { Ident, Var, Int, LParen, RParen, Comma, Dot, Pipe, Implies, Query, Plus, Minus, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_ws();
        int line = line_, col = col_;
        if (pos_ >= text_.size()) return {Tok::End, "", line, col};
        char c = text_[pos_];
        if (std::islower(static_cast<unsigned char>(c))) {
            std::string s = take_word();
            return {Tok::Ident, s, line, col};
        }
        if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
            std::string s = take_word();
            return {Tok::Var, s, line, col};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string s;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                s += text_[pos_];
                advance();
            }
            return {Tok::Int, s, line, col};
        }
        switch (c) {
            case '(': advance(); return {Tok::LParen, "(", line, col};
            case ')': advance(); return {Tok::RParen, ")", line, col};
            case ',': advance(); return {Tok::Comma, ",", line, col};
            case '.': advance(); return {Tok::Dot, ".", line, col};
            case '|': advance(); return {Tok::Pipe, "|", line, col};
            case '+': advance(); return {Tok::Plus, "+", line, col};
            case '-': advance(); return {Tok::Minus, "-", line, col};
            case ':':
                advance();
                if (pos_ < text_.size() && text_[pos_] == '-') {
                    advance();
                    return {Tok::Implies, ":-", line, col};
                }
                throw ParseError("expected ':-'", line, col);
            case '?':
                advance();
                if (pos_ < text_.size() && text_[pos_] == '-') {
                    advance();
                    return {Tok::Query, "?-", line, col};
                }
                throw ParseError("expected '?-'", line, col);
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string take_word() {
        std::string s;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            s += text_[pos_];
            advance();
        }
        return s;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) { shift(); }

    Program program() {
        Program p;
        while (cur_.kind != Tok::End) {
            if (cur_.kind == Tok::Ident && cur_.text == "constraint") {
                shift();
                Atom a = atom();
                expect(Tok::Dot);
                if (!a.ground()) throw ParseError("constraint must be ground: " + to_string(a), cur_.line, cur_.col);
                p.db.constraints.push_back(std::move(a));
                continue;
            }
            if (cur_.kind == Tok::Query) {
                shift();
                p.queries.push_back(atom());
                expect(Tok::Dot);
                continue;
            }
            std::vector<Atom> head;
            head.push_back(atom());
            while (cur_.kind == Tok::Pipe) {
                shift();
                head.push_back(atom());
            }
            if (cur_.kind == Tok::Dot) {
                shift();
                if (head.size() != 1)
                    throw ParseError("disjunctive facts are not allowed in programs", cur_.line, cur_.col);
                if (!head[0].ground())
                    throw ParseError("fact must be ground: " + to_string(head[0]), cur_.line, cur_.col);
                p.db.facts.push_back(std::move(head[0]));
                continue;
            }
            expect(Tok::Implies);
            Rule r;
            r.head = std::move(head);
            r.body.push_back(literal());
            while (cur_.kind == Tok::Comma) {
                shift();
                r.body.push_back(literal());
            }
            expect(Tok::Dot);
            if (auto v = safety_violation(r)) throw SafetyError(to_string(r), *v);
            p.db.rules.push_back(std::move(r));
        }
        return p;
    }

    Atom single_atom() {
        Atom a = atom();
        if (cur_.kind == Tok::Dot) shift();
        expect(Tok::End);
        return a;
    }

    Rule single_rule() {
        Rule r;
        r.head.push_back(atom());
        while (cur_.kind == Tok::Pipe) {
            shift();
            r.head.push_back(atom());
        }
        if (cur_.kind == Tok::Implies) {
            shift();
            r.body.push_back(literal());
            while (cur_.kind == Tok::Comma) {
                shift();
                r.body.push_back(literal());
            }
        }
        if (cur_.kind == Tok::Dot) shift();
        expect(Tok::End);
        return r;
    }

    Request request() {
        Request r;
        if (cur_.kind == Tok::Ident && cur_.text == "vu") {
            r.kind = RequestKind::ViewUpdate;
            shift();
        }
        if (cur_.kind == Tok::Plus) {
            r.insert = true;
        } else if (cur_.kind == Tok::Minus) {
            r.insert = false;
        } else {
            throw ParseError("expected '+' or '-'", cur_.line, cur_.col);
        }
        shift();
        r.atom = atom();
        if (cur_.kind == Tok::Dot) shift();
        expect(Tok::End);
        if (!r.atom.ground())
            throw RequestError("request atom must be ground: " + to_string(r.atom));
        return r;
    }

private:
    void shift() { cur_ = lex_.next(); }

    void expect(Tok k) {
        if (cur_.kind != k) {
            static const char* names[] = {"identifier", "variable", "integer", "'('", "')'",
                                          "','",        "'.'",      "'|'",     "':-'", "'?-'",
                                          "'+'",        "'-'",      "end of input"};
            throw ParseError(std::string("expected ") + names[static_cast<int>(k)] + ", found '" +
                                 cur_.text + "'",
                             cur_.line, cur_.col);
        }
        shift();
    }

    Atom atom() {
        if (cur_.kind != Tok::Ident)
            throw ParseError("expected predicate name, found '" + cur_.text + "'", cur_.line, cur_.col);
        Atom a;
        a.pred = cur_.text;
        shift();
        if (cur_.kind == Tok::LParen) {
            shift();
            a.args.push_back(term());
            while (cur_.kind == Tok::Comma) {
                shift();
                a.args.push_back(term());
            }
            expect(Tok::RParen);
        }
        return a;
    }

    Term term() {
        Token t = cur_;
        switch (t.kind) {
            case Tok::Var: shift(); return Term::var(t.text);
            case Tok::Ident: shift(); return Term::constant(t.text);
            case Tok::Int: shift(); return Term::constant(t.text);
            default: throw ParseError("expected term, found '" + t.text + "'", t.line, t.col);
        }
    }

    Literal literal() {
        if (cur_.kind == Tok::Ident && cur_.text == "not") {
            shift();
            return {false, atom()};
        }
        return {true, atom()};
    }

    Lexer lex_;
    Token cur_{Tok::End, "", 0, 0};
};

}  // namespace

Program parse_program(const std::string& text) {
    Parser p(text);
    Program prog = p.program();
    validate(prog.db);
    auto arity = predicate_arities(prog.db);
    for (const Atom& q : prog.queries) {
        auto it = arity.find(q.pred);
        if (it == arity.end()) throw LoadError("query over unknown predicate " + q.pred);
        if (it->second != q.arity())
            throw LoadError("query arity mismatch for " + q.pred);
    }
    return canonical(std::move(prog));
}

Request parse_request(const std::string& text) {
    Parser p(text);
    return p.request();
}

Atom parse_atom(const std::string& text) {
    Parser p(text);
    return p.single_atom();
}

Rule parse_rule(const std::string& text) {
    Parser p(text);
    return p.single_rule();
}

void validate_request(const Request& r, const Database& db) {
    auto arity = predicate_arities(db);
    auto it = arity.find(r.atom.pred);
    if (it == arity.end()) throw RequestError("request over unknown predicate " + r.atom.pred);
    if (it->second != r.atom.arity())
        throw RequestError("request arity mismatch for " + r.atom.pred + ": expected " +
                           std::to_string(it->second) + " arguments");
}

Program canonical(Program p) {
    std::sort(p.db.facts.begin(), p.db.facts.end());
    p.db.facts.erase(std::unique(p.db.facts.begin(), p.db.facts.end()), p.db.facts.end());
    std::sort(p.db.constraints.begin(), p.db.constraints.end());
    p.db.constraints.erase(std::unique(p.db.constraints.begin(), p.db.constraints.end()),
                           p.db.constraints.end());
    return p;
}

std::string print_program(const Program& p) {
    std::string out;
    for (const Atom& f : p.db.facts) out += to_string(f) + ".\n";
    for (const Atom& c : p.db.constraints) out += "constraint " + to_string(c) + ".\n";
    for (const Rule& r : p.db.rules) out += to_string(r) + "\n";
    for (const Atom& q : p.queries) out += "?- " + to_string(q) + ".\n";
    return out;
}

std::string print_rules(const std::vector<Rule>& rules) {
    std::string out;
    for (const Rule& r : rules) out += to_string(r) + "\n";
    return out;
}

}  // namespace dedb
