#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dedb/errors.hpp"
#include "dedb/magic.hpp"
#include "dedb/operators.hpp"
#include "dedb/parser.hpp"
#include "dedb/propagate.hpp"
#include "dedb/stratify.hpp"
#include "dedb/viewupdate.hpp"

namespace {

using namespace dedb;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Program load(const std::string& path) { return parse_program(slurp(path)); }

void print_stats(const std::map<std::string, std::size_t>& by_relation, std::size_t total) {
    for (const auto& [rel, n] : by_relation) std::cout << rel << "\t" << n << "\n";
    std::cout << "total\t" << total << "\n";
}

void print_stats(const EvalStats& stats) {
    std::map<std::string, std::size_t> sorted(stats.derived_by_pred.begin(),
                                              stats.derived_by_pred.end());
    print_stats(sorted, stats.derived_total());
}

int cmd_check(const std::string& file, bool dot) {
    Program p = load(file);
    if (dot) {
        std::cout << build_dependency_graph(p.db.rules).to_dot();
        return 0;
    }
    std::set<std::string> base(base_predicates(p.db).begin(), base_predicates(p.db).end());
    std::set<std::string> derived(derived_predicates(p.db.rules).begin(),
                                  derived_predicates(p.db.rules).end());
    auto join = [](const std::set<std::string>& s) {
        std::string out;
        for (const std::string& x : s) out += (out.empty() ? "" : " ") + x;
        return out.empty() ? std::string("(none)") : out;
    };
    std::cout << "facts: " << p.db.facts.size() << "\n";
    std::cout << "rules: " << p.db.rules.size() << "\n";
    std::cout << "constraints: " << p.db.constraints.size() << "\n";
    std::cout << "base predicates: " << join(base) << "\n";
    std::cout << "derived predicates: " << join(derived) << "\n";
    StratifyResult s = stratification(p.db.rules);
    if (s.ok) {
        std::cout << "stratifiable: yes (" << s.strat.partition.layers.size() << " strata)\n";
        std::map<int, std::set<std::string>> by_stratum;
        for (const std::string& d : derived) by_stratum[s.strat.stratum.at(d)].insert(d);
        for (const auto& [level, preds] : by_stratum)
            std::cout << "stratum " << level << ": " << join(preds) << "\n";
    } else {
        std::cout << "stratifiable: no\nnegative cycle: " << s.witness_text << "\n";
    }
    return 0;
}

int cmd_query(const std::string& file, const std::string& atom_text, const std::string& engine,
              bool no_magic, bool stats) {
    Program p = load(file);
    Atom query = parse_atom(atom_text);

    bool derivable = false;
    std::vector<Atom> witnesses;

    auto collect = [&](const FactStore& m) {
        for (const Atom& a : m.definite_of(query.pred)) {
            bool match = true;
            for (std::size_t i = 0; i < query.args.size(); ++i)
                if (!query.args[i].is_var() && !(query.args[i] == a.args[i])) match = false;
            if (match) witnesses.push_back(a);
        }
        std::sort(witnesses.begin(), witnesses.end());
        derivable = query.ground() ? m.contains_definite(query) : !witnesses.empty();
    };

    if (engine == "general") {
        StateModel sm = fixpoint_state_model(p.db);
        collect(sm.state);
        if (stats) print_stats(sm.stats);
    } else if (engine == "iterated") {
        ModelResult m = iterated_fixpoint_model(p.db);
        collect(m.positive);
        if (stats) print_stats(m.stats);
    } else if (no_magic) {
        ModelResult m = engine == "alternating"
                            ? alternating_fixpoint_model(p.db)
                            : soft_fixpoint(require_stratification(p.db.rules).partition,
                                            FactStore::of_atoms(p.db.facts));
        collect(m.positive);
        if (stats) print_stats(m.stats);
    } else {
        QueryAnswer ans = answer_query(
            p.db, query, engine == "alternating" ? QueryEngine::Alternating : QueryEngine::Soft);
        derivable = ans.derivable;
        witnesses = ans.witnesses;
        if (stats) print_stats(ans.stats);
    }

    if (query.ground()) {
        std::cout << (derivable ? "true" : "false") << "\n";
    } else {
        for (const Atom& w : witnesses) std::cout << to_string(w) << "\n";
        if (witnesses.empty()) std::cout << "(no answers)\n";
    }
    return 0;
}

int cmd_propagate(const std::string& file, const std::vector<std::string>& request_texts,
                  const std::string& mode, bool stats, const std::string& apply_path) {
    Program p = load(file);
    DeltaSet update;
    for (const std::string& text : request_texts) {
        Request r = parse_request(text);
        if (r.kind != RequestKind::BaseUpdate)
            throw RequestError("propagate expects base updates, got: " + text);
        validate_request(r, p.db);
        (r.insert ? update.insertions : update.deletions).push_back(r.atom);
    }
    PropagationResult res = propagate_update(
        p.db, update, mode == "magic" ? PropagationMode::Magic : PropagationMode::Naive);

    for (const Atom& a : res.induced.insertions) std::cout << "+" << to_string(a) << "\n";
    for (const Atom& a : res.induced.deletions) std::cout << "-" << to_string(a) << "\n";
    if (res.induced.empty()) std::cout << "(no induced changes)\n";
    if (stats) print_stats(res.generated_by_relation, res.generated_total);

    if (!apply_path.empty()) {
        std::set<Atom> facts(p.db.facts.begin(), p.db.facts.end());
        for (const Atom& a : update.insertions) facts.insert(a);
        for (const Atom& a : update.deletions) facts.erase(a);
        Program committed = p;
        committed.db.facts.assign(facts.begin(), facts.end());
        std::ofstream out(apply_path);
        if (!out) throw Error("cannot write file: " + apply_path);
        out << print_program(canonical(std::move(committed)));
    }
    return 0;
}

int cmd_viewupdate(const std::string& file, const std::string& request_text, int max_depth,
                   bool all_depths, bool show_log) {
    Program p = load(file);
    Request r = parse_request(request_text);
    validate_request(r, p.db);

    SolveOptions opts;
    opts.max_depth = max_depth;
    opts.stop_at_first_solution_depth = !all_depths;
    SolveResult res = solve_view_update(p.db, {r.insert, r.atom}, opts);

    if (show_log)
        for (const std::string& line : res.log) std::cout << "log: " << line << "\n";

    if (res.realizations.empty()) {
        if (res.depth_exhausted)
            std::cout << "no realization found within depth " << max_depth << "\n";
        else
            std::cout << "no realization exists at the explored depths\n";
        return 2;
    }
    for (std::size_t i = 0; i < res.realizations.size(); ++i) {
        std::cout << "realization " << i + 1 << ":\n";
        for (const Atom& a : res.realizations[i].insertions)
            std::cout << "insert " << to_string(a) << "\n";
        for (const Atom& a : res.realizations[i].deletions)
            std::cout << "delete " << to_string(a) << "\n";
        if (i + 1 < res.realizations.size()) std::cout << "\n";
    }
    return 0;
}

int cmd_rewrite(const std::string& file, const std::string& query_text) {
    Program p = load(file);
    Atom query = parse_atom(query_text);
    AdornedRuleSet ad = adorn(p.db.rules, query);
    if (ad.query_pred.empty()) {
        std::cout << "% query over base predicate " << query.pred << "; nothing to rewrite\n";
        return 0;
    }
    MagicProgram mp = magic_rewrite(ad, query);
    std::cout << to_string(mp.seed) << ".\n";
    std::cout << print_rules(mp.rules);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dedb - a small deductive database engine"};
    app.require_subcommand(1);

    std::string file, atom_text, engine = "soft", mode = "naive", apply_path;
    std::vector<std::string> requests;
    bool dot = false, no_magic = false, stats = false, show_log = false, all_depths = false;
    int max_depth = 10;

    CLI::App* check = app.add_subcommand("check", "Parse a program and report its structure");
    check->add_option("file", file)->required();
    check->add_flag("--dot", dot, "Dump the dependency graph in DOT form");

    CLI::App* query = app.add_subcommand("query", "Answer a query against a program");
    query->add_option("file", file)->required();
    query->add_option("atom", atom_text, "Query atom, e.g. 'o(1,2)' or 'p(1,Y)'")->required();
    query->add_option("--engine", engine, "iterated|soft|alternating|general")
        ->check(CLI::IsMember({"iterated", "soft", "alternating", "general"}));
    query->add_flag("--no-magic", no_magic, "Evaluate the full program instead of rewriting");
    query->add_flag("--stats", stats, "Print generated-fact counts");

    CLI::App* propagate = app.add_subcommand("propagate", "Propagate base updates");
    propagate->add_option("file", file)->required();
    propagate->add_option("requests", requests, "Updates like '+e(2,3)' or '-s(2)'")->required();
    propagate->add_option("--mode", mode, "naive|magic")->check(CLI::IsMember({"naive", "magic"}));
    propagate->add_flag("--stats", stats, "Print generated-fact counts");
    propagate->add_option("--apply", apply_path, "Write the updated program to this file");

    CLI::App* viewupdate = app.add_subcommand("viewupdate", "Translate a view update request");
    viewupdate->add_option("file", file)->required();
    viewupdate->add_option("request", atom_text, "Request like '+p(2)' or '-q(1)'")->required();
    viewupdate->add_option("--max-depth", max_depth, "Alternation depth bound");
    viewupdate->add_flag("--all-depths", all_depths, "Collect realizations up to the bound");
    viewupdate->add_flag("--log", show_log, "Print the search log");

    CLI::App* rewrite = app.add_subcommand("rewrite", "Print the magic-rewritten program");
    rewrite->add_option("file", file)->required();
    rewrite->add_option("query", atom_text, "Query atom")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check(file, dot);
        if (query->parsed()) return cmd_query(file, atom_text, engine, no_magic, stats);
        if (propagate->parsed()) return cmd_propagate(file, requests, mode, stats, apply_path);
        if (viewupdate->parsed())
            return cmd_viewupdate(file, atom_text, max_depth, all_depths, show_log);
        if (rewrite->parsed()) return cmd_rewrite(file, atom_text);
    } catch (const InconsistencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
