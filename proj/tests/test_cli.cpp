#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "dedb/parser.hpp"

// Drives the installed command-line binary and checks its output bytes.
namespace {

struct RunResult {
    int status;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string out_path = std::string(DEDB_BINARY_DIR) + "/cli_out.txt";
    std::string cmd = std::string(DEDB_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
    int rc = std::system(cmd.c_str());
    std::ifstream in(out_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

std::string sample(const std::string& name) { return std::string(DEDB_SAMPLES) + "/" + name; }

}  // namespace

TEST_CASE("check reports structure and strata") {
    RunResult r = run("check " + sample("paths.dl"));
    CHECK(r.status == 0);
    CHECK(r.out.find("base predicates: e") != std::string::npos);
    CHECK(r.out.find("derived predicates: o p") != std::string::npos);
    CHECK(r.out.find("stratifiable: yes") != std::string::npos);

    RunResult dot = run("check " + sample("paths.dl") + " --dot");
    CHECK(dot.out.find("digraph") == 0);
    CHECK(dot.out.find("\"p\" -> \"o\" [label=\"-\"") != std::string::npos);
}

TEST_CASE("query answers true and false and lists bindings") {
    CHECK(run("query " + sample("paths.dl") + " 'o(1,2)'").out == "true\n");
    CHECK(run("query " + sample("paths.dl") + " 'o(2,1)'").out == "false\n");
    CHECK(run("query " + sample("paths.dl") + " 'p(1,Y)'").out == "p(1,2)\n");
    for (const char* engine : {"iterated", "soft", "alternating", "general"})
        CHECK(run("query " + sample("paths.dl") + " 'o(1,2)' --engine " + engine).out == "true\n");
    CHECK(run("query " + sample("paths.dl") + " 'o(1,2)' --no-magic").out == "true\n");
}

TEST_CASE("propagate prints the induced deltas and the stats golden block") {
    RunResult naive = run("propagate " + sample("tc_chain.dl") + " '+e(2,3)' --mode naive --stats");
    CHECK(naive.status == 0);
    CHECK(naive.out ==
          "+p(1,3)\n"
          "+p(2,3)\n"
          "+p(2,4)\n"
          "delta_plus_p\t3\n"
          "e_new\t94\n"
          "p_new\t4101\n"
          "p_old\t4098\n"
          "total\t8296\n");

    RunResult magic = run("propagate " + sample("tc_chain.dl") + " '+e(2,3)' --mode magic --stats");
    CHECK(magic.status == 0);
    CHECK(magic.out.find("+p(1,3)\n+p(2,3)\n+p(2,4)\n") == 0);
    CHECK(magic.out.find("e_new\t2\n") != std::string::npos);
    CHECK(magic.out.find("p_new\t1\n") != std::string::npos);
    CHECK(magic.out.find("p_old\t1\n") != std::string::npos);
    CHECK(magic.out.find("total\t19\n") != std::string::npos);

    // Byte-identical across runs.
    CHECK(run("propagate " + sample("tc_chain.dl") + " '+e(2,3)' --mode magic --stats").out ==
          magic.out);
}

TEST_CASE("propagate --apply commits the update to a new program file") {
    std::string out_file = std::string(DEDB_BINARY_DIR) + "/applied.dl";
    RunResult r = run("propagate " + sample("paths.dl") + " '+e(2,3)' --apply " + out_file);
    CHECK(r.status == 0);
    dedb::Program p = dedb::parse_program([&] {
        std::ifstream in(out_file);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }());
    CHECK(p.db.facts.size() == 2);
    std::remove(out_file.c_str());
}

TEST_CASE("viewupdate prints realizations and marks dead branches in the log") {
    RunResult r = run("viewupdate " + sample("vu_constraints.dl") + " '+p(2)' --log");
    CHECK(r.status == 0);
    CHECK(r.out.find("realization 1:\ninsert r1(2)\n") != std::string::npos);
    CHECK(r.out.find("vu_minus_s(2)") != std::string::npos);
    CHECK(r.out.find("false (constraint ic(2) violated") != std::string::npos);

    RunResult r2 = run("viewupdate " + sample("vu_side_effects.dl") + " '+h(1)'");
    CHECK(r2.out == "realization 1:\ninsert p(c_new_1)\ninsert q(1)\n");

    // Deleting a constrained atom is unsatisfiable: status 2.
    RunResult r3 =
        run("viewupdate " + sample("vu_constraints.dl") + " --max-depth 4 -- '-ic(2)'");
    CHECK(r3.status == 2);
    CHECK(r3.out.find("no realization") != std::string::npos);

    // Deletions reaching a base fact realize as that deletion; '--' keeps the
    // leading minus out of option parsing.
    RunResult r4 = run("viewupdate " + sample("vu_side_effects.dl") + " -- '-p(1)'");
    CHECK(r4.out == "realization 1:\ndelete p(1)\n");
}

TEST_CASE("rewrite output parses back as a program") {
    RunResult r = run("rewrite " + sample("paths.dl") + " 'o(1,2)'");
    CHECK(r.status == 0);
    dedb::Program p = dedb::parse_program(r.out);
    CHECK(p.db.rules.size() == 7);
    CHECK(p.db.facts.size() == 1);  // the seed
    CHECK(run("rewrite " + sample("paths.dl") + " 'o(1,2)'").out == r.out);
}

TEST_CASE("user errors exit with status 1") {
    CHECK(run("query no_such_file.dl 'p(1)'").status == 1);
    CHECK(run("propagate " + sample("paths.dl") + " '+e(1,2)'").status == 1);   // ineffective
    CHECK(run("propagate " + sample("paths.dl") + " '+p(1,2)'").status == 1);   // derived
    CHECK(run("viewupdate " + sample("paths.dl") + " '+o(1,2)'").status == 1);  // already true
    CHECK(run("query " + sample("paths.dl") + " 'o(1)'").status == 1);          // arity
}
