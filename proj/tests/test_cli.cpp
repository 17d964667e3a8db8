#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "dgforge/cli.hpp"

using namespace dgforge;
using namespace dgforge::cli;

namespace {

std::string corpus(const std::string& name) { return std::string(DGFORGE_CORPUS) + "/" + name; }

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Options options(const std::string& command, const std::string& file)
{
    Options o;
    o.command = command + " " + file;
    o.input_name = file;
    o.input_digest = digest(slurp(corpus(file)));
    return o;
}

Workspace load(const std::string& file) { return load_workspace(slurp(corpus(file))); }

const nlohmann::ordered_json& fact(const Report& r, const std::string& name)
{
    for (const auto& f : r.doc["facts"])
        if (f["name"] == name)
            return f;
    FAIL("no fact " << name);
    return r.doc;
}

struct Run {
    int code;
    std::string out;
};

Run tool(const std::string& args)
{
    std::string cmd = std::string(DGFORGE_TOOL) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, p))
        out.append(buf, n);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

void check_parse_error(const std::string& text, const std::string& needle, int line)
{
    try {
        load_workspace(text);
        FAIL("expected a parse error for: " << text);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(needle) != std::string::npos);
        CHECK(e.line() == line);
    }
}

const char* kx = "field 2\n"
                 "algebra a\n"
                 "basis 1 deg 0\n"
                 "basis x deg 0\n";

} // namespace

TEST_CASE("grammar")
{
    SUBCASE("stanzas and defaults")
    {
        Workspace ws = load_workspace(std::string(kx) + "mul x x = 0\nideal m = span x\nmodule k\ngen v deg 0\n");
        const AlgebraEntry& a = ws.algebra();
        CHECK(a.algebra->dim() == 2);
        // products with 1 default to the identity
        CHECK(a.algebra->product(0, 1) == SparseVec::unit(ws.field, 1));
        CHECK(a.algebra->product(1, 1).is_zero());
        CHECK(a.ideals.at("m").cols() == 1);
        ModulePtr k = ws.module(a, "k");
        CHECK(k->dim() == 1);
        CHECK(k->act(0, 0) == SparseVec::unit(ws.field, 0));
        CHECK(k->act(0, 1).is_zero());
        CHECK(ws.module(a, "regular")->dim() == 2);
        CHECK(ws.module(a, "dual")->dim() == 2);
        CHECK(ws.module(a, "R/m")->dim() == 1);
        CHECK_THROWS_AS(ws.module(a, "R/n"), InputError);
        CHECK_THROWS_AS(ws.module(a, "nope"), InputError);
    }
    SUBCASE("coefficients, signs, comments and comma lists")
    {
        Workspace ws = load_workspace("field 3  # a comment\n"
                                      "algebra a\n"
                                      "basis 1 deg 0\n"
                                      "basis x deg 0\n"
                                      "basis y deg 0\n"
                                      "mul x x = 2*y\n"
                                      "mul x y = 0\n"
                                      "mul y x = 0\n"
                                      "mul y y = 0\n"
                                      "ideal m = span x + y, 2 * y\n");
        const DgAlgebra& a = *ws.algebra().algebra;
        CHECK(a.product(1, 1) == SparseVec::unit(ws.field, 2).scaled(Scalar(ws.field, 2L)));
        CHECK(rank(ws.algebra().ideals.at("m")) == 2);
        Workspace neg = load_workspace("field 5\nalgebra a\nbasis 1 deg 0\nbasis x deg 0\nmul x x = -1*x + x\n");
        CHECK(neg.algebra().algebra->product(1, 1).is_zero());
    }
    SUBCASE("malformed stanzas are named")
    {
        check_parse_error(std::string(kx) + "mul x x 0\n", "malformed 'mul' stanza", 5);
        check_parse_error(std::string(kx) + "basis y 0\n", "malformed 'basis' stanza", 5);
        check_parse_error(std::string(kx) + "basis y deg zero\n", "malformed 'basis' stanza", 5);
        check_parse_error(std::string(kx) + "mul x x = 2*\n", "malformed 'mul' stanza", 5);
        check_parse_error(std::string(kx) + "ideal m = x\n", "malformed 'ideal' stanza", 5);
        check_parse_error(std::string(kx) + "bogus\n", "unknown stanza 'bogus'", 5);
        check_parse_error(std::string(kx) + "gen v deg 0\n", "'gen' stanza outside a module", 5);
        check_parse_error(std::string(kx) + "module k\ngen v deg 0\nbasis y deg 0\n", "'basis' stanza inside module", 7);
        check_parse_error(std::string(kx) + "mul x z = x\n", "unknown element 'z' in 'mul' stanza", 5);
        check_parse_error(std::string(kx) + "mul x x = 0\nmul x x = x\n", "duplicate product", 6);
        check_parse_error("algebra a\nbasis 1 deg 0\n", "missing 'field' stanza", 1);
        check_parse_error("field 6\nalgebra a\nbasis 1 deg 0\n", "not a prime", 1);
    }
    SUBCASE("the column of a parse error points at the token")
    {
        try {
            load_workspace(std::string(kx) + "mul x x = 1*q\n");
            FAIL("expected an error");
        } catch (const ParseError& e) {
            CHECK(e.column() == 13);
        }
    }
    SUBCASE("invalid structures name their stanza")
    {
        // x y = y but y x = 0 and x x = 0 breaks associativity: (x x) y != x (x y)
        std::string bad = "field 2\nalgebra b\nbasis 1 deg 0\nbasis x deg 0\nbasis y deg 0\n"
                          "mul x y = y\nmul x x = 0\n";
        try {
            load_workspace(bad);
            FAIL("expected an error");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find("algebra 'b' (line 2)") != std::string::npos);
        }
        CHECK_THROWS_AS(load_workspace(std::string(kx) + "mul x x = 0\nideal m = span 1+x\n"), InputError);
        CHECK_THROWS_AS(load_workspace(std::string(kx) + "module k\ngen v deg 0\nact v x = v\n"), InputError);
        CHECK_THROWS_AS(load_workspace("field 2\nalgebra a\nbasis x deg 0\n"), InputError);
    }
}

TEST_CASE("digest")
{
    CHECK(digest("") == "fnv1a64:cbf29ce484222325");
    CHECK(digest("a") == "fnv1a64:af63dc4c8601ec8c");
    CHECK(digest("field 2\n") != digest("field 3\n"));
}

TEST_CASE("resolve reports")
{
    Workspace ws = load("kxmod2.alg");
    Options o = options("resolve", "kxmod2.alg");
    o.modules = {"k"};
    o.window = 8;
    Report r = cmd_resolve(ws, o);
    CHECK(r.exit_code == 0);
    CHECK(fact(r, "generators")["value"] == 9);
    const auto& rows = r.doc["tables"][0]["rows"];
    REQUIRE(rows.size() == 9);
    for (const auto& row : rows)
        CHECK(row[1] == 1);
    o.modules = {"regular"};
    CHECK(fact(cmd_resolve(ws, o), "generators")["value"] == 1);
}

TEST_CASE("ext reports")
{
    SUBCASE("(k, k) over F2[x]/(x^2)")
    {
        Options o = options("ext", "kxmod2.alg");
        o.modules = {"k", "k"};
        o.window = 6;
        Report r = cmd_ext(load("kxmod2.alg"), o);
        const auto& rows = r.doc["tables"][0]["rows"];
        REQUIRE(rows.size() == 7);
        for (const auto& row : rows)
            CHECK(row[1] == 1);
        CHECK(rows[5][2] == true);
    }
    SUBCASE("Ext(R, M) is H(M)")
    {
        Options o = options("ext", "kxmod3_f3.alg");
        o.modules = {"regular", "k"};
        Report r = cmd_ext(load("kxmod3_f3.alg"), o);
        for (const auto& row : r.doc["tables"][0]["rows"])
            CHECK(row[1] == (row[0] == 0 ? 1 : 0));
    }
    SUBCASE("(row, row) over M2(F2)")
    {
        Options o = options("ext", "m2.alg");
        o.modules = {"row", "row"};
        o.window = 3;
        Report r = cmd_ext(load("m2.alg"), o);
        for (const auto& row : r.doc["tables"][0]["rows"])
            if (row[2] == true)
                CHECK(row[1] == (row[0] == 0 ? 1 : 0));
        CHECK(r.doc["tables"][0]["rows"][0][0] == 0);
        CHECK(r.doc["tables"][0]["rows"][0][2] == true);
    }
}

TEST_CASE("bic reports")
{
    SUBCASE("F2[x]/(x^2) with J = k against itself")
    {
        Options o = options("bic", "kxmod2.alg");
        o.j = "k";
        o.target = "self";
        Report r = cmd_bic(load("kxmod2.alg"), o);
        CHECK(r.exit_code == 0);
        CHECK(r.doc["verdicts"][0]["value"] == "iso");
        CHECK(fact(r, "target iso")["value"] == true);
    }
    SUBCASE("over the ground field")
    {
        Options o = options("bic", "ground.alg");
        o.j = "k";
        Report r = cmd_bic(load("ground.alg"), o);
        CHECK(r.exit_code == 0);
        for (const auto& row : r.doc["tables"][0]["rows"])
            CHECK(row[1] == (row[0] == 0 ? 1 : 0));
    }
    SUBCASE("a shallow window is inconclusive")
    {
        Options o = options("bic", "kxmod2.alg");
        o.j = "k";
        o.window = 1;
        Report r = cmd_bic(load("kxmod2.alg"), o);
        CHECK(r.exit_code == 3);
        CHECK(r.doc["verdicts"][0]["value"] == "inconclusive-window");
    }
    SUBCASE("unknown target")
    {
        Options o = options("bic", "kxmod2.alg");
        o.j = "k";
        o.target = "other";
        CHECK_THROWS_AS(cmd_bic(load("kxmod2.alg"), o), InputError);
    }
}

TEST_CASE("complete and classical reports")
{
    Options o = options("complete", "kxmod2.alg");
    Report c = cmd_complete(load("kxmod2.alg"), o);
    CHECK(c.exit_code == 0);
    CHECK(c.doc["verdicts"].size() == 3);
    CHECK(fact(c, "H0 of the two Bic algebras isomorphic")["value"] == true);
    Options u = options("complete", "ut2.alg");
    Report cu = cmd_complete(load("ut2.alg"), u);
    CHECK(cu.exit_code == 0);
    CHECK(cu.doc["verdicts"].size() == 2);
    CHECK(cu.text().find("koszul side skipped") != std::string::npos);

    Options m = options("classical", "m2.alg");
    m.j = "row";
    Report rm = cmd_classical(load("m2.alg"), m);
    CHECK(rm.exit_code == 0);
    CHECK(fact(rm, "dim Bic")["value"] == 4);
    Options k = options("classical", "kxmod2.alg");
    k.j = "k";
    Report rk = cmd_classical(load("kxmod2.alg"), k);
    CHECK(rk.exit_code == 1);
    CHECK(fact(rk, "dim Bic")["value"] == 1);
    k.j = "dual";
    CHECK(cmd_classical(load("kxmod2.alg"), k).exit_code == 0);
}

TEST_CASE("text and JSON carry the same content")
{
    Options o = options("bic", "kxmod3_f3.alg");
    o.j = "k";
    o.target = "self";
    Report r = cmd_bic(load("kxmod3_f3.alg"), o);
    std::string text = r.text();
    for (const auto& f : r.doc["facts"])
        CHECK(text.find("fact " + f["name"].get<std::string>() + ": ") != std::string::npos);
    for (const auto& v : r.doc["verdicts"])
        CHECK(text.find("verdict " + v["name"].get<std::string>() + ": " + v["value"].get<std::string>()) !=
              std::string::npos);
    CHECK(text.find(r.doc["input"]["digest"].get<std::string>()) != std::string::npos);
    auto back = nlohmann::ordered_json::parse(r.json());
    CHECK(back == r.doc);
    // the schema's required keys are present
    auto schema = nlohmann::json::parse(slurp(std::string(DGFORGE_SOURCE) + "/docs/report.schema.json"));
    for (const auto& key : schema["required"])
        CHECK(r.doc.contains(key.get<std::string>()));
    CHECK(r.doc["schema"] == schema["properties"]["schema"]["const"]);
}

TEST_CASE("the tool: exit codes and determinism")
{
    std::string kxmod2 = corpus("kxmod2.alg");
    Run a = tool("resolve " + kxmod2 + " --module k --window 8");
    CHECK(a.code == 0);
    CHECK(a.out.find("fact generators: 9") != std::string::npos);
    CHECK(tool("resolve " + kxmod2 + " --module k --window 8").out == a.out);
    CHECK(tool("classical " + kxmod2 + " --j k").code == 1);
    CHECK(tool("bic " + kxmod2 + " --j k --window 1").code == 3);
    CHECK(tool("bic " + kxmod2 + " --j k --target self --format json").out.find("\"value\": \"iso\"") !=
          std::string::npos);
    Run missing = tool("resolve " + kxmod2 + " --module nope");
    CHECK(missing.code == 2);
    CHECK(missing.out.find("unknown module 'nope'") != std::string::npos);
    CHECK(tool("bic " + kxmod2).code == 2);
    CHECK(tool("resolve /nonexistent.alg --module k").code == 2);
    CHECK(tool("complete " + corpus("square_zero.alg")).code == 4);

    std::string bad = std::string(DGFORGE_BINARY_DIR) + "/malformed.alg";
    {
        std::ofstream out(bad);
        out << "field 2\nalgebra a\nbasis 1 deg 0\nbasis x deg 0\nmul x x x\n";
    }
    Run m = tool("resolve " + bad + " --module regular");
    CHECK(m.code == 2);
    CHECK(m.out.find("malformed 'mul' stanza") != std::string::npos);
    CHECK(m.out.find("line 5") != std::string::npos);
}

TEST_CASE("the generator cap comes from the environment")
{
    std::string kxmod2 = corpus("kxmod2.alg");
    std::string cmd = "env DGFORGE_GENCAP=3 " + std::string(DGFORGE_TOOL) + " resolve " + kxmod2 +
                      " --module k --window 8 > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 4);
}
