#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morava/cli.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;

    json envelope() const { return json::parse(out); }
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = morava::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

} // namespace

TEST_CASE("verify lemma-zero")
{
    const auto r = run({"verify", "lemma-zero", "--p", "7", "--n", "4"});
    REQUIRE(r.code == 0);
    const auto e = r.envelope();
    CHECK(e["tool_version"] == morava::cli::kToolVersion);
    CHECK(e["status"] == 0);
    CHECK(e["params"]["p"] == 7);
    CHECK(e["params"]["lemma"] == "lemma-zero");
    CHECK(e["payload"]["status"] == "pass");
    CHECK(e["payload"]["counterexamples"].empty());
}

TEST_CASE("verify reports failures with exit code 1")
{
    const auto r = run({"verify", "e2ex", "--p", "5", "--n", "3"});
    CHECK(r.code == 1);
    const auto e = r.envelope();
    CHECK(e["status"] == 1);
    CHECK(e["payload"]["status"] == "fail");
    CHECK_FALSE(e["payload"]["counterexamples"].empty());
}

TEST_CASE("cohomology")
{
    auto r = run({"cohomology", "--p", "5", "--n", "3", "--s", "9", "--t", "1"});
    REQUIRE(r.code == 0);
    auto p = r.envelope()["payload"];
    CHECK(p["dim"] == 0);
    CHECK(p["t_internal"] == 8);

    r = run({"cohomology", "--p", "5", "--n", "3", "--s", "9", "--t", "8", "--raw"});
    REQUIRE(r.code == 0);
    CHECK(r.envelope()["payload"]["t_reduced"] == 1);

    r = run({"cohomology", "--p", "5", "--n", "3", "--s", "9", "--t", "3", "--raw"});
    REQUIRE(r.code == 0);
    p = r.envelope()["payload"];
    CHECK(p["dim"] == 0);
    CHECK(p["mechanism"] == "degree_not_divisible_by_q");

    r = run({"cohomology", "--p", "5", "--n", "3", "--s", "0", "--t", "0"});
    REQUIRE(r.code == 0);
    p = r.envelope()["payload"];
    CHECK(p["dim"] == 1);
    CHECK(p["representatives"].size() == 1);

    r = run({"cohomology", "--p", "5", "--n", "3", "--s", "12", "--t", "0"});
    REQUIRE(r.code == 0);
    CHECK(r.envelope()["payload"]["mechanism"] == "beyond_top_degree");
}

TEST_CASE("greek")
{
    const auto r = run({"greek", "--p", "5", "--n", "3", "--s", "1"});
    REQUIRE(r.code == 0);
    const auto p = r.envelope()["payload"];
    CHECK(p["t"] == 192);
    CHECK(p["stem"] == 189);
    CHECK(p["cohomological"] == 3);
}

TEST_CASE("scan")
{
    auto r = run({"scan", "--p", "3", "--n", "1"});
    REQUIRE(r.code == 0);
    CHECK(r.envelope()["payload"]["dims"] == json::parse("[[1],[1]]"));

    r = run({"scan", "--p", "5", "--n", "3"});
    REQUIRE(r.code == 0);
    const auto dims = r.envelope()["payload"]["dims"];
    REQUIRE(dims.size() == 10);
    for (const auto& row : dims)
        CHECK(row.size() == 31);
    // Top degree: only the class of the top monomial, in internal degree 0.
    CHECK(dims[9][0] == 1);
    int top_total = 0;
    for (const auto& v : dims[9])
        top_total += v.get<int>();
    CHECK(top_total == 1);
    // Euler characteristic of the whole complex is (1 - 1)^9 = 0.
    int chi = 0;
    for (std::size_t s = 0; s < dims.size(); ++s)
        for (const auto& v : dims[s])
            chi += (s % 2 ? -1 : 1) * v.get<int>();
    CHECK(chi == 0);

    r = run({"scan", "--p", "7", "--n", "4", "--s-min", "12", "--s-max", "16"});
    REQUIRE(r.code == 0);
    const auto p = r.envelope()["payload"];
    CHECK(p["s"] == json::parse("[12,13,14,15,16]"));
    CHECK(p["dims"][4][0] == 1);
    CHECK(p["dims"][1][1] == 0);
}

TEST_CASE("scan over the limit needs --t")
{
    auto r = run({"scan", "--p", "13", "--n", "5"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--scan-limit") != std::string::npos);
    CHECK(r.out.empty());

    r = run({"scan", "--p", "13", "--n", "5", "--t", "0", "--s-min", "24", "--s-max", "25"});
    REQUIRE(r.code == 0);
    CHECK(r.envelope()["payload"]["dims"][1] == json::parse("[1]"));
}

TEST_CASE("usage errors exit 2")
{
    CHECK(run({}).code == 2);
    CHECK(run({"cohomology", "--p", "5"}).code == 2);
    CHECK(run({"cohomology", "--p", "five", "--n", "3", "--s", "0", "--t", "0"}).code == 2);
    CHECK(run({"cohomology", "--p", "5", "--n", "3", "--t", "0"}).code == 2);
    CHECK(run({"greek", "--p", "9", "--n", "2", "--s", "1"}).code == 2);
    CHECK(run({"greek", "--p", "5", "--n", "5", "--s", "1"}).code == 2);
    CHECK(run({"verify", "nonsense", "--p", "5", "--n", "3"}).code == 2);
    CHECK(run({"table", "--p", "5", "--n", "3", "--format", "xml"}).code == 2);
    CHECK(run({"greek", "--p", "5", "--n", "3", "--s", "1", "--format", "tsv"}).code == 2);
    CHECK(run({"lambda", "--p", "5", "--n", "3", "--exponents", "1,x,1"}).code == 2);
    CHECK(run({"verify", "lan", "--p", "3", "--n", "2"}).code == 2);
    CHECK(run({"cohomology", "--p", "5", "--n", "3", "--s", "1", "--t", "0", "--jobs", "0"}).code == 2);

    const auto r = run({"basis", "--p", "5", "--n", "3", "--s", "20", "--t", "0"});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("table")
{
    const auto r = run({"table", "--p", "7", "--n", "4"});
    REQUIRE(r.code == 0);
    const auto rows = r.envelope()["payload"]["rows"];
    REQUIRE(rows.size() == 16);
    CHECK(rows[0]["generator"] == "1,0");
    CHECK(rows[3]["signed_reduced"] == -57);
    CHECK(rows[3]["reduced"] == 343);
    CHECK(rows[15]["reduced"] == 0);

    const auto tsv = run({"table", "--p", "5", "--n", "3", "--format", "tsv"});
    REQUIRE(tsv.code == 0);
    CHECK(tsv.out == "1\t0\t1\n1\t1\t5\n1\t2\t25\n2\t0\t6\n2\t1\t30\n2\t2\t26\n3\t0\t0\n3\t1\t0\n3\t2\t0\n");
}

TEST_CASE("tsv outputs")
{
    auto r = run({"scan", "--p", "3", "--n", "1", "--format", "tsv"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "1\n1\n");

    r = run({"basis", "--p", "7", "--n", "4", "--s", "3", "--t", "-1", "--format", "tsv"});
    REQUIRE(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 21);

    r = run({"lambda", "--p", "5", "--n", "3", "--exponents", "1,1,1", "--format", "tsv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("0\t0\t0\n", 0) == 0);
    CHECK(r.out.find("59\t3\t56\n") != std::string::npos);
}

TEST_CASE("lambda and shift")
{
    auto r = run({"lambda", "--p", "5", "--n", "3", "--exponents", "1,1,1"});
    REQUIRE(r.code == 0);
    CHECK(r.envelope()["payload"]["elements"].size() == 8);

    r = run({"shift", "--p", "5", "--n", "3", "--exponents", "1,2,1"});
    REQUIRE(r.code == 0);
    const auto p = r.envelope()["payload"];
    CHECK(p["d_J"] == 67);
    CHECK(p["d_I"] == 59);
    CHECK(p["V_J"] == "v_1");
    CHECK(p["V_J_degree"] == 8);
}

TEST_CASE("output is deterministic across runs and thread counts")
{
    const std::vector<std::vector<std::string>> commands{
        {"scan", "--p", "5", "--n", "3"},
        {"verify", "lan", "--p", "7", "--n", "4"},
        {"verify", "hs-bound", "--p", "5", "--n", "3"},
        {"cohomology", "--p", "7", "--n", "4", "--s", "13", "--t", "1"},
    };
    for (const auto& cmd : commands) {
        CAPTURE(cmd[0]);
        auto one = cmd;
        one.insert(one.end(), {"--jobs", "1"});
        auto many = cmd;
        many.insert(many.end(), {"--jobs", "4"});
        const auto a = run(one);
        const auto b = run(one);
        const auto c = run(many);
        CHECK(a.out == b.out);
        CHECK(a.out == c.out);
        CHECK(a.code == c.code);
    }
}
