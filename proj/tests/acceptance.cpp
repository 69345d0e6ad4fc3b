// Acceptance gate: one PASS/FAIL line per criterion. All comparisons are
// exact; the only tolerances are the wall-clock limits below.

#include "morava/cli.hpp"
#include "morava/lemma_suite.hpp"

#include <chrono>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace morava;

namespace {

constexpr double kLemmaZeroSeconds = 5.0;
constexpr double kCriticalSliceSeconds = 1.0;
constexpr double kLanSweepSeconds = 30.0;
constexpr double kE2exSeconds = 5.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool ok = true;
    std::vector<std::string> notes;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }
    void absorb(const LemmaReport& r, const std::string& where, std::size_t shown = 3)
    {
        if (r.passed())
            return;
        ok = false;
        notes.push_back(where + ": " + std::string(lemma_command(r.id)) + " has "
            + std::to_string(r.counterexamples.size()) + " counterexample(s)");
        for (std::size_t k = 0; k < r.counterexamples.size() && k < shown; ++k) {
            const auto& c = r.counterexamples[k];
            notes.push_back("  input " + c.input.dump() + " expected " + c.expected.dump() + " got " + c.got.dump());
        }
    }
    void within(double elapsed, double limit)
    {
        if (elapsed >= limit) {
            std::ostringstream s;
            s << "runtime " << elapsed << " s exceeds " << limit << " s";
            require(false, s.str());
        }
    }
};

json run_cli(const std::vector<std::string>& args, int& code)
{
    std::ostringstream out;
    std::ostringstream err;
    code = cli::run(args, out, err);
    return json::parse(out.str(), nullptr, false);
}

Outcome lemma_zero()
{
    Outcome o;
    const auto start = Clock::now();
    int code = 0;
    const auto env = run_cli({"verify", "lemma-zero", "--p", "7", "--n", "4"}, code);
    o.within(seconds_since(start), kLemmaZeroSeconds);
    o.require(code == 0, "exit code " + std::to_string(code));
    o.require(!env.is_discarded() && env["payload"]["status"] == "pass", "report status is not pass");
    if (!env.is_discarded())
        for (const auto& c : env["payload"]["counterexamples"])
            o.notes.push_back("  " + c.dump());
    return o;
}

Outcome degree_table_74()
{
    Outcome o;
    int code = 0;
    const auto env = run_cli({"table", "--p", "7", "--n", "4"}, code);
    o.require(code == 0, "exit code " + std::to_string(code));
    if (env.is_discarded())
        return o;
    const std::vector<Int> published{1, 7, 49, -57, 8, 56, -8, -56, 57, -1, -7, -49, 0, 0, 0, 0};
    std::vector<Int> got;
    for (const auto& row : env["payload"]["rows"])
        got.push_back(row["signed_reduced"].get<Int>());
    o.require(got == published, "signed values " + json(got).dump());
    return o;
}

Outcome critical_slice()
{
    Outcome o;
    const auto start = Clock::now();
    const auto ctx = make_context(5, 3);
    const auto h = cohomology(build_slice(ctx, 9, 1));
    o.within(seconds_since(start), kCriticalSliceSeconds);
    o.require(h.dim == 0, "dim H^{9, internal 8} = " + std::to_string(h.dim));
    return o;
}

Outcome lan_sweep()
{
    Outcome o;
    const auto start = Clock::now();
    for (auto [p, n] : {std::pair<Int, int>{5, 3}, {7, 4}, {11, 4}}) {
        const auto ctx = make_context(p, n);
        const auto r = verify_lan(ctx);
        o.absorb(r, "(" + std::to_string(p) + "," + std::to_string(n) + ")");
    }
    o.within(seconds_since(start), kLanSweepSeconds);
    return o;
}

Outcome e2ex_53()
{
    Outcome o;
    const auto start = Clock::now();
    const auto r = verify_e2ex(make_context(5, 3));
    o.within(seconds_since(start), kE2exSeconds);
    o.absorb(r, "(5,3)");
    return o;
}

Outcome top_cohomology()
{
    Outcome o;
    for (auto [p, n] : {std::pair<Int, int>{5, 3}, {7, 4}}) {
        const auto ctx = make_context(p, n);
        const ExteriorComplex complex(ctx);
        const int top = n * n;
        for (Int t = 0; t < ctx.e_n(); ++t) {
            const Int dim = cohomology_dim(build_slice(complex, top, t));
            o.require(dim == (t == 0 ? 1 : 0),
                "(" + std::to_string(p) + "," + std::to_string(n) + ") dim H^{" + std::to_string(top) + ","
                    + std::to_string(t) + "} = " + std::to_string(dim));
        }
        o.absorb(verify_hs_bound(ctx), "(" + std::to_string(p) + "," + std::to_string(n) + ")");
    }
    return o;
}

// Each generator present with probability 1/8, so random triples are often
// pairwise disjoint and the products are nonzero.
Monomial random_monomial(std::mt19937_64& rng, int N)
{
    return Monomial{rng() & rng() & rng() & ((std::uint64_t{1} << N) - 1)};
}

Outcome property_suite()
{
    Outcome o;
    for (auto [p, n] : {std::pair<Int, int>{5, 3}, {7, 4}}) {
        const auto ctx = make_context(p, n);
        const std::string where = "(" + std::to_string(p) + "," + std::to_string(n) + ")";
        o.absorb(verify_d_squared(ctx), where);
        o.absorb(verify_duality(ctx), where);

        std::mt19937_64 rng(0xacce97);
        const int N = n * n;
        for (int k = 0; k < 1000; ++k) {
            const auto a = random_monomial(rng, N);
            const auto b = random_monomial(rng, N);
            const auto c = random_monomial(rng, N);
            const auto ab = multiply(a, b);
            const auto ba = multiply(b, a);
            o.require(ab.has_value() == ba.has_value(), where + " commutativity support");
            if (ab && ba)
                o.require(ab->sign == ((a.s() * b.s()) % 2 ? -ba->sign : ba->sign), where + " graded commutativity");

            std::optional<SignedMonomial> left;
            if (ab)
                if (auto abc = multiply(ab->monomial, c))
                    left = SignedMonomial{abc->monomial, abc->sign * ab->sign};
            std::optional<SignedMonomial> right;
            if (const auto bc = multiply(b, c))
                if (auto abc = multiply(a, bc->monomial))
                    right = SignedMonomial{abc->monomial, abc->sign * bc->sign};
            o.require(left == right, where + " associativity");
            if (!o.ok)
                return o;
        }
    }
    return o;
}

Outcome arithmetic_suite()
{
    Outcome o;
    for (auto [p, n] : {std::pair<Int, int>{5, 3}, {7, 4}, {11, 4}, {13, 5}}) {
        const auto ctx = make_context(p, n);
        const std::string where = "(" + std::to_string(p) + "," + std::to_string(n) + ")";
        o.absorb(verify_int(ctx), where);
        o.absorb(verify_ext_reduction(ctx), where);
    }
    const auto gamma = greek_degree(make_context(5, 3), 1);
    o.require(gamma.stem == 189, "gamma_1 stem " + std::to_string(gamma.stem));
    const auto delta = greek_degree(make_context(7, 4), 1);
    o.require(delta.stem == 4004, "delta_1 stem " + std::to_string(delta.stem));
    return o;
}

struct Criterion {
    int number;
    const char* title;
    Outcome (*check)();
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "lemma zero at (7,4), under 5 s", lemma_zero},
        {2, "degree table at (7,4)", degree_table_74},
        {3, "dim H^{9, internal 8} = 0 at (5,3), under 1 s", critical_slice},
        {4, "vanishing sweep at (5,3), (7,4), (11,4), under 30 s", lan_sweep},
        {5, "E2 classification at (5,3), under 5 s", e2ex_53},
        {6, "top cohomology at (5,3) and (7,4)", top_cohomology},
        {7, "property suite at (5,3) and (7,4)", property_suite},
        {8, "arithmetic suite", arithmetic_suite},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = Clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double elapsed = seconds_since(start);
        std::cout << "criterion " << c.number << ": " << (o.ok ? "PASS" : "FAIL") << "  " << c.title << "  ("
                  << static_cast<long>(elapsed * 1000) << " ms)\n";
        for (const auto& note : o.notes)
            std::cout << "    " << note << '\n';
        if (!o.ok)
            ++failures;
    }
    std::cout << "criterion 9: NOTE  the homotopy-theoretic statements are not computable; criteria 1-8 cover the "
                 "finite calculations they rest on\n";
    std::cout << failures << " of " << criteria.size() << " criteria failed\n";
    return failures == 0 ? 0 : 1;
}
