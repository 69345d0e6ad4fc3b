#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morava/exterior_complex.hpp"

#include <map>
#include <random>

using namespace morava;

namespace {

// Reference implementation on explicit generator sequences: bubble-sort
// signs and the Leibniz rule written out term by term.
using Seq = std::vector<int>;

int sort_sign(Seq& seq)
{
    int sign = 1;
    for (std::size_t a = 0; a < seq.size(); ++a)
        for (std::size_t b = 0; b + 1 < seq.size() - a; ++b)
            if (seq[b] > seq[b + 1]) {
                std::swap(seq[b], seq[b + 1]);
                sign = -sign;
            }
    return sign;
}

Monomial mask_of(const Seq& seq)
{
    Monomial m;
    for (int g : seq)
        m.bits |= std::uint64_t{1} << g;
    return m;
}

// Coefficients as integers in (-p, p), keyed by monomial.
std::map<Monomial, Int> oracle_d(const PrimeContext& ctx, Monomial m)
{
    const int n = ctx.n;
    const Seq members = m.members();
    std::map<Monomial, Int> out;
    for (std::size_t pos = 0; pos < members.size(); ++pos) {
        const auto g = GeneratorId::from_index(members[pos], n);
        for (int k = 1; k < g.i; ++k) {
            const int x = GeneratorId{k, g.j}.index(n);
            const int y = GeneratorId{g.i - k, (k + g.j) % n}.index(n);
            Seq seq(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(pos));
            seq.push_back(x);
            seq.push_back(y);
            seq.insert(seq.end(), members.begin() + static_cast<std::ptrdiff_t>(pos) + 1, members.end());
            if (mask_of(seq).s() != static_cast<int>(seq.size()))
                continue;
            int sign = (pos % 2 == 0) ? 1 : -1;
            sign *= sort_sign(seq);
            out[mask_of(seq)] += sign;
        }
    }
    std::map<Monomial, Int> reduced;
    for (const auto& [mono, c] : out)
        if (mod_floor(c, ctx.p) != 0)
            reduced[mono] = mod_floor(c, ctx.p);
    return reduced;
}

std::map<Monomial, Int> as_map(const Cochain& x) { return {x.terms().begin(), x.terms().end()}; }

Monomial mono(const PrimeContext& ctx, std::initializer_list<GeneratorId> gens) { return Monomial::of(ctx, gens); }

Monomial random_monomial(std::mt19937_64& rng, int N)
{
    return Monomial{rng() & ((N >= 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << N) - 1)};
}

} // namespace

TEST_CASE("generator degrees at (7,4)")
{
    const auto ctx = make_context(7, 4);
    CHECK(generator_degree(ctx, {1, 1}).reduced() == 7);
    CHECK(generator_degree(ctx, {3, 0}).reduced() == 57);
    CHECK(generator_degree(ctx, {3, 1}).reduced() == 399);
    CHECK(generator_degree(ctx, {3, 1}).signed_reduced() == -1);
    for (int a = 0; a < 4; ++a)
        CHECK(generator_degree(ctx, {4, a}).reduced() == 0);
    CHECK(generator_degree(ctx, {1, 0}).raw() == 12);
}

TEST_CASE("every monomial degree is divisible by q")
{
    for (auto [p, n] : {std::pair<Int, int>{5, 3}, {7, 4}, {11, 4}, {13, 5}}) {
        const auto ctx = make_context(p, n);
        for (int idx = 0; idx < ctx.generator_count(); ++idx) {
            const auto g = GeneratorId::from_index(idx, n);
            CHECK(generator_degree(ctx, g).reduced().has_value());
            CHECK(generator_degree(ctx, g).raw() % ctx.q == 0);
        }
    }
}

TEST_CASE("monomial products and signs")
{
    const auto ctx = make_context(5, 3);
    const auto h10 = mono(ctx, {{1, 0}});
    const auto h11 = mono(ctx, {{1, 1}});
    const auto h20 = mono(ctx, {{2, 0}});

    CHECK_FALSE(multiply(h10, h10).has_value());
    auto r = multiply(h11, h10);
    REQUIRE(r);
    CHECK(r->monomial == mono(ctx, {{1, 0}, {1, 1}}));
    CHECK(r->sign == -1);

    r = multiply(mono(ctx, {{1, 0}, {2, 0}}), h11);
    REQUIRE(r);
    CHECK(r->monomial == mono(ctx, {{1, 0}, {1, 1}, {2, 0}}));
    CHECK(r->sign == -1);

    // Cochain products reduce signs mod p.
    const auto prod = multiply(Cochain(ctx, h11), Cochain(ctx, h10));
    CHECK(prod.coefficient(mono(ctx, {{1, 0}, {1, 1}})) == 4);
    CHECK(multiply(Cochain(ctx, h20), Cochain(ctx, h20)).is_zero());
}

TEST_CASE("product sign agrees with permutation sorting")
{
    std::mt19937_64 rng(7);
    const auto ctx = make_context(7, 4);
    for (int trial = 0; trial < 2000; ++trial) {
        const Monomial x = random_monomial(rng, 16);
        const Monomial y = random_monomial(rng, 16);
        const auto r = multiply(x, y);
        if (!x.disjoint(y)) {
            CHECK_FALSE(r);
            continue;
        }
        Seq seq = x.members();
        for (int g : y.members())
            seq.push_back(g);
        const int sign = sort_sign(seq);
        REQUIRE(r);
        CHECK(r->sign == sign);
        CHECK(r->monomial.bits == (x.bits | y.bits));
    }
}

TEST_CASE("differential on generators")
{
    const auto ctx = make_context(7, 4);
    const ExteriorComplex cx(ctx);
    for (int j = 0; j < 4; ++j) {
        CHECK(cx.d(mono(ctx, {{1, j}})).is_zero());

        const auto d2 = cx.d(mono(ctx, {{2, j}}));
        const auto target = mono(ctx, {{1, j}, {1, (j + 1) % 4}});
        CHECK(d2.terms().size() == 1);
        // h_{1,j} h_{1,j+1} in sorted order except at j = 3 where it wraps.
        CHECK(d2.coefficient(target) == (j == 3 ? 6 : 1));

        const auto d4 = cx.d(mono(ctx, {{4, j}}));
        CHECK(d4.terms().size() == 3);
        CHECK(d4.coefficient(mono(ctx, {{1, j}, {3, (j + 1) % 4}})) != 0);
        CHECK(d4.coefficient(mono(ctx, {{2, j}, {2, (j + 2) % 4}})) != 0);
        CHECK(d4.coefficient(mono(ctx, {{3, j}, {1, (j + 3) % 4}})) != 0);
        CHECK(cx.d(d4).is_zero());
    }
}

TEST_CASE("differential matches the reference expansion")
{
    SUBCASE("every monomial at (3,2) and (5,3)")
    {
        for (auto [p, n] : {std::pair<Int, int>{3, 2}, {5, 3}}) {
            const auto ctx = make_context(p, n);
            const ExteriorComplex cx(ctx);
            for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << ctx.generator_count()); ++bits) {
                CAPTURE(bits);
                CHECK(as_map(cx.d(Monomial{bits})) == oracle_d(ctx, Monomial{bits}));
            }
        }
    }
    SUBCASE("random monomials at (7,4) and (13,5)")
    {
        std::mt19937_64 rng(11);
        for (auto [p, n] : {std::pair<Int, int>{7, 4}, {13, 5}}) {
            const auto ctx = make_context(p, n);
            const ExteriorComplex cx(ctx);
            for (int trial = 0; trial < 500; ++trial) {
                const auto m = random_monomial(rng, ctx.generator_count());
                CHECK(as_map(cx.d(m)) == oracle_d(ctx, m));
                CHECK(cx.d(m) == differential(ctx, m));
            }
        }
    }
}

TEST_CASE("d squared vanishes and d is homogeneous")
{
    std::mt19937_64 rng(3);
    for (auto [p, n] : {std::pair<Int, int>{3, 1}, {3, 2}, {5, 3}, {7, 4}, {11, 4}, {13, 5}}) {
        const auto ctx = make_context(p, n);
        const ExteriorComplex cx(ctx);
        const int N = ctx.generator_count();
        auto check = [&](Monomial m) {
            const auto dm = cx.d(m);
            CHECK(dm.s() == m.s() + 1);
            CHECK(dm.t_reduced() == cx.degree(m));
            for (const auto& [term, c] : dm.terms()) {
                CHECK(cx.degree(term) == cx.degree(m));
                CHECK(term.s() == m.s() + 1);
            }
            CHECK(cx.d(dm).is_zero());
        };
        for (int g = 0; g < N; ++g)
            check(Monomial::generator(g));
        for (int trial = 0; trial < 1000; ++trial)
            check(random_monomial(rng, N));
    }
}

TEST_CASE("d is a graded derivation")
{
    std::mt19937_64 rng(5);
    const auto ctx = make_context(7, 4);
    const ExteriorComplex cx(ctx);
    for (int trial = 0; trial < 300; ++trial) {
        const auto x = random_monomial(rng, 16);
        const auto y = Monomial{random_monomial(rng, 16).bits & ~x.bits};
        const Cochain cxm(ctx, x), cym(ctx, y);
        Cochain rhs = multiply(cx.d(cxm), cym);
        rhs += multiply(cxm, cx.d(cym)).scaled(x.s() % 2 == 0 ? 1 : -1);
        CHECK(cx.d(multiply(cxm, cym)) == rhs);
    }
}

TEST_CASE("products are associative and graded commutative")
{
    std::mt19937_64 rng(9);
    for (auto [p, n] : {std::pair<Int, int>{5, 3}, {7, 4}}) {
        const auto ctx = make_context(p, n);
        const int N = ctx.generator_count();
        for (int trial = 0; trial < 500; ++trial) {
            // Sparse factors so that many triples are disjoint.
            auto pick = [&] { return Monomial{random_monomial(rng, N).bits & random_monomial(rng, N).bits}; };
            const Cochain x(ctx, pick()), y(ctx, pick()), z(ctx, pick());
            CHECK(multiply(multiply(x, y), z) == multiply(x, multiply(y, z)));
            const int sign = (x.s() * y.s()) % 2 == 0 ? 1 : -1;
            CHECK(multiply(x, y) == multiply(y, x).scaled(sign));
        }
    }
}

TEST_CASE("dual and top class")
{
    for (auto [p, n] : {std::pair<Int, int>{3, 1}, {5, 3}, {7, 4}}) {
        const auto ctx = make_context(p, n);
        const ExteriorComplex cx(ctx);
        const auto g = top_class(ctx);
        CHECK(g.s() == ctx.generator_count());
        CHECK(cx.degree(g) == 0);
        CHECK(dual(ctx, g) == SignedMonomial{Monomial{}, 1});
        CHECK(dual(ctx, Monomial{}) == SignedMonomial{g, 1});
    }
    CHECK(top_class(make_context(3, 1)) == Monomial::of(make_context(3, 1), {{1, 0}}));

    std::mt19937_64 rng(13);
    const auto ctx = make_context(7, 4);
    const ExteriorComplex cx(ctx);
    const auto g = top_class(ctx);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto m = random_monomial(rng, 16);
        const auto star = dual(ctx, m);
        CHECK(dual(ctx, star.monomial).monomial == m);
        const auto prod = multiply(star.monomial, m);
        REQUIRE(prod);
        CHECK(prod->monomial == g);
        CHECK(prod->sign * star.sign == 1);
        CHECK(star.monomial.s() == 16 - m.s());
        CHECK(cx.degree(star.monomial) == mod_floor(-cx.degree(m), 400));
    }

    const auto a01 = dual(ctx, Monomial::of(ctx, {{3, 1}, {4, 0}, {4, 1}})).monomial;
    CHECK(a01.s() == 13);
    CHECK(cx.degree(a01) == 1);
}

TEST_CASE("basis enumeration")
{
    const auto c74 = make_context(7, 4);
    const ExteriorComplex cx(c74);
    const auto basis = enumerate_basis(c74, 3, -1);
    CHECK(basis.size() == 21);
    CHECK(cx.basis(3, 399) == basis);
    CHECK(std::is_sorted(basis.begin(), basis.end()));
    for (auto m : basis) {
        CHECK(m.s() == 3);
        CHECK(cx.degree(m) == 399);
    }

    for (auto [p, n] : {std::pair<Int, int>{3, 1}, {5, 3}, {7, 4}}) {
        const auto ctx = make_context(p, n);
        CHECK(enumerate_basis(ctx, 0, 0) == std::vector<Monomial>{Monomial{}});
        CHECK(enumerate_basis(ctx, 0, 1 % ctx.e_n()).size() == (ctx.e_n() == 1 ? 1U : 0U));
        CHECK_THROWS_AS(enumerate_basis(ctx, ctx.generator_count() + 1, 0), DomainError);
        CHECK_THROWS_AS(enumerate_basis(ctx, -1, 0), DomainError);
    }
    const auto c53 = make_context(5, 3);
    CHECK(enumerate_basis(c53, 9, 0) == std::vector<Monomial>{top_class(c53)});
}

TEST_CASE("indexed basis agrees with streaming enumeration, and counts are dual")
{
    for (auto [p, n] : {std::pair<Int, int>{5, 3}, {7, 4}}) {
        const auto ctx = make_context(p, n);
        const ExteriorComplex cx(ctx);
        const int N = ctx.generator_count();
        std::size_t total = 0;
        for (int s = 0; s <= N; ++s)
            for (Int t = 0; t < ctx.e_n(); ++t) {
                const auto size = cx.basis_size(s, t);
                total += size;
                CHECK(size == cx.basis_size(N - s, -t));
                if (s % 5 == 0 && t % 7 == 0)
                    CHECK(cx.basis(s, t) == enumerate_basis(ctx, s, t));
            }
        CHECK(total == (std::size_t{1} << N));
    }
}
