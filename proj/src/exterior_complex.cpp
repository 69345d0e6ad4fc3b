#include "morava/exterior_complex.hpp"

#include <stdexcept>

namespace morava {

namespace {

    std::uint64_t below_mask(int index)
    {
        return index >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << index) - 1;
    }

    std::uint64_t full_mask(int N) { return N >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << N) - 1; }

    struct DTerm {
        int first;
        int second;
    };

    // d(h_{i,j}) = sum_k h_{k,j} h_{i-k,k+j}, each term as an ordered pair.
    std::vector<std::vector<DTerm>> build_d_terms(const PrimeContext& ctx)
    {
        const int n = ctx.n;
        std::vector<std::vector<DTerm>> terms(static_cast<std::size_t>(n * n));
        for (int i = 1; i <= n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 1; k < i; ++k) {
                    GeneratorId a{k, j};
                    GeneratorId b{i - k, (k + j) % n};
                    terms[GeneratorId{i, j}.index(n)].push_back({a.index(n), b.index(n)});
                }
        return terms;
    }

    // Leibniz rule: d(x_1 ... x_s) = sum_k (-1)^k x_1 .. d(x_k) .. x_s with the
    // positions k counted from 0 along the sorted members.
    template <class Terms>
    void apply_d(Monomial m, const Terms& d_terms, Int coefficient, Cochain& out)
    {
        const Int p = out.prime();
        int position = 0;
        for (std::uint64_t rest = m.bits; rest; rest &= rest - 1, ++position) {
            const int k = std::countr_zero(rest);
            const std::uint64_t others = m.bits & ~(std::uint64_t{1} << k);
            const std::uint64_t left = m.bits & below_mask(k);
            const std::uint64_t right = m.bits & ~below_mask(k + 1);
            for (const auto& term : d_terms[k]) {
                const std::uint64_t pair = (std::uint64_t{1} << term.first) | (std::uint64_t{1} << term.second);
                if (others & pair)
                    continue;
                int inversions = position + (term.first > term.second ? 1 : 0);
                for (int g : {term.first, term.second}) {
                    inversions += std::popcount(left & ~below_mask(g + 1));
                    inversions += std::popcount(right & below_mask(g));
                }
                const Int sign = (inversions % 2 == 0) ? 1 : p - 1;
                out.add(Monomial{others | pair}, sign * coefficient % p);
            }
        }
    }

} // namespace

std::vector<int> Monomial::members() const
{
    std::vector<int> out;
    for (std::uint64_t rest = bits; rest; rest &= rest - 1)
        out.push_back(std::countr_zero(rest));
    return out;
}

Monomial Monomial::of(const PrimeContext& ctx, std::initializer_list<GeneratorId> gens)
{
    Monomial m;
    for (const auto& g : gens) {
        if (g.i < 1 || g.i > ctx.n)
            throw DomainError("generator first index out of range");
        const GeneratorId norm{g.i, static_cast<int>(mod_floor(g.j, ctx.n))};
        const auto bit = std::uint64_t{1} << norm.index(ctx.n);
        if (m.bits & bit)
            throw DomainError("repeated generator in a square-free monomial");
        m.bits |= bit;
    }
    return m;
}

std::string to_string(const PrimeContext& ctx, Monomial m)
{
    if (m.bits == 0)
        return "1";
    std::string out;
    for (int idx : m.members()) {
        const auto g = GeneratorId::from_index(idx, ctx.n);
        out += "h" + std::to_string(g.i) + std::to_string(g.j);
    }
    return out;
}

int product_sign(Monomial x, Monomial y)
{
    int inversions = 0;
    for (std::uint64_t rest = y.bits; rest; rest &= rest - 1) {
        const int b = std::countr_zero(rest);
        inversions += std::popcount(x.bits & ~below_mask(b + 1));
    }
    return inversions % 2 == 0 ? 1 : -1;
}

std::optional<SignedMonomial> multiply(Monomial x, Monomial y)
{
    if (!x.disjoint(y))
        return std::nullopt;
    return SignedMonomial{Monomial{x.bits | y.bits}, product_sign(x, y)};
}

Cochain::Cochain(Int p, Int e_n, int s, Int t_reduced)
    : p_(p), e_n_(e_n), s_(s), t_(mod_floor(t_reduced, e_n))
{
}

Cochain::Cochain(const PrimeContext& ctx, int s, Int t_reduced)
    : Cochain(ctx.p, ctx.e_n(), s, t_reduced)
{
}

Cochain::Cochain(const PrimeContext& ctx, Monomial m, Int coefficient)
    : Cochain(ctx, m.s(), reduced_degree(ctx, m))
{
    add(m, coefficient);
}

Int Cochain::coefficient(Monomial m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
}

void Cochain::add(Monomial m, Int c)
{
    if (m.s() != s_)
        throw std::logic_error("cochain term has the wrong cohomological degree");
    c = mod_floor(c, p_);
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second = (it->second + c) % p_;
        if (it->second == 0)
            terms_.erase(it);
    }
}

Cochain& Cochain::operator+=(const Cochain& o)
{
    if (o.p_ != p_ || o.s_ != s_ || o.t_ != t_)
        throw std::logic_error("adding cochains of different bidegree");
    for (const auto& [m, c] : o.terms_)
        add(m, c);
    return *this;
}

Cochain Cochain::scaled(Int c) const
{
    Cochain r = *this;
    r.terms_.clear();
    for (const auto& [m, v] : terms_)
        r.add(m, v * mod_floor(c, p_));
    return r;
}

bool Cochain::operator==(const Cochain& o) const
{
    return p_ == o.p_ && s_ == o.s_ && t_ == o.t_ && terms_ == o.terms_;
}

Cochain multiply(const Cochain& x, const Cochain& y)
{
    if (x.prime() != y.prime() || x.e_n() != y.e_n())
        throw std::logic_error("multiplying cochains over different contexts");
    Cochain out(x.prime(), x.e_n(), x.s() + y.s(), x.t_reduced() + y.t_reduced());
    for (const auto& [mx, cx] : x.terms())
        for (const auto& [my, cy] : y.terms()) {
            auto prod = multiply(mx, my);
            if (!prod)
                continue;
            out.add(prod->monomial, (prod->sign > 0 ? 1 : x.prime() - 1) * (cx * cy % x.prime()));
        }
    return out;
}

InternalDegree generator_degree(const PrimeContext& ctx, GeneratorId g)
{
    if (g.i < 1 || g.i > ctx.n || g.j < 0 || g.j >= ctx.n)
        throw DomainError("generator index out of range");
    return InternalDegree(ctx, mul_mod(2 * ipow(ctx.p, g.j), ipow(ctx.p, g.i) - 1, ctx.period));
}

Int reduced_degree(const PrimeContext& ctx, Monomial m)
{
    Int t = 0;
    for (int idx : m.members()) {
        const auto g = GeneratorId::from_index(idx, ctx.n);
        t = (t + mul_mod(ipow(ctx.p, g.j), ctx.e[g.i], ctx.e_n())) % ctx.e_n();
    }
    return t;
}

Cochain differential(const PrimeContext& ctx, Monomial m)
{
    const auto terms = build_d_terms(ctx);
    Cochain out(ctx, m.s() + 1, reduced_degree(ctx, m));
    apply_d(m, terms, 1, out);
    return out;
}

Cochain differential(const PrimeContext& ctx, const Cochain& x)
{
    const auto terms = build_d_terms(ctx);
    Cochain out(ctx, x.s() + 1, x.t_reduced());
    for (const auto& [m, c] : x.terms())
        apply_d(m, terms, c, out);
    return out;
}

Monomial top_class(const PrimeContext& ctx)
{
    return Monomial{full_mask(ctx.generator_count())};
}

SignedMonomial dual(const PrimeContext& ctx, Monomial m)
{
    const Monomial complement{top_class(ctx).bits & ~m.bits};
    return SignedMonomial{complement, product_sign(complement, m)};
}

std::vector<Monomial> enumerate_basis(const PrimeContext& ctx, int s, Int t_reduced)
{
    const int N = ctx.generator_count();
    if (s < 0 || s > N)
        throw DomainError("cohomological degree " + std::to_string(s) + " outside [0, n^2]");
    const Int t = mod_floor(t_reduced, ctx.e_n());
    std::vector<Int> gdeg(static_cast<std::size_t>(N));
    for (int idx = 0; idx < N; ++idx) {
        const auto g = GeneratorId::from_index(idx, ctx.n);
        gdeg[idx] = mul_mod(ipow(ctx.p, g.j), ctx.e[g.i], ctx.e_n());
    }

    std::vector<Monomial> out;
    if (s == 0) {
        if (t == 0)
            out.push_back(Monomial{});
        return out;
    }
    const std::uint64_t last = full_mask(N) & ~below_mask(N - s);
    std::uint64_t mask = below_mask(s);
    while (true) {
        Int deg = 0;
        for (std::uint64_t rest = mask; rest; rest &= rest - 1)
            deg += gdeg[std::countr_zero(rest)];
        if (deg % ctx.e_n() == t)
            out.push_back(Monomial{mask});
        if (mask == last)
            break;
        // Gosper: next mask with the same popcount.
        const std::uint64_t low = mask & -mask;
        const std::uint64_t ripple = mask + low;
        mask = ripple | (((mask ^ ripple) >> 2) / low);
    }
    return out;
}

ExteriorComplex::ExteriorComplex(PrimeContext ctx)
    : ctx_(std::move(ctx)), N_(ctx_.generator_count())
{
    gen_degree_.resize(static_cast<std::size_t>(N_));
    for (int idx = 0; idx < N_; ++idx) {
        const auto g = GeneratorId::from_index(idx, ctx_.n);
        gen_degree_[idx] = mul_mod(ipow(ctx_.p, g.j), ctx_.e[g.i], ctx_.e_n());
    }
    for (const auto& row : build_d_terms(ctx_)) {
        auto& dst = d_terms_.emplace_back();
        for (const auto& t : row)
            dst.push_back({t.first, t.second});
    }

    eager_ = N_ <= kEagerLimit && ctx_.e_n() <= (Int{1} << 20);
    if (!eager_)
        return;
    index_.assign(static_cast<std::size_t>(N_) + 1,
        std::vector<std::vector<Monomial>>(static_cast<std::size_t>(ctx_.e_n())));
    const std::uint64_t count = std::uint64_t{1} << N_;
    std::vector<Int> deg(count, 0);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        if (mask != 0)
            deg[mask] = (deg[mask & (mask - 1)] + gen_degree_[std::countr_zero(mask)]) % ctx_.e_n();
        index_[std::popcount(mask)][deg[mask]].push_back(Monomial{mask});
    }
}

Int ExteriorComplex::degree(Monomial m) const
{
    Int t = 0;
    for (std::uint64_t rest = m.bits; rest; rest &= rest - 1)
        t += gen_degree_[std::countr_zero(rest)];
    return t % ctx_.e_n();
}

std::vector<Monomial> ExteriorComplex::basis(int s, Int t_reduced) const
{
    if (!eager_)
        return enumerate_basis(ctx_, s, t_reduced);
    if (s < 0 || s > N_)
        throw DomainError("cohomological degree " + std::to_string(s) + " outside [0, n^2]");
    return index_[s][mod_floor(t_reduced, ctx_.e_n())];
}

std::size_t ExteriorComplex::basis_size(int s, Int t_reduced) const
{
    if (!eager_)
        return enumerate_basis(ctx_, s, t_reduced).size();
    if (s < 0 || s > N_)
        throw DomainError("cohomological degree " + std::to_string(s) + " outside [0, n^2]");
    return index_[s][mod_floor(t_reduced, ctx_.e_n())].size();
}

Cochain ExteriorComplex::d(Monomial m) const
{
    Cochain out(ctx_, m.s() + 1, degree(m));
    apply_d(m, d_terms_, 1, out);
    return out;
}

Cochain ExteriorComplex::d(const Cochain& x) const
{
    Cochain out(ctx_, x.s() + 1, x.t_reduced());
    for (const auto& [m, c] : x.terms())
        apply_d(m, d_terms_, c, out);
    return out;
}

} // namespace morava
