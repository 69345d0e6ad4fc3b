#include "morava/arithmetic.hpp"

#include <algorithm>
#include <limits>

namespace morava {

Int ipow(Int base, int exp)
{
    Int r = 1;
    while (exp-- > 0)
        r *= base;
    return r;
}

bool is_prime(Int x)
{
    if (x < 2)
        return false;
    for (Int d = 2; d * d <= x; ++d)
        if (x % d == 0)
            return false;
    return true;
}

PrimeContext make_context(Int p, int n)
{
    if (p == 2)
        throw DomainError("p = 2 is not supported; the exterior complex model needs an odd prime");
    if (!is_prime(p))
        throw DomainError("p = " + std::to_string(p) + " is not prime");
    if (p >= (Int{1} << 16))
        throw DomainError("p must be below 2^16");
    if (n < 1)
        throw DomainError("n must be at least 1");
    if (n >= p)
        throw DomainError("n = " + std::to_string(n) + " must be smaller than p = " + std::to_string(p));
    if (n > 8)
        throw DomainError("n > 8 does not fit the 64-bit monomial representation");

    PrimeContext ctx;
    ctx.p = p;
    ctx.n = n;
    ctx.q = 2 * p - 2;
    ctx.e.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 0; i < n; ++i) {
        if (ctx.e[i] > (std::numeric_limits<Int>::max() / 4 - 1) / p)
            throw DomainError("p^n overflows 64-bit degree arithmetic");
        ctx.e[i + 1] = p * ctx.e[i] + 1;
    }
    ctx.period = ctx.q * ctx.e_n();
    ctx.cond_ok = Int{n} * n <= 2 * p - 1 && n <= p - 2;
    ctx.pn_ok = p % 4 == 3 || n % 2 == 0;
    ctx.collapse_ok = n <= p - 2;
    return ctx;
}

void require_collapse(const PrimeContext& ctx, const char* what)
{
    if (!ctx.collapse_ok)
        throw DomainError(std::string(what) + " needs n <= p - 2 (got " + context_label(ctx) + ")");
}

std::string context_label(const PrimeContext& ctx)
{
    return "(p,n)=(" + std::to_string(ctx.p) + "," + std::to_string(ctx.n) + ")";
}

InternalDegree::InternalDegree(const PrimeContext& ctx, Int raw)
    : raw_(mod_floor(raw, ctx.period)), period_(ctx.period), q_(ctx.q), e_n_(ctx.e_n())
{
}

InternalDegree InternalDegree::from_reduced(const PrimeContext& ctx, Int reduced)
{
    return InternalDegree(ctx, mod_floor(reduced, ctx.e_n()) * ctx.q);
}

std::optional<Int> InternalDegree::reduced() const
{
    if (raw_ % q_ != 0)
        return std::nullopt;
    return mod_floor(raw_ / q_, e_n_);
}

std::optional<Int> InternalDegree::signed_reduced() const
{
    auto r = reduced();
    if (!r)
        return std::nullopt;
    return signed_rep(*r, e_n_);
}

EpsilonVector EpsilonVector::from_mask(unsigned mask, int length)
{
    EpsilonVector v;
    v.bits.resize(static_cast<std::size_t>(length));
    for (int i = 0; i < length; ++i)
        v.bits[i] = (mask >> i) & 1U;
    return v;
}

int EpsilonVector::weight() const
{
    return static_cast<int>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

bool IntNegation::identities_hold() const
{
    if (neg_a_closed != neg_a || neg_a_from_digits != neg_a)
        return false;
    const auto n = digits.size();
    if (n == 0 || digits[n - 1] != 0 || digits[0] != eps_tail_weight)
        return false;
    for (std::size_t i = 1; i < n; ++i) {
        Int step = digits[i - 1] - digits[i];
        if (step != 0 && step != 1)
            return false;
    }
    return true;
}

IntNegation lemma_int_negate(const PrimeContext& ctx, const EpsilonVector& eps)
{
    if (eps.size() != ctx.n)
        throw DomainError("epsilon vector must have length n");
    const Int en = ctx.e_n();
    IntNegation r;

    Int a = 0;
    Int closed = ctx.n;
    for (int i = 0; i < ctx.n; ++i) {
        a += eps.bits[i] * ctx.e[i];
        closed += (ctx.p - 1 - eps.bits[i]) * ctx.e[i];
        if (i >= 1)
            r.eps_tail_weight += eps.bits[i];
    }
    r.a = mod_floor(a, en);
    r.neg_a = mod_floor(-a, en);
    r.neg_a_closed = mod_floor(closed, en);

    r.digits.resize(static_cast<std::size_t>(ctx.n));
    Int rest = r.a;
    for (int i = 0; i < ctx.n; ++i) {
        r.digits[i] = rest % ctx.p;
        rest /= ctx.p;
    }
    Int from_digits = 1;
    for (int i = 0; i + 1 < ctx.n; ++i)
        from_digits += (ctx.p - r.digits[i]) * ipow(ctx.p, i);
    r.neg_a_from_digits = mod_floor(from_digits, en);
    return r;
}

std::vector<LambdaElement> lambda_set(const PrimeContext& ctx, std::span<const Int> exponents)
{
    const int k = static_cast<int>(exponents.size());
    if (k > ctx.n)
        throw DomainError("at most n exponents may be given");
    for (Int e : exponents)
        if (e < 1)
            throw DomainError("ideal exponents must be positive");

    std::vector<LambdaElement> out;
    out.reserve(std::size_t{1} << k);
    for (unsigned mask = 0; mask < (1U << k); ++mask) {
        LambdaElement el;
        el.eps = EpsilonVector::from_mask(mask, k);
        for (int i = 0; i < k; ++i) {
            if (!el.eps.bits[i])
                continue;
            el.u += exponents[i] * (2 * ipow(ctx.p, i) - 2) + 1;
            el.s_of_u += 1;
        }
        el.u_bar = el.u - el.s_of_u;
        out.push_back(std::move(el));
    }
    std::stable_sort(out.begin(), out.end(),
        [](const LambdaElement& x, const LambdaElement& y) { return x.u < y.u; });
    return out;
}

GreekDegree greek_degree(Int p, int n, Int s)
{
    if (s == 0)
        throw DomainError("Greek letter suffix must be nonzero");
    if (n < 1)
        throw DomainError("n must be at least 1");
    Int t = 2 * s * (ipow(p, n) - 1);
    for (int k = 1; k < n; ++k)
        t -= 2 * (ipow(p, k) - 1);
    return GreekDegree{n, s, t, t - n};
}

GreekDegree greek_degree(const PrimeContext& ctx, Int s)
{
    return greek_degree(ctx.p, ctx.n, s);
}

Int moore_dual_shift(const PrimeContext& ctx, std::span<const Int> exponents)
{
    if (static_cast<int>(exponents.size()) != ctx.n)
        throw DomainError("expected exactly n exponents (e_0 for p, then e_1 .. e_{n-1})");
    for (Int e : exponents)
        if (e < 1)
            throw DomainError("ideal exponents must be positive");
    Int d = ctx.n;
    for (int i = 1; i < ctx.n; ++i)
        d += exponents[i] * (2 * ipow(ctx.p, i) - 2);
    return d;
}

ExtReduction ext_reduction(const PrimeContext& ctx, const LambdaElement& t, int e)
{
    require_collapse(ctx, "ext_reduction");
    if (e != 1 && e != 2)
        throw DomainError("e must be 1 or 2");
    if (t.eps.size() != ctx.n)
        throw DomainError("t must be an element of Lambda_n (n cells)");
    Int expected_u = 0;
    for (int i = 0; i < ctx.n; ++i)
        expected_u += t.eps.bits[i] * (ctx.e[i] * ctx.q + 1);
    if (expected_u != t.u)
        throw DomainError("t is not the Lambda_n element of its epsilon vector");

    ExtReduction r;
    r.t = t.u;
    r.e = e;
    for (int i = 0; i < ctx.n; ++i) {
        r.a += t.eps.bits[i] * ctx.e[i];
        r.b += t.eps.bits[i];
        if (i >= 1)
            r.a0 += t.eps.bits[i];
    }
    r.eps0 = t.eps.bits[0];
    r.m = ctx.q - r.b;
    r.target_s = ctx.q + e - r.a0 - r.eps0;

    r.t_splits = r.a * ctx.q + r.b == r.t && r.b >= 0 && r.b < ctx.q;
    r.m_plus_t_ok = r.m + r.t == (r.a + 1) * ctx.q;
    r.b_minus_a0_ok = r.b - r.a0 == r.eps0;
    r.target_ok = r.target_s == r.m + e;
    return r;
}

} // namespace morava
