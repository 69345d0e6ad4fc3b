#pragma once

// Degree and index arithmetic for the height-n exterior complex at an odd
// prime p. Internal degrees are periodic modulo |v_n| = 2(p^n - 1) because
// v_n is inverted; reduced degrees are internal degrees divided by q = 2p - 2
// and live in Z/e(n).

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace morava {

using Int = std::int64_t;

/// Thrown for parameters outside an operation's domain.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Canonical representative of x mod m in [0, m).
constexpr Int mod_floor(Int x, Int m)
{
    Int r = x % m;
    return r < 0 ? r + m : r;
}

/// Representative of x mod m in (-m/2, m/2].
constexpr Int signed_rep(Int x, Int m)
{
    Int r = mod_floor(x, m);
    return 2 * r > m ? r - m : r;
}

/// a * b mod m without intermediate overflow.
constexpr Int mul_mod(Int a, Int b, Int m)
{
    return static_cast<Int>(static_cast<__int128>(mod_floor(a, m)) * mod_floor(b, m) % m);
}

Int ipow(Int base, int exp);
bool is_prime(Int x);

/// Fixed (p, n) with the derived constants every other module reads.
struct PrimeContext {
    Int p = 0;
    int n = 0;
    Int q = 0;            // 2p - 2
    std::vector<Int> e;   // e(0..n), e(i) = (p^i - 1)/(p - 1)
    Int period = 0;       // q e(n) = 2(p^n - 1)
    bool cond_ok = false; // n^2 <= 2p - 1 and n <= p - 2
    bool pn_ok = false;   // p = 3 mod 4, or n even
    // n <= p - 2: range where the exterior complex models H^*S(n) additively.
    bool collapse_ok = false;

    Int e_n() const { return e[static_cast<std::size_t>(n)]; }
    int generator_count() const { return n * n; }
    bool operator==(const PrimeContext&) const = default;
};

/// Validates (p, n) and fills the derived constants.
/// Rejects p = 2, composite p, n < 1, n >= p, n > 8 (64-bit monomial masks)
/// and p >= 2^16 (single-reduction products in F_p).
PrimeContext make_context(Int p, int n);

/// Requires ctx.collapse_ok; names the operation in the error message.
void require_collapse(const PrimeContext& ctx, const char* what);

/// An internal degree, always held as a canonical residue mod the period.
class InternalDegree {
public:
    InternalDegree(const PrimeContext& ctx, Int raw);
    static InternalDegree from_reduced(const PrimeContext& ctx, Int reduced);

    Int raw() const { return raw_; }
    Int signed_raw() const { return signed_rep(raw_, period_); }
    /// raw / q mod e(n); empty when raw is not divisible by q.
    std::optional<Int> reduced() const;
    std::optional<Int> signed_reduced() const;

    bool operator==(const InternalDegree&) const = default;

private:
    Int raw_;
    Int period_;
    Int q_;
    Int e_n_;
};

struct EpsilonVector {
    std::vector<std::uint8_t> bits; // eps_0 .. eps_{n-1}

    /// The vector whose eps_i is bit i of mask.
    static EpsilonVector from_mask(unsigned mask, int length);
    int size() const { return static_cast<int>(bits.size()); }
    int weight() const;
};

struct IntNegation {
    Int a = 0;                // sum eps_i e(i) mod e(n)
    Int neg_a = 0;            // -a mod e(n)
    Int neg_a_closed = 0;     // n + sum (p - 1 - eps_i) e(i) mod e(n)
    Int neg_a_from_digits = 0; // sum_{i<n-1} (p - a_i) p^i + 1 mod e(n)
    std::vector<Int> digits;  // a_0 .. a_{n-1}, base-p digits of a
    Int eps_tail_weight = 0;  // sum_{i>=1} eps_i

    /// The monotone chain 0 = a_{n-1} <= ... <= a_0 with unit steps,
    /// a_0 equal to the tail weight, and both closed forms equal to -a.
    bool identities_hold() const;
};

IntNegation lemma_int_negate(const PrimeContext& ctx, const EpsilonVector& eps);

struct LambdaElement {
    Int u = 0;
    Int s_of_u = 0; // number of cells used, sum eps_i
    Int u_bar = 0;  // u - s(u)
    EpsilonVector eps;
};

/// The 2^k cell degrees sum eps_i (e_i (2p^i - 2) + 1) of the Moore spectrum
/// for (p^{e_0}, v_1^{e_1}, ..., v_{k-1}^{e_{k-1}}), sorted by u.
std::vector<LambdaElement> lambda_set(const PrimeContext& ctx, std::span<const Int> exponents);

struct GreekDegree {
    int n = 0;
    Int s = 0;
    Int t = 0;
    Int stem = 0;
};

/// Bidegree data of alpha^{(n)}_s; usable at p = 2 where no context exists.
GreekDegree greek_degree(Int p, int n, Int s);
GreekDegree greek_degree(const PrimeContext& ctx, Int s);

/// d_J = n + sum_{i>=1} |v_i^{e_i}| for exponents (e_0, ..., e_{n-1}).
Int moore_dual_shift(const PrimeContext& ctx, std::span<const Int> exponents);

struct ExtReduction {
    Int a = 0;
    Int b = 0;
    Int a0 = 0;
    Int eps0 = 0;
    Int m = 0;
    Int target_s = 0;
    Int t = 0;
    int e = 1;
    bool t_splits = false;       // t = a q + b with 0 <= b < q
    bool m_plus_t_ok = false;    // m + t = (a + 1) q
    bool b_minus_a0_ok = false;  // b - a_0 = eps_0
    bool target_ok = false;      // target_s = m + e

    bool identities_hold() const { return t_splits && m_plus_t_ok && b_minus_a0_ok && target_ok; }
};

/// Degree bookkeeping that reduces Ext^{m+e, m+t} for t in Lambda_n to a
/// single slice of the exterior complex. e is 1 or 2.
ExtReduction ext_reduction(const PrimeContext& ctx, const LambdaElement& t, int e);

std::string context_label(const PrimeContext& ctx);

} // namespace morava
