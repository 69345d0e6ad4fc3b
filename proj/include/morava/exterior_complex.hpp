#pragma once

// The exterior complex E(h_{i,j} | 1 <= i <= n, j in Z/n) with
//   d(h_{i,j}) = sum_{k=1}^{i-1} h_{k,j} h_{i-k,k+j},
// extended to monomials as a graded derivation. Monomials are bitmasks over
// the n^2 generators in lexicographic (i, j) order; bit (i-1)n + j is h_{i,j}.

#include "morava/arithmetic.hpp"

#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace morava {

struct GeneratorId {
    int i = 1;
    int j = 0;

    int index(int n) const { return (i - 1) * n + j; }
    static GeneratorId from_index(int index, int n) { return {index / n + 1, index % n}; }
    std::string label() const { return std::to_string(i) + "," + std::to_string(j); }
    auto operator<=>(const GeneratorId&) const = default;
};

/// Square-free product of generators. Members are implicitly sorted by index,
/// and the numeric order on masks is the colexicographic order on members.
struct Monomial {
    std::uint64_t bits = 0;

    int s() const { return std::popcount(bits); }
    bool contains(int index) const { return (bits >> index) & 1U; }
    bool disjoint(Monomial o) const { return (bits & o.bits) == 0; }
    std::vector<int> members() const;

    static Monomial generator(int index) { return {std::uint64_t{1} << index}; }
    static Monomial of(const PrimeContext& ctx, std::initializer_list<GeneratorId> gens);

    auto operator<=>(const Monomial&) const = default;
};

std::string to_string(const PrimeContext& ctx, Monomial m);

/// A monomial together with a unit sign.
struct SignedMonomial {
    Monomial monomial;
    int sign = 1;
    bool operator==(const SignedMonomial&) const = default;
};

/// (-1)^{inversions} for the product x * y of disjoint sorted monomials.
int product_sign(Monomial x, Monomial y);

/// Exterior product of monomials; empty when they share a generator.
std::optional<SignedMonomial> multiply(Monomial x, Monomial y);

/// Homogeneous F_p-linear combination of monomials at bidegree (s, t).
/// t is the reduced internal degree in Z/e(n). Coefficients lie in [1, p).
class Cochain {
public:
    Cochain(const PrimeContext& ctx, int s, Int t_reduced);
    Cochain(const PrimeContext& ctx, Monomial m, Int coefficient = 1);
    /// Zero cochain from the raw modulus data (p, e(n)).
    Cochain(Int p, Int e_n, int s, Int t_reduced);

    Int prime() const { return p_; }
    Int e_n() const { return e_n_; }
    int s() const { return s_; }
    Int t_reduced() const { return t_; }
    const std::map<Monomial, Int>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Int coefficient(Monomial m) const;

    /// Adds c * m; m must have this cochain's bidegree.
    void add(Monomial m, Int c);
    Cochain& operator+=(const Cochain& o);
    Cochain scaled(Int c) const;

    bool operator==(const Cochain& o) const;

private:
    Int p_;
    Int e_n_;
    int s_;
    Int t_;
    std::map<Monomial, Int> terms_;
};

Cochain multiply(const Cochain& x, const Cochain& y);

/// Degree of h_{i,j}: 2 p^j (p^i - 1) mod the period (reduced: p^j e(i)).
InternalDegree generator_degree(const PrimeContext& ctx, GeneratorId g);
Int reduced_degree(const PrimeContext& ctx, Monomial m);

Cochain differential(const PrimeContext& ctx, Monomial m);
Cochain differential(const PrimeContext& ctx, const Cochain& x);

/// Complement monomial, signed so that multiply(dual(m), m) = +g_n.
SignedMonomial dual(const PrimeContext& ctx, Monomial m);

/// g_n, the product of all n^2 generators.
Monomial top_class(const PrimeContext& ctx);

/// Monomials of cohomological degree s and reduced degree t (mod e(n)), in
/// increasing mask order. Streams all C(n^2, s) candidates.
std::vector<Monomial> enumerate_basis(const PrimeContext& ctx, int s, Int t_reduced);

/// The complex at a fixed context with precomputed generator data. Holds an
/// eager (s, t) index of all monomials when n^2 <= kEagerLimit; otherwise
/// rows are streamed on each query. Immutable after construction.
class ExteriorComplex {
public:
    static constexpr int kEagerLimit = 20;

    explicit ExteriorComplex(PrimeContext ctx);

    const PrimeContext& context() const { return ctx_; }
    int generator_count() const { return N_; }
    Int generator_reduced_degree(int index) const { return gen_degree_[index]; }
    Int degree(Monomial m) const;

    std::vector<Monomial> basis(int s, Int t_reduced) const;
    std::size_t basis_size(int s, Int t_reduced) const;

    Cochain d(Monomial m) const;
    Cochain d(const Cochain& x) const;

private:
    struct DTerm {
        int first;
        int second;
    };

    PrimeContext ctx_;
    int N_;
    std::vector<Int> gen_degree_;
    std::vector<std::vector<DTerm>> d_terms_;
    bool eager_ = false;
    std::vector<std::vector<std::vector<Monomial>>> index_; // [s][t]
};

} // namespace morava
