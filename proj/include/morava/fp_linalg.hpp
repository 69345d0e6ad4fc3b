#pragma once

// Linear algebra over F_p and per-bidegree cohomology of the exterior
// complex. Entries are stored as canonical residues in Eigen integer matrices;
// p < 2^16, so a product of two entries plus an accumulator fits in 64 bits.
// Small slices use dense elimination; large ones keep only sparse matrices
// and support dimension queries.

#include "morava/exterior_complex.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <optional>
#include <vector>

namespace morava {

using FpStorage = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using FpVector = Eigen::Matrix<Int, Eigen::Dynamic, 1>;
using FpSparse = Eigen::SparseMatrix<Int>; // column-major, residues in [0, p)

struct FpMatrix {
    Int p = 2;
    FpStorage entries;

    FpMatrix() = default;
    FpMatrix(Int prime, Eigen::Index rows, Eigen::Index cols)
        : p(prime), entries(FpStorage::Zero(rows, cols))
    {
    }
    FpMatrix(Int prime, FpStorage values);

    Eigen::Index rows() const { return entries.rows(); }
    Eigen::Index cols() const { return entries.cols(); }
    bool is_zero() const { return (entries.array() == 0).all(); }

    static FpMatrix identity(Int prime, Eigen::Index size);
};

Int inverse_mod(Int a, Int p);

/// Product over F_p; throws on a dimension or modulus mismatch.
FpMatrix operator*(const FpMatrix& a, const FpMatrix& b);
FpVector apply(const FpMatrix& a, const FpVector& x);

struct EchelonForm {
    FpMatrix reduced;                 // reduced row echelon form, pivots 1
    std::vector<Eigen::Index> pivots; // pivot column of each nonzero row
};

EchelonForm row_reduce(const FpMatrix& m);
Eigen::Index rank(const FpMatrix& m);

/// Basis of {x : m x = 0}, one vector per free column of the echelon form.
std::vector<FpVector> kernel_basis(const FpMatrix& m);

/// Some x with m x = b, if b lies in the column space.
std::optional<FpVector> solve(const FpMatrix& m, const FpVector& b);

/// Rank over F_p of a large sparse matrix; switches to dense elimination
/// once the unreduced remainder is small.
Eigen::Index sparse_rank(const FpSparse& m, Int p, unsigned jobs = 1);

/// Bases in degrees s-1, s, s+1 at one reduced internal degree, with the
/// matrices of d: column k of d_in is d(basis_in[k]) in basis_mid coordinates.
struct BidegreeSlice {
    // Largest |mid| * max(|in|, |out|) for which dense matrices are built.
    static constexpr Int kDenseLimit = Int{1} << 22;

    PrimeContext ctx;
    int s = 0;
    Int t_reduced = 0;
    std::vector<Monomial> basis_in;
    std::vector<Monomial> basis_mid;
    std::vector<Monomial> basis_out;
    FpSparse sparse_in;  // |mid| x |in|
    FpSparse sparse_out; // |out| x |mid|
    FpMatrix d_in;       // dense copies, empty unless dense()
    FpMatrix d_out;

    bool dense() const { return dense_; }

    FpVector coordinates(const Cochain& x) const;
    Cochain cochain(const FpVector& coords, int degree) const;

    bool dense_ = false;
};

BidegreeSlice build_slice(const ExteriorComplex& complex, int s, Int t_reduced);
BidegreeSlice build_slice(const PrimeContext& ctx, int s, Int t_reduced);

struct CohomologyResult {
    Eigen::Index dim = 0;
    std::vector<Cochain> representatives;
    Eigen::Index rank_in = 0;
    Eigen::Index dim_ker_out = 0;
};

/// dim ker(d_out) - rank(d_in), with cocycle representatives of a basis of
/// the quotient in reduced echelon form modulo the image (leading coefficient
/// 1). Throws std::logic_error when d_out d_in != 0 and DomainError when the
/// slice is too large for dense matrices.
CohomologyResult cohomology(const BidegreeSlice& slice);

/// Dimension only; works on slices of any size.
Eigen::Index cohomology_dim(const BidegreeSlice& slice, unsigned jobs = 1);

struct ImageMembership {
    bool member = false;
    std::optional<Cochain> witness; // y with d(y) = x when member
};

/// Requires a dense slice.
ImageMembership in_image(const BidegreeSlice& slice, const Cochain& x);

} // namespace morava
