#include "morava/fp_linalg.hpp"

#include <algorithm>
#include <stdexcept>
#include <queue>

#include "morava/parallel.hpp"

namespace morava {

FpMatrix::FpMatrix(Int prime, FpStorage values)
    : p(prime), entries(std::move(values))
{
    entries = entries.unaryExpr([prime](Int v) { return mod_floor(v, prime); });
}

FpMatrix FpMatrix::identity(Int prime, Eigen::Index size)
{
    return FpMatrix(prime, FpStorage::Identity(size, size));
}

Int inverse_mod(Int a, Int p)
{
    Int old_r = mod_floor(a, p), r = p, old_s = 1, s = 0;
    if (old_r == 0)
        throw std::domain_error("zero has no inverse mod p");
    while (r != 0) {
        const Int quotient = old_r / r;
        std::tie(old_r, r) = std::pair{r, old_r - quotient * r};
        std::tie(old_s, s) = std::pair{s, old_s - quotient * s};
    }
    return mod_floor(old_s, p);
}

FpMatrix operator*(const FpMatrix& a, const FpMatrix& b)
{
    if (a.p != b.p)
        throw std::invalid_argument("matrices over different primes");
    if (a.cols() != b.rows())
        throw std::invalid_argument("matrix dimensions do not compose");
    // Accumulate in chunks so sums of products stay below 2^63.
    FpStorage out = FpStorage::Zero(a.rows(), b.cols());
    const Eigen::Index chunk = 1 << 20;
    for (Eigen::Index k0 = 0; k0 < a.cols(); k0 += chunk) {
        const Eigen::Index len = std::min(chunk, a.cols() - k0);
        out += a.entries.middleCols(k0, len) * b.entries.middleRows(k0, len);
        out = out.unaryExpr([p = a.p](Int v) { return v % p; });
    }
    return FpMatrix(a.p, std::move(out));
}

FpVector apply(const FpMatrix& a, const FpVector& x)
{
    if (a.cols() != x.size())
        throw std::invalid_argument("vector length does not match matrix columns");
    FpVector y = a.entries * x;
    return y.unaryExpr([p = a.p](Int v) { return mod_floor(v, p); });
}

EchelonForm row_reduce(const FpMatrix& m)
{
    EchelonForm out{m, {}};
    auto& a = out.reduced.entries;
    const Int p = m.p;
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
        Eigen::Index pivot = row;
        while (pivot < a.rows() && a(pivot, col) == 0)
            ++pivot;
        if (pivot == a.rows())
            continue;
        a.row(row).swap(a.row(pivot));
        const Int inv = inverse_mod(a(row, col), p);
        a.row(row) = a.row(row).unaryExpr([inv, p](Int v) { return v * inv % p; });
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            if (r == row || a(r, col) == 0)
                continue;
            const Int factor = a(r, col);
            a.row(r) = (a.row(r) - factor * a.row(row)).unaryExpr([p](Int v) { return mod_floor(v, p); });
        }
        out.pivots.push_back(col);
        ++row;
    }
    return out;
}

Eigen::Index rank(const FpMatrix& m)
{
    return static_cast<Eigen::Index>(row_reduce(m).pivots.size());
}

std::vector<FpVector> kernel_basis(const FpMatrix& m)
{
    const auto ech = row_reduce(m);
    std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
    for (auto c : ech.pivots)
        is_pivot[c] = true;
    std::vector<FpVector> basis;
    for (Eigen::Index free = 0; free < m.cols(); ++free) {
        if (is_pivot[free])
            continue;
        FpVector v = FpVector::Zero(m.cols());
        v(free) = 1;
        for (std::size_t r = 0; r < ech.pivots.size(); ++r)
            v(ech.pivots[r]) = mod_floor(-ech.reduced.entries(static_cast<Eigen::Index>(r), free), m.p);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<FpVector> solve(const FpMatrix& m, const FpVector& b)
{
    if (b.size() != m.rows())
        throw std::invalid_argument("right-hand side length does not match matrix rows");
    FpStorage aug(m.rows(), m.cols() + 1);
    aug.leftCols(m.cols()) = m.entries;
    aug.col(m.cols()) = b;
    const auto ech = row_reduce(FpMatrix(m.p, std::move(aug)));
    FpVector x = FpVector::Zero(m.cols());
    for (std::size_t r = 0; r < ech.pivots.size(); ++r) {
        const auto c = ech.pivots[r];
        if (c == m.cols())
            return std::nullopt;
        x(c) = ech.reduced.entries(static_cast<Eigen::Index>(r), m.cols());
    }
    return x;
}

namespace {

    using SparseVec = std::vector<std::pair<Eigen::Index, Int>>; // sorted by index

    // Remaining vectors are small: compress to the indices in use and
    // eliminate densely.
    Eigen::Index dense_rank_of(const std::vector<SparseVec>& vecs, const std::vector<Eigen::Index>& used, Int p)
    {
        FpStorage a = FpStorage::Zero(static_cast<Eigen::Index>(vecs.size()), static_cast<Eigen::Index>(used.size()));
        for (std::size_t r = 0; r < vecs.size(); ++r)
            for (const auto& [idx, v] : vecs[r]) {
                const auto c = std::lower_bound(used.begin(), used.end(), idx) - used.begin();
                a(static_cast<Eigen::Index>(r), c) = v;
            }
        return rank(FpMatrix(p, std::move(a)));
    }

    // v minus multiples of pivots until no pivot index remains. Pivots have
    // leading entry 1 and all other entries at larger indices, so indices
    // can be settled in increasing order.
    SparseVec reduce_against(const SparseVec& v, const std::vector<const SparseVec*>& pivot_at, Int p)
    {
        thread_local std::vector<Int> acc;
        thread_local std::vector<char> queued;
        acc.resize(pivot_at.size(), 0);
        queued.resize(pivot_at.size(), 0);
        std::priority_queue<Eigen::Index, std::vector<Eigen::Index>, std::greater<>> heap;
        for (const auto& [idx, value] : v) {
            acc[idx] = value;
            queued[idx] = 1;
            heap.push(idx);
        }
        SparseVec out;
        while (!heap.empty()) {
            const Eigen::Index idx = heap.top();
            heap.pop();
            queued[idx] = 0;
            const Int factor = acc[idx];
            acc[idx] = 0;
            if (factor == 0)
                continue;
            const SparseVec* piv = pivot_at[idx];
            if (!piv) {
                out.emplace_back(idx, factor);
                continue;
            }
            for (std::size_t k = 1; k < piv->size(); ++k) {
                const auto [j, value] = (*piv)[k];
                acc[j] = mod_floor(acc[j] - factor * value, p);
                if (!queued[j]) {
                    queued[j] = 1;
                    heap.push(j);
                }
            }
        }
        return out;
    }

} // namespace

Eigen::Index sparse_rank(const FpSparse& m, Int p, unsigned jobs)
{
    // Rounds of pivot search: vectors with distinct leading indices are
    // taken as pivots (the sparsest one per index), every other vector is
    // reduced against them, and the remainder goes to the next round.
    // Rows of m as vectors: measured faster than columns on the boundary
    // matrices of the complex.
    const FpSparse rows = m.transpose();
    std::vector<SparseVec> vecs;
    for (Eigen::Index col = 0; col < rows.outerSize(); ++col) {
        SparseVec v;
        for (FpSparse::InnerIterator it(rows, col); it; ++it)
            if (mod_floor(it.value(), p) != 0)
                v.emplace_back(it.row(), mod_floor(it.value(), p));
        std::sort(v.begin(), v.end());
        if (!v.empty())
            vecs.push_back(std::move(v));
    }
    const auto dim = static_cast<std::size_t>(rows.rows());
    Eigen::Index total = 0;
    while (!vecs.empty()) {
        std::vector<Eigen::Index> used;
        for (const auto& v : vecs)
            for (const auto& e : v)
                used.push_back(e.first);
        std::sort(used.begin(), used.end());
        used.erase(std::unique(used.begin(), used.end()), used.end());
        if (static_cast<Int>(vecs.size()) * static_cast<Int>(used.size()) <= BidegreeSlice::kDenseLimit)
            return total + dense_rank_of(vecs, used, p);

        std::vector<std::ptrdiff_t> best(dim, -1);
        for (std::size_t k = 0; k < vecs.size(); ++k) {
            auto& b = best[static_cast<std::size_t>(vecs[k].front().first)];
            if (b < 0 || vecs[k].size() < vecs[static_cast<std::size_t>(b)].size())
                b = static_cast<std::ptrdiff_t>(k);
        }
        std::vector<char> is_pivot(vecs.size(), 0);
        std::vector<const SparseVec*> pivot_at(dim, nullptr);
        for (std::size_t idx = 0; idx < dim; ++idx) {
            if (best[idx] < 0)
                continue;
            auto& v = vecs[static_cast<std::size_t>(best[idx])];
            const Int inv = inverse_mod(v.front().second, p);
            for (auto& e : v)
                e.second = e.second * inv % p;
            is_pivot[static_cast<std::size_t>(best[idx])] = 1;
            pivot_at[idx] = &v;
            ++total;
        }
        std::vector<std::size_t> rest;
        for (std::size_t k = 0; k < vecs.size(); ++k)
            if (!is_pivot[k])
                rest.push_back(k);
        std::vector<SparseVec> next(rest.size());
        parallel_for(jobs, rest.size(),
            [&](std::size_t r) { next[r] = reduce_against(vecs[rest[r]], pivot_at, p); });
        std::erase_if(next, [](const SparseVec& v) { return v.empty(); });
        vecs = std::move(next);
    }
    return total;
}

namespace {

    Eigen::Index index_of(const std::vector<Monomial>& basis, Monomial m)
    {
        auto it = std::lower_bound(basis.begin(), basis.end(), m);
        if (it == basis.end() || *it != m)
            throw std::logic_error("monomial outside the slice basis");
        return static_cast<Eigen::Index>(it - basis.begin());
    }

    FpSparse differential_matrix(const ExteriorComplex& complex, const std::vector<Monomial>& from,
        const std::vector<Monomial>& to)
    {
        std::vector<Eigen::Triplet<Int>> triplets;
        for (std::size_t k = 0; k < from.size(); ++k) {
            const Cochain dm = complex.d(from[k]);
            for (const auto& [m, c] : dm.terms())
                triplets.emplace_back(index_of(to, m), static_cast<Eigen::Index>(k), c);
        }
        FpSparse d(static_cast<Eigen::Index>(to.size()), static_cast<Eigen::Index>(from.size()));
        d.setFromTriplets(triplets.begin(), triplets.end());
        return d;
    }

} // namespace

FpVector BidegreeSlice::coordinates(const Cochain& x) const
{
    const std::vector<Monomial>* basis = nullptr;
    if (x.s() == s - 1)
        basis = &basis_in;
    else if (x.s() == s)
        basis = &basis_mid;
    else if (x.s() == s + 1)
        basis = &basis_out;
    else
        throw std::invalid_argument("cochain degree outside the slice");
    FpVector v = FpVector::Zero(static_cast<Eigen::Index>(basis->size()));
    for (const auto& [m, c] : x.terms())
        v(index_of(*basis, m)) = c;
    return v;
}

Cochain BidegreeSlice::cochain(const FpVector& coords, int degree) const
{
    const std::vector<Monomial>& basis = degree == s - 1 ? basis_in : degree == s ? basis_mid : basis_out;
    if (degree < s - 1 || degree > s + 1 || coords.size() != static_cast<Eigen::Index>(basis.size()))
        throw std::invalid_argument("coordinate vector does not match the slice");
    Cochain out(ctx, degree, t_reduced);
    for (Eigen::Index k = 0; k < coords.size(); ++k)
        out.add(basis[static_cast<std::size_t>(k)], coords(k));
    return out;
}

BidegreeSlice build_slice(const ExteriorComplex& complex, int s, Int t_reduced)
{
    const auto& ctx = complex.context();
    if (s < 0 || s > ctx.generator_count())
        throw DomainError("cohomological degree " + std::to_string(s) + " outside [0, n^2]");
    BidegreeSlice slice;
    slice.ctx = ctx;
    slice.s = s;
    slice.t_reduced = mod_floor(t_reduced, ctx.e_n());
    if (s > 0)
        slice.basis_in = complex.basis(s - 1, slice.t_reduced);
    slice.basis_mid = complex.basis(s, slice.t_reduced);
    if (s < ctx.generator_count())
        slice.basis_out = complex.basis(s + 1, slice.t_reduced);
    slice.sparse_in = differential_matrix(complex, slice.basis_in, slice.basis_mid);
    slice.sparse_out = differential_matrix(complex, slice.basis_mid, slice.basis_out);
    const auto mid = static_cast<Int>(slice.basis_mid.size());
    const auto side = static_cast<Int>(std::max(slice.basis_in.size(), slice.basis_out.size()));
    slice.dense_ = mid * side <= BidegreeSlice::kDenseLimit;
    if (slice.dense_) {
        slice.d_in = FpMatrix(ctx.p, FpStorage(slice.sparse_in.toDense()));
        slice.d_out = FpMatrix(ctx.p, FpStorage(slice.sparse_out.toDense()));
    }
    return slice;
}

BidegreeSlice build_slice(const PrimeContext& ctx, int s, Int t_reduced)
{
    return build_slice(ExteriorComplex(ctx), s, t_reduced);
}

namespace {

    void check_complex(const BidegreeSlice& slice)
    {
        // Entries are below 2^16 and columns of d have few terms, so the
        // integer product cannot overflow before reduction.
        const FpSparse product = slice.sparse_out * slice.sparse_in;
        bool zero = true;
        for (Eigen::Index col = 0; col < product.outerSize() && zero; ++col)
            for (FpSparse::InnerIterator it(product, col); it; ++it)
                zero = zero && it.value() % slice.ctx.p == 0;
        if (!zero)
            throw std::logic_error("d o d != 0 in slice (s=" + std::to_string(slice.s)
                + ", t=" + std::to_string(slice.t_reduced) + ")");
    }

} // namespace

CohomologyResult cohomology(const BidegreeSlice& slice)
{
    if (!slice.dense())
        throw DomainError("slice with " + std::to_string(slice.basis_mid.size())
            + " cochains is too large for representatives; only its dimension is available");
    check_complex(slice);
    const Int p = slice.ctx.p;
    const auto mid = static_cast<Eigen::Index>(slice.basis_mid.size());

    CohomologyResult r;
    const auto image = row_reduce(FpMatrix(p, slice.d_in.entries.transpose()));
    r.rank_in = static_cast<Eigen::Index>(image.pivots.size());
    const auto kernel = kernel_basis(slice.d_out);
    r.dim_ker_out = static_cast<Eigen::Index>(kernel.size());
    r.dim = r.dim_ker_out - r.rank_in;

    if (kernel.empty())
        return r;
    FpStorage reduced(static_cast<Eigen::Index>(kernel.size()), mid);
    for (std::size_t k = 0; k < kernel.size(); ++k) {
        FpVector v = kernel[k];
        for (std::size_t row = 0; row < image.pivots.size(); ++row) {
            const Int c = v(image.pivots[row]);
            if (c == 0)
                continue;
            const auto pivot_row = image.reduced.entries.row(static_cast<Eigen::Index>(row)).transpose();
            v = (v - c * pivot_row).unaryExpr([p](Int x) { return mod_floor(x, p); });
        }
        reduced.row(static_cast<Eigen::Index>(k)) = v.transpose();
    }
    const auto quotient = row_reduce(FpMatrix(p, std::move(reduced)));
    for (std::size_t row = 0; row < quotient.pivots.size(); ++row) {
        FpVector v = quotient.reduced.entries.row(static_cast<Eigen::Index>(row)).transpose();
        r.representatives.push_back(slice.cochain(v, slice.s));
    }
    if (static_cast<Eigen::Index>(r.representatives.size()) != r.dim)
        throw std::logic_error("quotient basis size disagrees with dim ker - rank");
    return r;
}

Eigen::Index cohomology_dim(const BidegreeSlice& slice, unsigned jobs)
{
    check_complex(slice);
    const auto mid = static_cast<Eigen::Index>(slice.basis_mid.size());
    if (slice.dense())
        return mid - rank(slice.d_out) - rank(slice.d_in);
    return mid - sparse_rank(slice.sparse_out, slice.ctx.p, jobs) - sparse_rank(slice.sparse_in, slice.ctx.p, jobs);
}

ImageMembership in_image(const BidegreeSlice& slice, const Cochain& x)
{
    if (x.s() != slice.s || x.t_reduced() != slice.t_reduced || x.prime() != slice.ctx.p)
        throw std::invalid_argument("cochain bidegree does not match the slice");
    if (!slice.dense())
        throw DomainError("image membership needs a slice small enough for dense matrices");
    ImageMembership out;
    auto y = solve(slice.d_in, slice.coordinates(x));
    if (!y)
        return out;
    out.member = true;
    out.witness = slice.cochain(*y, slice.s - 1);
    return out;
}

} // namespace morava
