#pragma once

#include "qsr2/types.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <optional>

namespace qsr2 {

namespace detail {

/// Splits a composite index into per-party digits, party 0 slowest.
inline void decompose_index(long idx, const std::vector<int>& dims, std::vector<int>& digits) {
    digits.resize(dims.size());
    for (int j = static_cast<int>(dims.size()) - 1; j >= 0; --j) {
        digits[j] = static_cast<int>(idx % dims[j]);
        idx /= dims[j];
    }
}

inline long compose_index(const std::vector<int>& digits, const std::vector<int>& dims,
                          const std::vector<int>& parties) {
    long idx = 0;
    for (int p : parties) idx = idx * dims[p] + digits[p];
    return idx;
}

inline long dim_of(const std::vector<int>& dims, const std::vector<int>& parties) {
    long d = 1;
    for (int p : parties) d *= dims[p];
    return d;
}

}  // namespace detail

inline Matrix kron2(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Kronecker product of one local operator per party, in party order.
inline MultipartiteOperator kron(const std::vector<LocalOperator>& ops, double tol = kDefaultTol) {
    if (ops.empty()) throw DimensionError("kron needs at least one factor");
    std::vector<int> dims;
    Matrix acc = ops.front().entries;
    if (acc.rows() != acc.cols()) throw DimensionError("local operators must be square");
    dims.push_back(static_cast<int>(acc.rows()));
    for (size_t j = 1; j < ops.size(); ++j) {
        const Matrix& m = ops[j].entries;
        if (m.rows() != m.cols()) throw DimensionError("local operators must be square");
        dims.push_back(static_cast<int>(m.rows()));
        acc = kron2(acc, m);
    }
    return MultipartiteOperator(dims, std::move(acc), tol);
}

inline Matrix kron_all(const std::vector<Matrix>& ms) {
    Matrix acc = ms.front();
    for (size_t j = 1; j < ms.size(); ++j) acc = kron2(acc, ms[j]);
    return acc;
}

/// Realignment of U across the cut S|S-bar.  Row index enumerates the
/// (row,col) index pairs of the S factor as rS*dimS+cS, columns likewise for
/// S-bar.  Product operators become rank-1 under this reshape.
inline Matrix matricize(const MultipartiteOperator& U, const Bipartition& cut) {
    const int n = U.parties();
    {
        std::set<int> seen(cut.left.begin(), cut.left.end());
        for (int p : cut.right)
            if (!seen.insert(p).second) throw BipartitionError("bipartition sides overlap");
        if (static_cast<int>(seen.size()) != n) throw BipartitionError("bipartition does not cover all parties");
    }
    const long dS = detail::dim_of(U.dims, cut.left);
    const long dT = detail::dim_of(U.dims, cut.right);
    Matrix M(dS * dS, dT * dT);
    std::vector<int> rdig, cdig;
    const long D = U.total_dim();
    for (long r = 0; r < D; ++r) {
        detail::decompose_index(r, U.dims, rdig);
        const long rS = detail::compose_index(rdig, U.dims, cut.left);
        const long rT = detail::compose_index(rdig, U.dims, cut.right);
        for (long c = 0; c < D; ++c) {
            detail::decompose_index(c, U.dims, cdig);
            const long cS = detail::compose_index(cdig, U.dims, cut.left);
            const long cT = detail::compose_index(cdig, U.dims, cut.right);
            M(rS * dS + cS, rT * dT + cT) = U.entries(r, c);
        }
    }
    return M;
}

inline Eigen::VectorXd singular_values(const Matrix& m) {
    return Eigen::JacobiSVD<Matrix>(m).singularValues();
}

/// Number of singular values of the realignment above tol * sigma_max.
inline int operator_schmidt_rank(const MultipartiteOperator& U, const Bipartition& cut) {
    const Eigen::VectorXd sv = singular_values(matricize(U, cut));
    if (sv.size() == 0 || sv(0) <= 0.0)
        throw DegenerateInputError("zero operator has no Schmidt rank");
    int r = 0;
    for (long i = 0; i < sv.size(); ++i)
        if (sv(i) > U.tol * sv(0)) ++r;
    return r;
}

/// Maximum Schmidt rank over all bipartitions, with per-cut detail.
inline std::vector<std::pair<Bipartition, int>> schmidt_rank_per_cut(const MultipartiteOperator& U) {
    std::vector<std::pair<Bipartition, int>> out;
    for (const auto& cut : all_bipartitions(U.parties()))
        out.emplace_back(cut, operator_schmidt_rank(U, cut));
    return out;
}

/// The unnormalized vector (U (x) I) sum_j |j>|j>, each original party grouped
/// with its ancilla.  Dims are doubled per party: (d1,d1,d2,d2,...).
inline Vector corresponding_state(const MultipartiteOperator& U) {
    const long D = U.total_dim();
    const int n = U.parties();
    std::vector<int> grouped;
    for (int d : U.dims) {
        grouped.push_back(d);
        grouped.push_back(d);
    }
    Vector psi = Vector::Zero(D * D);
    std::vector<int> rdig, adig, gdig(2 * n);
    for (long r = 0; r < D; ++r) {
        detail::decompose_index(r, U.dims, rdig);
        for (long a = 0; a < D; ++a) {
            detail::decompose_index(a, U.dims, adig);
            for (int j = 0; j < n; ++j) {
                gdig[2 * j] = rdig[j];
                gdig[2 * j + 1] = adig[j];
            }
            long idx = 0;
            for (int j = 0; j < 2 * n; ++j) idx = idx * grouped[j] + gdig[j];
            psi(idx) = U.entries(r, a);
        }
    }
    return psi;
}

inline bool is_diagonal(const MultipartiteOperator& U) {
    double max_off = 0.0, max_diag = 0.0;
    for (long r = 0; r < U.entries.rows(); ++r)
        for (long c = 0; c < U.entries.cols(); ++c) {
            const double a = std::abs(U.entries(r, c));
            (r == c ? max_diag : max_off) = std::max(r == c ? max_diag : max_off, a);
        }
    return max_off <= U.tol * max_diag;
}

/// Diagonal of a 3-qubit diagonal gate as an 8-vector, |000>..|111> order.
inline Vector diag3_isomorphic_state(const MultipartiteOperator& U) {
    if (U.dims != std::vector<int>{2, 2, 2})
        throw DimensionError("diag3 isomorphism needs a 3-qubit gate");
    if (!is_diagonal(U)) throw NotDiagonalError("gate is not diagonal within tolerance");
    return U.entries.diagonal();
}

inline double unitarity_residual(const Matrix& m) {
    return (m.adjoint() * m - Matrix::Identity(m.cols(), m.cols())).norm();
}

inline bool is_unitary(const MultipartiteOperator& U) {
    return unitarity_residual(U.entries) <= U.tol * std::sqrt(static_cast<double>(U.total_dim()));
}

/// Reorders parties: party j of the result is party perm[j] of the input.
inline MultipartiteOperator permute_parties(const MultipartiteOperator& U,
                                            const std::vector<int>& perm) {
    const int n = U.parties();
    if (static_cast<int>(perm.size()) != n) throw DimensionError("permutation size mismatch");
    std::vector<bool> seen(n, false);
    std::vector<int> new_dims(n);
    for (int j = 0; j < n; ++j) {
        if (perm[j] < 0 || perm[j] >= n || seen[perm[j]])
            throw DimensionError("invalid party permutation");
        seen[perm[j]] = true;
        new_dims[j] = U.dims[perm[j]];
    }
    const long D = U.total_dim();
    Matrix out(D, D);
    std::vector<int> rdig, cdig, rp(n), cp(n);
    for (long r = 0; r < D; ++r) {
        detail::decompose_index(r, U.dims, rdig);
        for (int j = 0; j < n; ++j) rp[j] = rdig[perm[j]];
        long rn = 0;
        for (int j = 0; j < n; ++j) rn = rn * new_dims[j] + rp[j];
        for (long c = 0; c < D; ++c) {
            detail::decompose_index(c, U.dims, cdig);
            for (int j = 0; j < n; ++j) cp[j] = cdig[perm[j]];
            long cn = 0;
            for (int j = 0; j < n; ++j) cn = cn * new_dims[j] + cp[j];
            out(rn, cn) = U.entries(r, c);
        }
    }
    return MultipartiteOperator(new_dims, std::move(out), U.tol);
}

// ---- product factorization -------------------------------------------------

/// Fixes the scalar gauge of a local factor: unit Frobenius norm, first entry
/// of modulus above 0.1*max (row-major scan) made real positive.  Returns the
/// scalar taken out.
inline Complex normalize_factor(Matrix& m) {
    const double fro = m.norm();
    if (fro == 0.0) return Complex(0, 0);
    Complex scale(fro, 0);
    m /= fro;
    const double thresh = 0.1 * m.cwiseAbs().maxCoeff();
    for (long r = 0; r < m.rows(); ++r)
        for (long c = 0; c < m.cols(); ++c)
            if (std::abs(m(r, c)) > thresh) {
                const Complex phase = m(r, c) / std::abs(m(r, c));
                m /= phase;
                return scale * phase;
            }
    return scale;
}

struct ProductFactorization {
    std::vector<Matrix> factors;  // unit Frobenius norm, phase-gauged
    Complex scale;                // X ~ scale * factors[0] (x) ... (x) factors[n-1]
    double residual;              // relative Frobenius reconstruction error
};

/// Tries to factor X (on the given dims) into a full tensor product.  Fails
/// (nullopt) when some cut has numeric rank > 1.
inline std::optional<ProductFactorization> factor_product(const Matrix& X,
                                                          const std::vector<int>& dims,
                                                          double tol = kDefaultTol) {
    ProductFactorization out;
    out.scale = Complex(1, 0);
    Matrix rest = X;
    std::vector<int> rest_dims = dims;
    while (rest_dims.size() > 1) {
        MultipartiteOperator cur(rest_dims, rest, tol);
        Bipartition cut = Bipartition::of({0}, static_cast<int>(rest_dims.size()));
        Matrix M = matricize(cur, cut);
        Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        if (sv(0) <= 0.0) return std::nullopt;
        // loose gate; the final reconstruction residual is decisive
        if (sv.size() > 1 && sv(1) > 1e-6 * sv(0)) return std::nullopt;
        const int d0 = rest_dims[0];
        const long dR = detail::dim_of(rest_dims, cut.right);
        Matrix f0(d0, d0);
        for (int r = 0; r < d0; ++r)
            for (int c = 0; c < d0; ++c) f0(r, c) = svd.matrixU()(r * d0 + c, 0);
        Matrix tail(dR, dR);
        for (long r = 0; r < dR; ++r)
            for (long c = 0; c < dR; ++c) tail(r, c) = sv(0) * std::conj(svd.matrixV()(r * dR + c, 0));
        out.scale *= normalize_factor(f0);
        out.factors.push_back(std::move(f0));
        rest = std::move(tail);
        rest_dims.erase(rest_dims.begin());
    }
    out.scale *= normalize_factor(rest);
    out.factors.push_back(std::move(rest));

    std::vector<Matrix> scaled = out.factors;
    Matrix recon = kron_all(scaled) * out.scale;
    const double nx = X.norm();
    out.residual = nx > 0 ? (recon - X).norm() / nx : (recon - X).norm();
    if (out.residual > 1e-8) return std::nullopt;
    return out;
}

}  // namespace qsr2
