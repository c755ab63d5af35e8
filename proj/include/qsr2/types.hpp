#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsr2 {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-9;

// ---- error types -----------------------------------------------------------

struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BipartitionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotDiagonalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotUnitaryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotSchmidtRankTwoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotGenuineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateSpanError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParamDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotOnVarietyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SolverDivergedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InternalInvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- domain types ----------------------------------------------------------

/// Dense operator on a tensor product of local spaces.  Entries are stored
/// row-major over the composite index with party 1 slowest.
struct MultipartiteOperator {
    std::vector<int> dims;
    Matrix entries;
    double tol = kDefaultTol;

    MultipartiteOperator() = default;

    MultipartiteOperator(std::vector<int> dims_, Matrix entries_, double tol_ = kDefaultTol)
        : dims(std::move(dims_)), entries(std::move(entries_)), tol(tol_) {
        const long side = total_dim();
        if (entries.rows() != side || entries.cols() != side)
            throw DimensionError("operator matrix must be square of side prod(dims)");
        for (int d : dims)
            if (d < 2) throw DimensionError("every local dimension must be >= 2");
        if (!(tol > 0.0 && tol < 1.0))
            throw DimensionError("tol must lie in (0,1)");
    }

    long total_dim() const {
        long p = 1;
        for (int d : dims) p *= d;
        return p;
    }
    int parties() const { return static_cast<int>(dims.size()); }
};

/// A bipartition S | S-bar of party indices {0,..,n-1}.
struct Bipartition {
    std::vector<int> left;   // sorted
    std::vector<int> right;  // sorted complement

    static Bipartition of(std::vector<int> left_set, int n_parties) {
        std::set<int> ls(left_set.begin(), left_set.end());
        Bipartition cut;
        for (int p : ls) {
            if (p < 0 || p >= n_parties) throw BipartitionError("party index out of range");
            cut.left.push_back(p);
        }
        for (int p = 0; p < n_parties; ++p)
            if (!ls.count(p)) cut.right.push_back(p);
        if (cut.left.empty() || cut.right.empty())
            throw BipartitionError("both sides of a bipartition must be nonempty");
        return cut;
    }

    std::string to_string() const {
        std::string s;
        for (size_t i = 0; i < left.size(); ++i)
            s += (i ? "," : "") + std::to_string(left[i] + 1);
        s += "|";
        for (size_t i = 0; i < right.size(); ++i)
            s += (i ? "," : "") + std::to_string(right[i] + 1);
        return s;
    }
};

/// Operator acting on a single party.
struct LocalOperator {
    int party = 0;
    Matrix entries;
};

/// Enumerates all bipartitions of n parties (party 0 always on the left side,
/// so each unordered cut appears once).
inline std::vector<Bipartition> all_bipartitions(int n) {
    std::vector<Bipartition> cuts;
    const unsigned full = 1u << (n - 1);
    for (unsigned mask = 0; mask + 1 < full; ++mask) {
        std::vector<int> left{0};
        for (int p = 1; p < n; ++p)
            if (mask & (1u << (p - 1))) left.push_back(p);
        cuts.push_back(Bipartition::of(left, n));
    }
    return cuts;
}

}  // namespace qsr2
