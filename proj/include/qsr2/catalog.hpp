#pragma once

#include "qsr2/families.hpp"

namespace qsr2 {

inline std::vector<std::string> catalog_names() {
    return {"cnot", "swap", "toffoli", "ccz", "example1-d", "wstate-gate"};
}

/// Built-in example gates.  Throws ParseError on unknown names so the CLI can
/// map it to its usage exit code.
inline MultipartiteOperator catalog_gate(const std::string& name, double tol = kDefaultTol) {
    auto dense = [&](std::vector<int> dims, std::initializer_list<Complex> entries) {
        const long D = [&] {
            long p = 1;
            for (int d : dims) p *= d;
            return p;
        }();
        Matrix m(D, D);
        auto it = entries.begin();
        for (long r = 0; r < D; ++r)
            for (long c = 0; c < D; ++c) m(r, c) = *it++;
        return MultipartiteOperator(dims, std::move(m), tol);
    };
    auto diag = [&](std::vector<int> dims, std::vector<Complex> d) {
        Matrix m = Matrix::Zero(static_cast<long>(d.size()), static_cast<long>(d.size()));
        for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return MultipartiteOperator(dims, std::move(m), tol);
    };

    if (name == "cnot")
        return dense({2, 2}, {1, 0, 0, 0,  //
                              0, 1, 0, 0,  //
                              0, 0, 0, 1,  //
                              0, 0, 1, 0});
    if (name == "swap")
        return dense({2, 2}, {1, 0, 0, 0,  //
                              0, 0, 1, 0,  //
                              0, 1, 0, 0,  //
                              0, 0, 0, 1});
    if (name == "toffoli") {
        Matrix m = Matrix::Identity(8, 8);
        m(6, 6) = m(7, 7) = 0;
        m(6, 7) = m(7, 6) = 1;
        return MultipartiteOperator({2, 2, 2}, std::move(m), tol);
    }
    if (name == "ccz") return diag({2, 2, 2}, {1, 1, 1, 1, 1, 1, 1, -1});
    if (name == "example1-d") return diag({2, 2, 2}, {-1, 1, 1, 1, 1, 1, 1, -1});
    if (name == "wstate-gate") {
        const Complex e = std::polar(1.0, kPi / 4), ec = std::conj(e);
        return diag({2, 2, 2}, {e, ec, ec, e, 1, -1, 1, -1});
    }
    throw ParseError("unknown catalog gate '" + name + "'");
}

}  // namespace qsr2
