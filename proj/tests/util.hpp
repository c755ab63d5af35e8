#pragma once

#include "qsr2/families.hpp"

#include <random>

namespace testutil {

using qsr2::Complex;
using qsr2::Matrix;

inline Matrix random_unitary(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Matrix g(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
        Complex diag = r(j, j);
        if (std::abs(diag) > 0) q.col(j) *= diag / std::abs(diag);
    }
    return q;
}

inline Matrix random_product_unitary(const std::vector<int>& dims, std::mt19937_64& rng) {
    std::vector<Matrix> locals;
    for (int d : dims) locals.push_back(random_unitary(d, rng));
    return qsr2::kron_all(locals);
}

/// 1 - cos of the angle between two matrices viewed as vectors (0 iff same ray).
inline double line_distance(const Matrix& a, const Matrix& b) {
    const double na = a.norm(), nb = b.norm();
    if (na == 0 || nb == 0) return 1.0;
    const Complex ip = (a.adjoint() * b).trace();
    return 1.0 - std::abs(ip) / (na * nb);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Draws an in-domain parameter point for the family by rejection sampling.
inline qsr2::FamilySpec random_family_spec(qsr2::FamilyId id, int n, std::mt19937_64& rng) {
    using qsr2::FamilyId;
    const double margin = 0.05;
    auto angle = [&] { return uniform(rng, margin, 2 * qsr2::kPi - margin); };
    for (int tries = 0; tries < 1000; ++tries) {
        qsr2::FamilySpec spec{id, n, {}};
        switch (id) {
            case FamilyId::T3_K3: spec.params = {{"phi", angle()}}; break;
            case FamilyId::T3_K2_A: spec.params = {{"theta", angle()}, {"phi", angle()}}; break;
            case FamilyId::T3_K2_B: spec.params = {{"gamma", angle()}, {"delta", angle()}}; break;
            case FamilyId::T3_K1_A:
                spec.params = {{"c", uniform(rng, 0.2, 3.0)}, {"alpha", angle()}};
                break;
            case FamilyId::T3_K1_B:
                spec.params = {{"c", uniform(rng, 0.2, 3.0)},
                               {"alpha", angle()},
                               {"gamma", angle()}};
                break;
            case FamilyId::T3_K0: {
                // perturb a known variety point and refine back onto it
                qsr2::K0SystemPoint seed{Complex(0.5, -0.5), Complex(0.5, 0.5), Complex(0, -1),
                                         Complex(0, -1)};
                auto j = [&] { return Complex(uniform(rng, -0.05, 0.05), uniform(rng, -0.05, 0.05)); };
                seed.a += j();
                seed.b += j();
                seed.c += j();
                seed.d += j();
                qsr2::K0SystemPoint p;
                try {
                    p = qsr2::k0_solve(seed);
                } catch (const qsr2::SolverDivergedError&) {
                    continue;
                }
                spec.params = {{"a_re", p.a.real()}, {"a_im", p.a.imag()}, {"b_re", p.b.real()},
                               {"b_im", p.b.imag()}, {"c_re", p.c.real()}, {"c_im", p.c.imag()},
                               {"d_re", p.d.real()}, {"d_im", p.d.imag()}};
                break;
            }
            case FamilyId::N_KN: spec.params = {{"theta", angle()}}; break;
            case FamilyId::N_KNM1: spec.params = {{"theta", angle()}, {"phi", angle()}}; break;
            case FamilyId::N_K2:
                for (int j = 2; j <= n; ++j) spec.params["beta" + std::to_string(j)] = angle();
                break;
            case FamilyId::N_K1:
                spec.params = {{"alpha", uniform(rng, margin, qsr2::kPi - margin)}};
                break;
            case FamilyId::N_K0:
            case FamilyId::L5_EQ9:
                spec.params = {{"alpha", angle()}, {"beta", angle()}};
                break;
            case FamilyId::L5_EQ8: spec.params = {{"alpha", angle()}, {"beta", angle()}}; break;
        }
        try {
            qsr2::generate(spec);  // domain check only; caller regenerates
            return spec;
        } catch (const qsr2::ParamDomainError&) {
            continue;
        }
    }
    throw std::runtime_error("rejection sampling failed to find an in-domain point");
}

inline std::vector<qsr2::FamilyId> table_families() {
    using qsr2::FamilyId;
    return {FamilyId::T3_K3, FamilyId::T3_K2_A, FamilyId::T3_K2_B, FamilyId::T3_K1_A,
            FamilyId::T3_K1_B, FamilyId::T3_K0,  FamilyId::N_KN,    FamilyId::N_KNM1,
            FamilyId::N_K2,    FamilyId::N_K1,   FamilyId::N_K0};
}

}  // namespace testutil
