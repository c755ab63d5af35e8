#pragma once

#include "qsr2/schmidt.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace qsr2 {

/// Canonical form diag(1,e^{ia},e^{ib},e^{ig},1,1,1,e^{id}) of a 3-qubit
/// diagonal unitary, together with the local phase gates that produced it.
struct Diag3Canonical {
    double alpha = 0, beta = 0, gamma = 0, delta = 0;
    // theta11, theta21, theta22, theta31, theta32, global
    std::array<double, 6> local_phases{};

    Vector canonical_diag() const {
        Vector v(8);
        v << 1.0, std::polar(1.0, alpha), std::polar(1.0, beta), std::polar(1.0, gamma), 1.0, 1.0,
            1.0, std::polar(1.0, delta);
        return v;
    }

    /// Total phase the recorded gates apply at diagonal position (j,k,l).
    double applied_phase(int j, int k, int l) const {
        return (j == 0 ? local_phases[0] : 0.0) + (k == 0 ? local_phases[1] : local_phases[2]) +
               (l == 0 ? local_phases[3] : local_phases[4]) + local_phases[5];
    }
};

enum class SloccaClass { Product, Biseparable, GHZ, W };

inline const char* to_string(SloccaClass c) {
    switch (c) {
        case SloccaClass::Product: return "product";
        case SloccaClass::Biseparable: return "biseparable";
        case SloccaClass::GHZ: return "ghz";
        case SloccaClass::W: return "w";
    }
    return "?";
}

struct Diag3Verdict {
    bool genuine = false;
    int schmidt_rank = 1;  // tensor rank of the isomorphic state
    SloccaClass slocca_class = SloccaClass::Product;
    Diag3Canonical canonical;
    Complex hyperdet{};
};

namespace detail {

inline double wrap_02pi(double t) {
    const double two_pi = 2 * std::numbers::pi;
    t = std::fmod(t, two_pi);
    if (t < 0) t += two_pi;
    if (two_pi - t < 1e-14) t = 0;
    return t;
}

}  // namespace detail

/// Solves the local diagonal phase gates that set the entries at 000,100,101,110
/// to one, and reads off the four canonical angles.
inline Diag3Canonical canonicalize(const MultipartiteOperator& U) {
    const Vector u = diag3_isomorphic_state(U);  // throws on wrong dims / non-diagonal
    for (int i = 0; i < 8; ++i)
        if (std::abs(std::abs(u(i)) - 1.0) > U.tol * 10)
            throw NotUnitaryError("diagonal entries must have unit modulus");

    auto ph = [&](int j, int k, int l) { return -std::arg(u(4 * j + 2 * k + l)); };
    Diag3Canonical c;
    const double global = ph(1, 0, 0);
    const double t11 = ph(0, 0, 0) - global;
    const double t32 = ph(1, 0, 1) - global;
    const double t22 = ph(1, 1, 0) - global;
    c.local_phases = {t11, 0.0, t22, 0.0, t32, global};

    auto angle = [&](int j, int k, int l) {
        return detail::wrap_02pi(std::arg(u(4 * j + 2 * k + l)) + c.applied_phase(j, k, l));
    };
    c.alpha = angle(0, 0, 1);
    c.beta = angle(0, 1, 0);
    c.gamma = angle(0, 1, 1);
    c.delta = angle(1, 1, 1);
    return c;
}

/// The three tuple conditions equivalent to all matrices of the pairwise
/// flattenings having rank two; false means a product cut exists.
inline bool genuineness_precondition(const Diag3Canonical& c, double tol = 1e-10) {
    const Complex ea = std::polar(1.0, c.alpha), eb = std::polar(1.0, c.beta);
    const Complex eg = std::polar(1.0, c.gamma), ed = std::polar(1.0, c.delta);
    auto tuple_eq = [&](Complex x1, Complex x2, Complex x3, Complex y1, Complex y2, Complex y3) {
        return std::abs(x1 - y1) <= tol && std::abs(x2 - y2) <= tol && std::abs(x3 - y3) <= tol;
    };
    if (tuple_eq(ea, eb, eg, 1.0, 1.0, ed)) return false;
    if (tuple_eq(eb, eg, ed, 1.0, ea, 1.0)) return false;
    if (tuple_eq(ea, eg, ed, 1.0, eb, 1.0)) return false;
    return true;
}

/// Necessary and sufficient condition for the canonical gate to be in the W
/// class (tensor rank three).
inline bool w_condition(const Diag3Canonical& c, double tol = 1e-10) {
    if (!genuineness_precondition(c, tol))
        throw NotGenuineError("W condition needs the genuineness precondition");
    const Complex ea = std::polar(1.0, c.alpha), eb = std::polar(1.0, c.beta);
    const Complex eg = std::polar(1.0, c.gamma), ed = std::polar(1.0, c.delta);
    if (std::abs(ed - 1.0) <= tol) {
        // delta = 0 branch
        return std::abs(eg + 1.0) <= tol && std::abs(ea + eb) <= tol &&
               std::abs(ea - 1.0) > tol && std::abs(ea + 1.0) > tol;
    }
    const Complex lhs = (eg + ed - ea - eb) * (eg + ed - ea - eb);
    const Complex rhs = 4.0 * (ed - 1.0) * (eg - ea * eb);
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    return std::abs(lhs - rhs) <= tol * scale;
}

/// Cayley 2x2x2 hyperdeterminant, normalized so Det(1,0,0,0,0,0,0,1) = 1.
/// Vanishes exactly on the non-GHZ SLOCC classes.
inline Complex hyperdeterminant(const Vector& psi) {
    if (psi.size() != 8) throw DimensionError("hyperdeterminant needs an 8-vector");
    auto a = [&](int j, int k, int l) { return psi(4 * j + 2 * k + l); };
    const Complex a000 = a(0, 0, 0), a001 = a(0, 0, 1), a010 = a(0, 1, 0), a011 = a(0, 1, 1);
    const Complex a100 = a(1, 0, 0), a101 = a(1, 0, 1), a110 = a(1, 1, 0), a111 = a(1, 1, 1);
    return a000 * a000 * a111 * a111 + a001 * a001 * a110 * a110 + a010 * a010 * a101 * a101 +
           a011 * a011 * a100 * a100 -
           2.0 * (a000 * a001 * a110 * a111 + a000 * a010 * a101 * a111 + a000 * a011 * a100 * a111 +
                  a001 * a010 * a101 * a110 + a001 * a011 * a100 * a110 + a010 * a011 * a100 * a101) +
           4.0 * (a000 * a011 * a101 * a110 + a001 * a010 * a100 * a111);
}

/// Complete verdict for a 3-qubit diagonal unitary, cross-checked against the
/// hyperdeterminant of the isomorphic state.
inline Diag3Verdict classify_diag3(const MultipartiteOperator& U) {
    Diag3Verdict verdict;
    const Vector psi = diag3_isomorphic_state(U);
    verdict.canonical = canonicalize(U);  // also enforces unitarity
    verdict.hyperdet = hyperdeterminant(psi);
    const double psi_norm = psi.norm();
    const bool det_nonzero = std::abs(verdict.hyperdet) > 1e-8 * std::pow(psi_norm, 4);

    if (!genuineness_precondition(verdict.canonical)) {
        verdict.genuine = false;
        int rank1_cuts = 0, max_sr = 1;
        for (const auto& cut : all_bipartitions(3)) {
            const int r = operator_schmidt_rank(U, cut);
            if (r == 1) ++rank1_cuts;
            max_sr = std::max(max_sr, r);
        }
        if (rank1_cuts == 0)
            throw InternalInvariantViolation("precondition failed but no product cut found");
        verdict.schmidt_rank = max_sr;
        verdict.slocca_class = rank1_cuts == 3 ? SloccaClass::Product : SloccaClass::Biseparable;
        if (det_nonzero)
            throw InternalInvariantViolation("hyperdeterminant nonzero for a non-genuine gate");
        return verdict;
    }

    verdict.genuine = true;
    const bool w = w_condition(verdict.canonical);
    verdict.schmidt_rank = w ? 3 : 2;
    verdict.slocca_class = w ? SloccaClass::W : SloccaClass::GHZ;
    if (w == det_nonzero)
        throw InternalInvariantViolation("W condition disagrees with the hyperdeterminant oracle");
    return verdict;
}

}  // namespace qsr2
