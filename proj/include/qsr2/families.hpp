#pragma once

#include "qsr2/schmidt.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <string>

namespace qsr2 {

inline constexpr double kPi = std::numbers::pi;

enum class FamilyId {
    T3_K3,
    T3_K2_A,
    T3_K2_B,
    T3_K1_A,
    T3_K1_B,
    T3_K0,
    N_KN,
    N_KNM1,
    N_K2,
    N_K1,
    N_K0,
    L5_EQ8,
    L5_EQ9,
};

inline const std::map<std::string, FamilyId>& family_names() {
    static const std::map<std::string, FamilyId> names = {
        {"t3-k3", FamilyId::T3_K3},   {"t3-k2a", FamilyId::T3_K2_A},
        {"t3-k2b", FamilyId::T3_K2_B}, {"t3-k1a", FamilyId::T3_K1_A},
        {"t3-k1b", FamilyId::T3_K1_B}, {"t3-k0", FamilyId::T3_K0},
        {"n-kn", FamilyId::N_KN},     {"n-kn1", FamilyId::N_KNM1},
        {"n-k2", FamilyId::N_K2},     {"n-k1", FamilyId::N_K1},
        {"n-k0", FamilyId::N_K0},     {"l5-eq8", FamilyId::L5_EQ8},
        {"l5-eq9", FamilyId::L5_EQ9},
    };
    return names;
}

inline std::string family_name(FamilyId id) {
    for (const auto& [name, fid] : family_names())
        if (fid == id) return name;
    return "?";
}

struct FamilySpec {
    FamilyId family_id;
    int n = 3;
    std::map<std::string, double> params;

    double get(const std::string& key) const {
        auto it = params.find(key);
        if (it == params.end()) throw ParamDomainError("missing parameter '" + key + "'");
        return it->second;
    }
    Complex get_complex(const std::string& key) const {
        return Complex(get(key + "_re"), get(key + "_im"));
    }
};

struct K0SystemPoint {
    Complex a, b, c, d;
};

struct GeneratedGate {
    MultipartiteOperator op;
    std::optional<SchmidtDecompositionSR2> declared;
    std::optional<int> declared_k;
};

namespace detail {

inline Matrix I2() { return Matrix::Identity(2, 2); }
inline Matrix proj0() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1;
    return m;
}
inline Matrix proj1() {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 1) = 1;
    return m;
}
inline Matrix diag2(Complex x, Complex y) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = x;
    m(1, 1) = y;
    return m;
}
inline Matrix sigma3() { return diag2(1, -1); }

inline Complex expi(double t) { return std::polar(1.0, t); }

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ParamDomainError(what);
}

inline void require_open_02pi(double t, const std::string& name) {
    require(t > 1e-12 && t < 2 * kPi - 1e-12, name + " must lie in the open interval (0,2pi)");
}

/// Assembles U = (x)A_j + (x)B_j with a declared gauged decomposition.
inline GeneratedGate assemble(std::vector<Matrix> A, std::vector<Matrix> B,
                              std::optional<int> k, double tol, bool declare = true) {
    GeneratedGate g;
    Matrix U = kron_all(A) + kron_all(B);
    std::vector<int> dims(A.size(), 2);
    g.op = MultipartiteOperator(dims, std::move(U), tol);
    if (declare) {
        SchmidtDecompositionSR2 dec;
        dec.scaleA = dec.scaleB = Complex(1, 0);
        for (size_t j = 0; j < A.size(); ++j) {
            dec.scaleA *= normalize_factor(A[j]);
            dec.scaleB *= normalize_factor(B[j]);
            dec.termA.push_back(LocalOperator{static_cast<int>(j), A[j]});
            dec.termB.push_back(LocalOperator{static_cast<int>(j), B[j]});
        }
        g.declared = std::move(dec);
        g.declared_k = k;
    }
    return g;
}

}  // namespace detail

// ---- the k=1 unit-modulus triple (three nonzero complex numbers f, g, h) ----

enum class K1Case { I, II };

struct K1Triple {
    Complex f, g, h;
};

/// Solves |f+c| = |g+c| = |fh+c| = |gh+c| = 1 for a given c > 0, c != 1.
inline K1Triple k1_parametric_solution(double c, K1Case which, double alpha,
                                       std::optional<double> gamma = std::nullopt) {
    detail::require(c > 0, "c must be positive");
    detail::require(std::abs(c - 1.0) > 1e-9, "c = 1 admits no solution");
    K1Triple t;
    if (which == K1Case::I) {
        detail::require(alpha > 1e-12 && alpha < 2 * kPi - 1e-12 && std::abs(alpha - kPi) > 1e-12,
                        "alpha must lie in (0,pi) u (pi,2pi)");
        detail::require(std::abs(c * std::cos(alpha) - 1.0) > 1e-9, "c*cos(alpha) = 1 excluded");
        t.f = detail::expi(alpha) - c;
        t.g = std::conj(t.f);
        t.h = (c * c - 1.0) / (1.0 + c * c - 2.0 * c * std::cos(alpha));
    } else {
        detail::require(gamma.has_value(), "case II needs gamma");
        const double g = *gamma;
        detail::require(alpha >= 0 && alpha < 2 * kPi && g >= 0 && g < 2 * kPi,
                        "alpha, gamma must lie in [0,2pi)");
        detail::require(std::abs(alpha - g) > 1e-9, "alpha = gamma excluded");
        const double num = c * std::sin((alpha + g) / 2) - std::sin((alpha - g) / 2);
        const double den = c * std::cos((alpha + g) / 2) - std::cos((alpha - g) / 2);
        detail::require(std::abs(den) > 1e-9, "c*cos((alpha+gamma)/2) = cos((alpha-gamma)/2) excluded");
        const double theta = 2.0 * std::atan(num / den);  // in (-pi,pi)
        auto near_mod_2pi = [](double x, double y) {
            double d = std::fmod(std::abs(x - y), 2 * kPi);
            return std::min(d, 2 * kPi - d) < 1e-9;
        };
        detail::require(!near_mod_2pi(alpha, (kPi + theta) / 2) && !near_mod_2pi(alpha, (3 * kPi + theta) / 2),
                        "alpha in {(pi+theta)/2, (3pi+theta)/2} excluded");
        t.f = detail::expi(alpha) - c;
        t.g = -detail::expi(theta - alpha) - c;
        t.h = (detail::expi(g) - c) / (detail::expi(alpha) - c);
    }
    const double err = std::max({std::abs(std::abs(t.f + c) - 1.0), std::abs(std::abs(t.g + c) - 1.0),
                                 std::abs(std::abs(t.f * t.h + c) - 1.0),
                                 std::abs(std::abs(t.g * t.h + c) - 1.0)});
    if (err > 1e-10)
        throw InternalInvariantViolation("k1 triple violates the unit-modulus constraints");
    if (std::abs(t.f - t.g) < 1e-9 || std::abs(t.h - 1.0) < 1e-9)
        throw ParamDomainError("parameters degenerate (f = g or h = 1)");
    return t;
}

// ---- the k=0 three-qubit variety -------------------------------------------

/// Max deviation over the four modulus equations the k=0 parameters must solve.
inline double k0_residual(const K0SystemPoint& p) {
    const Complex a = p.a, b = p.b, c = p.c, d = p.d;
    const double rhs1 = std::abs(1.0 - b);
    const double e1 = std::abs(std::abs((1.0 - a) * (1.0 - d) + d * (1.0 - b)) - rhs1);
    const double e2 = std::abs(std::abs((1.0 - a) * (1.0 - c) + c * (1.0 - b)) - rhs1);
    const double e3 = std::abs(
        std::abs((1.0 - a) * (1.0 - b * c) * (1.0 - b * d) + a * c * d * (1.0 - b) * (1.0 - b)) -
        rhs1 * rhs1);
    const double e4 = std::abs(std::abs((1.0 - b * c) * (1.0 - b * d) + b * c * d * (1.0 - b)) - rhs1);
    return std::max({e1, e2, e3, e4});
}

namespace detail {

inline void check_k0_point(const K0SystemPoint& p) {
    for (Complex z : {p.a, p.b, p.c, p.d}) {
        require(std::abs(z) > 1e-9, "a,b,c,d must be nonzero");
        require(std::abs(z - 1.0) > 1e-9, "a,b,c,d must differ from 1");
    }
    require(std::abs(p.a - p.b) > 1e-9, "a = b excluded");
}

inline Eigen::Vector4d k0_signed_residuals(const Eigen::VectorXd& x) {
    const Complex a(x(0), x(1)), b(x(2), x(3)), c(x(4), x(5)), d(x(6), x(7));
    const double rhs1 = std::abs(1.0 - b);
    Eigen::Vector4d r;
    r(0) = std::abs((1.0 - a) * (1.0 - d) + d * (1.0 - b)) - rhs1;
    r(1) = std::abs((1.0 - a) * (1.0 - c) + c * (1.0 - b)) - rhs1;
    r(2) = std::abs((1.0 - a) * (1.0 - b * c) * (1.0 - b * d) + a * c * d * (1.0 - b) * (1.0 - b)) -
           rhs1 * rhs1;
    r(3) = std::abs((1.0 - b * c) * (1.0 - b * d) + b * c * d * (1.0 - b)) - rhs1;
    return r;
}

}  // namespace detail

/// Damped least-squares refinement of a seed onto the k=0 variety.
inline K0SystemPoint k0_solve(const K0SystemPoint& seed, int max_iter = 200) {
    detail::check_k0_point(seed);
    Eigen::VectorXd x(8);
    x << seed.a.real(), seed.a.imag(), seed.b.real(), seed.b.imag(), seed.c.real(), seed.c.imag(),
        seed.d.real(), seed.d.imag();
    double lambda = 1e-3;
    Eigen::Vector4d r = detail::k0_signed_residuals(x);
    for (int iter = 0; iter < max_iter; ++iter) {
        if (r.cwiseAbs().maxCoeff() <= 1e-13) break;
        Eigen::Matrix<double, 4, 8> J;
        const double h = 1e-7;
        for (int j = 0; j < 8; ++j) {
            Eigen::VectorXd xp = x;
            xp(j) += h;
            J.col(j) = (detail::k0_signed_residuals(xp) - r) / h;
        }
        const Eigen::Matrix<double, 8, 8> JtJ = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;
        bool accepted = false;
        for (int tries = 0; tries < 12 && !accepted; ++tries) {
            Eigen::Matrix<double, 8, 8> A =
                JtJ + lambda * Eigen::Matrix<double, 8, 8>::Identity();
            Eigen::VectorXd step = A.ldlt().solve(-g);
            Eigen::VectorXd xn = x + step;
            Eigen::Vector4d rn = detail::k0_signed_residuals(xn);
            if (rn.squaredNorm() < r.squaredNorm()) {
                x = xn;
                r = rn;
                lambda = std::max(lambda * 0.3, 1e-12);
                accepted = true;
            } else {
                lambda *= 10;
            }
        }
        if (!accepted) break;
    }
    if (r.cwiseAbs().maxCoeff() > 1e-8)
        throw SolverDivergedError("k0 solver did not reach the variety");
    K0SystemPoint out{Complex(x(0), x(1)), Complex(x(2), x(3)), Complex(x(4), x(5)),
                      Complex(x(6), x(7))};
    detail::check_k0_point(out);
    return out;
}

/// True iff (e^{ia}-1)(e^{id}-1) = (e^{ib}-1)(e^{ig}-1); holds exactly on the
/// two pairings (a,d)=(b,g) and (a,d)=(g,b).
inline bool phase_product_equation_holds(double a, double b, double g, double d) {
    for (double t : {a, b, g, d})
        detail::require(t > 0 && t < 2 * kPi, "angles must lie in (0,2pi)");
    const Complex lhs = (detail::expi(a) - 1.0) * (detail::expi(d) - 1.0);
    const Complex rhs = (detail::expi(b) - 1.0) * (detail::expi(g) - 1.0);
    return std::abs(lhs - rhs) <= 1e-10;
}

// ---- family generators ------------------------------------------------------

inline GeneratedGate generate(const FamilySpec& spec, double tol = kDefaultTol) {
    using namespace detail;
    const int n = spec.n;
    switch (spec.family_id) {
        case FamilyId::T3_K3: {
            require(n == 3, "t3-k3 is a three-qubit family");
            const double phi = spec.get("phi");
            require_open_02pi(phi, "phi");
            return assemble({I2(), I2(), I2()}, {proj0(), proj0(), (expi(phi) - 1.0) * proj0()}, 3,
                            tol);
        }
        case FamilyId::T3_K2_A: {
            require(n == 3, "t3-k2a is a three-qubit family");
            const double th = spec.get("theta"), ph = spec.get("phi");
            require_open_02pi(th, "theta");
            require_open_02pi(ph, "phi");
            require(std::abs(th - ph) > 1e-9, "theta = phi excluded (gate not genuine)");
            return assemble({I2(), I2(), I2()},
                            {proj1(), proj1(), diag2(expi(th) - 1.0, expi(ph) - 1.0)}, 2, tol);
        }
        case FamilyId::T3_K2_B: {
            require(n == 3, "t3-k2b is a three-qubit family");
            const double ga = spec.get("gamma"), de = spec.get("delta");
            require_open_02pi(ga, "gamma");
            require_open_02pi(de, "delta");
            return assemble({proj0(), I2(), I2()},
                            {proj1(), diag2(1, expi(ga)), diag2(1, expi(de))}, 2, tol);
        }
        case FamilyId::T3_K1_A: {
            require(n == 3, "t3-k1a is a three-qubit family");
            const double c = spec.get("c"), al = spec.get("alpha");
            K1Triple t = k1_parametric_solution(c, K1Case::I, al);
            return assemble({proj0(), diag2(t.f, t.g), diag2(1, t.h)}, {diag2(c, 1), I2(), I2()}, 1,
                            tol);
        }
        case FamilyId::T3_K1_B: {
            require(n == 3, "t3-k1b is a three-qubit family");
            const double c = spec.get("c"), al = spec.get("alpha"), ga = spec.get("gamma");
            K1Triple t = k1_parametric_solution(c, K1Case::II, al, ga);
            return assemble({proj0(), diag2(t.f, t.g), diag2(1, t.h)}, {diag2(c, 1), I2(), I2()}, 1,
                            tol);
        }
        case FamilyId::T3_K0: {
            require(n == 3, "t3-k0 is a three-qubit family");
            K0SystemPoint p{spec.get_complex("a"), spec.get_complex("b"), spec.get_complex("c"),
                            spec.get_complex("d")};
            check_k0_point(p);
            if (k0_residual(p) > 1e-8)
                throw NotOnVarietyError("(a,b,c,d) does not satisfy the k=0 system");
            const Complex g = (1.0 - p.b * p.c) / (1.0 - p.b);
            const Complex h = (1.0 - p.b * p.d) / (1.0 - p.b);
            return assemble({diag2(p.a, p.b), diag2(1, p.c), diag2(1, p.d)},
                            {diag2(1.0 - p.a, 1.0 - p.b), diag2(1, g), diag2(1, h)}, 0, tol);
        }
        case FamilyId::N_KN: {
            require(n >= 4, "n-kn needs n >= 4");
            const double th = spec.get("theta");
            require_open_02pi(th, "theta");
            std::vector<Matrix> A(n, I2()), B(n, proj0());
            B.back() *= expi(th) - 1.0;
            return assemble(std::move(A), std::move(B), n, tol);
        }
        case FamilyId::N_KNM1: {
            require(n >= 4, "n-kn1 needs n >= 4");
            const double th = spec.get("theta"), ph = spec.get("phi");
            require_open_02pi(th, "theta");
            require_open_02pi(ph, "phi");
            require(std::abs(th - ph) > 1e-9, "theta = phi excluded (gate not genuine)");
            std::vector<Matrix> A(n, I2()), B(n - 1, proj0());
            B.push_back(diag2(expi(th) - 1.0, expi(ph) - 1.0));
            return assemble(std::move(A), std::move(B), n - 1, tol);
        }
        case FamilyId::N_K2: {
            require(n >= 4, "n-k2 needs n >= 4");
            std::vector<Matrix> A{proj0()}, B{proj1()};
            for (int j = 2; j <= n; ++j) {
                const double bj = spec.get("beta" + std::to_string(j));
                require_open_02pi(bj, "beta" + std::to_string(j));
                A.push_back(I2());
                B.push_back(diag2(1, expi(bj)));
            }
            return assemble(std::move(A), std::move(B), 2, tol);
        }
        case FamilyId::N_K1: {
            require(n >= 4, "n-k1 needs n >= 4");
            const double al = spec.get("alpha");
            require(al > 1e-12 && al < kPi - 1e-12 && std::abs(al - kPi / 2) > 1e-12,
                    "alpha must lie in (0,pi/2) u (pi/2,pi)");
            std::vector<Matrix> A{Complex(0, 1) * std::cos(al) * proj0()};
            std::vector<Matrix> B{diag2(std::sin(al), 1)};
            for (int j = 1; j < n; ++j) {
                A.push_back(sigma3());
                B.push_back(I2());
            }
            return assemble(std::move(A), std::move(B), 1, tol);
        }
        case FamilyId::N_K0: {
            require(n >= 4, "n-k0 needs n >= 4");
            const double al = spec.get("alpha"), be = spec.get("beta");
            for (double t : {al, be})
                require(std::abs(std::remainder(t, kPi / 2)) > 1e-9,
                        "alpha, beta must avoid multiples of pi/2");
            require(std::abs(std::sin(al - be)) > 1e-9,
                    "alpha = beta (mod pi) excluded (gate not genuine)");
            std::vector<Matrix> A{diag2(std::cos(al), std::cos(be))};
            std::vector<Matrix> B{Complex(0, 1) * diag2(std::sin(al), std::sin(be))};
            for (int j = 1; j < n; ++j) {
                A.push_back(I2());
                B.push_back(sigma3());
            }
            return assemble(std::move(A), std::move(B), 0, tol);
        }
        case FamilyId::L5_EQ8: {
            require(n == 3, "l5-eq8 is a three-qubit form");
            const double al = spec.get("alpha"), be = spec.get("beta");
            const bool genuine = std::abs(std::sin(al)) > 1e-9 && std::abs(std::sin(be)) > 1e-9;
            GeneratedGate g = assemble({proj0(), I2(), I2()},
                                       {proj1(), diag2(expi(al), expi(-al)), diag2(expi(be), expi(-be))},
                                       genuine ? std::optional<int>(2) : std::nullopt, tol, genuine);
            return g;
        }
        case FamilyId::L5_EQ9: {
            require(n == 3, "l5-eq9 is a three-qubit form");
            const double al = spec.get("alpha"), be = spec.get("beta");
            bool genuine = std::abs(std::sin(al - be)) > 1e-9;
            for (double t : {al, be})
                genuine = genuine && std::abs(std::remainder(t, kPi / 2)) > 1e-9;
            GeneratedGate g = assemble({diag2(std::cos(al), std::cos(be)), I2(), I2()},
                                       {Complex(0, 1) * diag2(std::sin(al), std::sin(be)), sigma3(),
                                        sigma3()},
                                       genuine ? std::optional<int>(0) : std::nullopt, tol, genuine);
            return g;
        }
    }
    throw ParamDomainError("unknown family");
}

}  // namespace qsr2
