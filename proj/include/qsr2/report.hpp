#pragma once

#include "qsr2/diag3.hpp"
#include "qsr2/schmidt.hpp"

#include <iomanip>
#include <sstream>

namespace qsr2 {

namespace detail {

inline std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

}  // namespace detail

inline std::string classification_report(const ClassLabel& label) {
    std::ostringstream os;
    os << "genuine: " << (label.genuine ? "true" : "false") << "\n";
    os << "sr_per_cut:";
    for (const auto& [cut, r] : label.sr_per_cut) os << ' ' << cut.to_string() << '=' << r;
    os << "\n";
    os << "singular_number: ";
    if (label.singular_number)
        os << *label.singular_number;
    else
        os << "n/a";
    os << "\n";
    return os.str();
}

inline std::string decomposition_report(const SchmidtDecompositionSR2& dec) {
    std::ostringstream os;
    os << std::setprecision(17);
    auto term = [&](const char* name, const std::vector<LocalOperator>& ops, Complex scale) {
        os << name << "_scale: " << scale.real() << ',' << scale.imag() << "\n";
        for (const auto& op : ops) {
            os << name << "_factor" << (op.party + 1) << ":";
            for (long r = 0; r < op.entries.rows(); ++r)
                for (long c = 0; c < op.entries.cols(); ++c)
                    os << ' ' << op.entries(r, c).real() << ',' << op.entries(r, c).imag();
            os << "\n";
        }
    };
    term("termA", dec.termA, dec.scaleA);
    term("termB", dec.termB, dec.scaleB);
    return os.str();
}

inline std::string diag3_report(const Diag3Verdict& v) {
    std::ostringstream os;
    os << "canonical: a=" << detail::fmt(v.canonical.alpha) << " b=" << detail::fmt(v.canonical.beta)
       << " g=" << detail::fmt(v.canonical.gamma) << " d=" << detail::fmt(v.canonical.delta) << "\n";
    os << "precondition: " << (v.genuine ? "true" : "false") << "\n";
    os << "class: " << to_string(v.slocca_class) << "\n";
    os << "schmidt_rank: " << v.schmidt_rank << "\n";
    os << "hyperdet: " << detail::fmt(v.hyperdet.real()) << ',' << detail::fmt(v.hyperdet.imag())
       << "\n";
    return os.str();
}

}  // namespace qsr2
