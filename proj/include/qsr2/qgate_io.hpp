#pragma once

#include "qsr2/tensor.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace qsr2 {

namespace detail {

inline std::vector<std::string> qgate_tokens(std::istream& in) {
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    return tokens;
}

inline Complex parse_complex(const std::string& tok) {
    const auto comma = tok.find(',');
    if (comma == std::string::npos) throw ParseError("expected complex entry 're,im', got '" + tok + "'");
    try {
        size_t used = 0;
        const double re = std::stod(tok.substr(0, comma), &used);
        if (used != comma) throw ParseError("bad real part in '" + tok + "'");
        const std::string imag = tok.substr(comma + 1);
        const double im = std::stod(imag, &used);
        if (used != imag.size()) throw ParseError("bad imaginary part in '" + tok + "'");
        return Complex(re, im);
    } catch (const std::invalid_argument&) {
        throw ParseError("bad complex entry '" + tok + "'");
    } catch (const std::out_of_range&) {
        throw ParseError("complex entry out of range '" + tok + "'");
    }
}

}  // namespace detail

inline MultipartiteOperator read_qgate(std::istream& in, double tol = kDefaultTol) {
    const std::vector<std::string> toks = detail::qgate_tokens(in);
    size_t i = 0;
    auto next = [&]() -> const std::string& {
        if (i >= toks.size()) throw ParseError("unexpected end of qgate file");
        return toks[i++];
    };
    if (next() != "qgate" || next() != "1") throw ParseError("missing 'qgate 1' header");
    if (next() != "dims:") throw ParseError("expected 'dims:'");
    std::vector<int> dims;
    while (i < toks.size() && toks[i] != "kind:") {
        try {
            dims.push_back(std::stoi(toks[i]));
        } catch (const std::exception&) {
            throw ParseError("bad dimension '" + toks[i] + "'");
        }
        ++i;
    }
    if (dims.empty()) throw ParseError("empty dims list");
    if (next() != "kind:") throw ParseError("expected 'kind:'");
    const std::string kind = next();
    long D = 1;
    for (int d : dims) {
        if (d < 2) throw ParseError("local dimensions must be >= 2");
        D *= d;
    }
    Matrix m = Matrix::Zero(D, D);
    if (kind == "dense") {
        for (long r = 0; r < D; ++r)
            for (long c = 0; c < D; ++c) m(r, c) = detail::parse_complex(next());
    } else if (kind == "diagonal") {
        for (long r = 0; r < D; ++r) m(r, r) = detail::parse_complex(next());
    } else {
        throw ParseError("unknown kind '" + kind + "'");
    }
    if (i != toks.size()) throw ParseError("trailing tokens in qgate file");
    try {
        return MultipartiteOperator(dims, std::move(m), tol);
    } catch (const DimensionError& e) {
        throw ParseError(e.what());
    }
}

inline MultipartiteOperator read_qgate_file(const std::string& path, double tol = kDefaultTol) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return read_qgate(in, tol);
}

inline void write_qgate(std::ostream& out, const MultipartiteOperator& U) {
    out << "qgate 1\n";
    out << "dims:";
    for (int d : U.dims) out << ' ' << d;
    out << "\nkind: " << (is_diagonal(U) ? "diagonal" : "dense") << "\n";
    out << std::setprecision(17);
    const long D = U.total_dim();
    if (is_diagonal(U)) {
        for (long r = 0; r < D; ++r)
            out << (r ? " " : "") << U.entries(r, r).real() << ',' << U.entries(r, r).imag();
        out << "\n";
    } else {
        for (long r = 0; r < D; ++r) {
            for (long c = 0; c < D; ++c)
                out << (c ? " " : "") << U.entries(r, c).real() << ',' << U.entries(r, c).imag();
            out << "\n";
        }
    }
}

inline void write_qgate_file(const std::string& path, const MultipartiteOperator& U) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    write_qgate(out, U);
}

}  // namespace qsr2
