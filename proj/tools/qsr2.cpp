// qsr2: analyze / generate / classify-diag3 / sweep / examples for
// multipartite gates in the QGATE text format.

#include "qsr2/catalog.hpp"
#include "qsr2/diag3.hpp"
#include "qsr2/qgate_io.hpp"
#include "qsr2/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>

namespace {

constexpr int kExitParse = 2;
constexpr int kExitNotUnitary = 3;
constexpr int kExitDomain = 4;
constexpr int kExitInvariant = 5;

std::vector<int> parse_permutation(const std::string& s) {
    std::vector<int> perm;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        try {
            perm.push_back(std::stoi(tok) - 1);  // user-facing parties are 1-based
        } catch (const std::exception&) {
            throw qsr2::ParseError("bad permutation entry '" + tok + "'");
        }
    }
    if (perm.empty()) throw qsr2::ParseError("empty permutation");
    return perm;
}

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, double> params;
    for (const std::string& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw qsr2::ParseError("expected --param name=value, got '" + kv + "'");
        try {
            params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw qsr2::ParseError("bad parameter value in '" + kv + "'");
        }
    }
    return params;
}

struct GridAxis {
    std::string name;
    double lo = 0, hi = 0;
    int steps = 1;
};

GridAxis parse_grid(const std::string& s) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw qsr2::ParseError("expected --grid name=lo:hi:steps");
    GridAxis axis;
    axis.name = s.substr(0, eq);
    std::istringstream is(s.substr(eq + 1));
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(is, tok, ':')) parts.push_back(tok);
    if (parts.size() != 3) throw qsr2::ParseError("expected --grid name=lo:hi:steps");
    try {
        axis.lo = std::stod(parts[0]);
        axis.hi = std::stod(parts[1]);
        axis.steps = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw qsr2::ParseError("bad grid bound in '" + s + "'");
    }
    if (axis.steps < 1) throw qsr2::ParseError("grid steps must be >= 1");
    return axis;
}

qsr2::FamilyId lookup_family(const std::string& name) {
    const auto& names = qsr2::family_names();
    auto it = names.find(name);
    if (it == names.end()) throw qsr2::ParseError("unknown family '" + name + "'");
    return it->second;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw qsr2::ParseError("cannot open '" + path + "' for writing");
    return file;
}

int run_analyze(const std::string& path, double tol, const std::string& permute) {
    qsr2::MultipartiteOperator U = qsr2::read_qgate_file(path, tol);
    if (!permute.empty()) U = qsr2::permute_parties(U, parse_permutation(permute));
    const qsr2::ClassLabel label = qsr2::classify(U);
    std::cout << qsr2::classification_report(label);
    if (U.dims == std::vector<int>{2, 2, 2} && qsr2::is_diagonal(U))
        std::cout << qsr2::diag3_report(qsr2::classify_diag3(U));
    return 0;
}

int run_generate(const std::string& family, int n, const std::vector<std::string>& params,
                 const std::string& out, double tol) {
    qsr2::FamilySpec spec{lookup_family(family), n, parse_params(params)};
    const qsr2::GeneratedGate g = qsr2::generate(spec, tol);
    std::ofstream file;
    qsr2::write_qgate(open_out(file, out), g.op);
    return 0;
}

int run_classify_diag3(const std::string& path, double tol) {
    const qsr2::MultipartiteOperator U = qsr2::read_qgate_file(path, tol);
    std::cout << qsr2::diag3_report(qsr2::classify_diag3(U));
    return 0;
}

int run_examples(const std::string& name, const std::string& out) {
    std::ofstream file;
    qsr2::write_qgate(open_out(file, out), qsr2::catalog_gate(name));
    return 0;
}

void write_sweep_row(std::ostream& os, const std::vector<double>& values, double residual,
                     const std::optional<int>& sn, bool genuine) {
    os << std::setprecision(17);
    for (double v : values) os << v << ',';
    os << residual << ',';
    if (sn)
        os << *sn;
    else
        os << "n/a";
    os << ',' << (genuine ? "true" : "false") << "\n";
}

int run_sweep(const std::string& family, int n, const std::vector<std::string>& fixed,
              const std::vector<std::string>& grids, int seeds, const std::string& out,
              double tol) {
    const qsr2::FamilyId fid = lookup_family(family);
    std::ofstream file;
    std::ostream& os = open_out(file, out);
    bool breach = false;

    auto evaluate = [&](const qsr2::FamilySpec& spec, const std::vector<std::string>& names,
                        const std::vector<double>& values) {
        double residual = 0.0;
        std::optional<int> sn;
        bool genuine = false;
        try {
            const qsr2::GeneratedGate g = qsr2::generate(spec, tol);
            residual = qsr2::unitarity_residual(g.op.entries);
            const qsr2::ClassLabel label = qsr2::classify(g.op);
            genuine = label.genuine;
            sn = label.singular_number;
            const bool ok = genuine && residual <= 1e-10 && sn && g.declared_k &&
                            *sn == *g.declared_k;
            if (!ok && residual > 1e-8) breach = true;
        } catch (const qsr2::ParamDomainError&) {
            // out-of-domain grid point: flagged via genuine=false, sn=n/a
        } catch (const qsr2::NotOnVarietyError&) {
        } catch (const qsr2::SolverDivergedError&) {
        }
        write_sweep_row(os, values, residual, sn, genuine);
        (void)names;
    };

    if (fid == qsr2::FamilyId::T3_K0 && grids.empty()) {
        // perturbation seeds around a known variety point, refined back on
        os << "a_re,a_im,b_re,b_im,c_re,c_im,d_re,d_im,unitarity_residual,sn,genuine\n";
        const qsr2::K0SystemPoint base{qsr2::Complex(0.5, -0.5), qsr2::Complex(0.5, 0.5),
                                       qsr2::Complex(0, -1), qsr2::Complex(0, -1)};
        std::mt19937 rng(20260823);
        std::uniform_real_distribution<double> jitter(-0.05, 0.05);
        for (int s = 0; s < seeds; ++s) {
            qsr2::K0SystemPoint seed = base;
            if (s > 0) {
                auto j = [&] { return qsr2::Complex(jitter(rng), jitter(rng)); };
                seed.a += j();
                seed.b += j();
                seed.c += j();
                seed.d += j();
            }
            std::vector<double> values(8, 0.0);
            try {
                const qsr2::K0SystemPoint p = qsr2::k0_solve(seed);
                values = {p.a.real(), p.a.imag(), p.b.real(), p.b.imag(),
                          p.c.real(), p.c.imag(), p.d.real(), p.d.imag()};
                qsr2::FamilySpec spec{fid, 3, {}};
                spec.params = {{"a_re", p.a.real()}, {"a_im", p.a.imag()}, {"b_re", p.b.real()},
                               {"b_im", p.b.imag()}, {"c_re", p.c.real()}, {"c_im", p.c.imag()},
                               {"d_re", p.d.real()}, {"d_im", p.d.imag()}};
                evaluate(spec, {}, values);
            } catch (const qsr2::SolverDivergedError&) {
                write_sweep_row(os, values, 0.0, std::nullopt, false);
            }
        }
        return breach ? kExitInvariant : 0;
    }

    if (grids.empty()) throw qsr2::ParseError("sweep needs at least one --grid axis");
    std::vector<GridAxis> axes;
    for (const std::string& g : grids) axes.push_back(parse_grid(g));
    const std::map<std::string, double> fixed_params = parse_params(fixed);

    os << "";
    for (const auto& a : axes) os << a.name << ',';
    os << "unitarity_residual,sn,genuine\n";

    std::vector<int> idx(axes.size(), 0);
    while (true) {
        std::vector<double> values;
        qsr2::FamilySpec spec{fid, n, fixed_params};
        std::vector<std::string> names;
        for (size_t a = 0; a < axes.size(); ++a) {
            const GridAxis& ax = axes[a];
            const double v = ax.steps == 1
                                 ? ax.lo
                                 : ax.lo + (ax.hi - ax.lo) * idx[a] / double(ax.steps - 1);
            values.push_back(v);
            names.push_back(ax.name);
            spec.params[ax.name] = v;
        }
        evaluate(spec, names, values);
        size_t a = 0;
        for (; a < axes.size(); ++a) {
            if (++idx[a] < axes[a].steps) break;
            idx[a] = 0;
        }
        if (a == axes.size()) break;
    }
    return breach ? kExitInvariant : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schmidt-rank and singular-number analysis of multipartite gates"};
    app.require_subcommand(1);

    double tol = qsr2::kDefaultTol;
    app.add_option("--tol", tol, "numeric rank tolerance")->capture_default_str();

    std::string in_path, out_path, permute, family, name;
    int n = 3, seeds = 100;
    std::vector<std::string> params, grids;

    CLI::App* analyze = app.add_subcommand("analyze", "classify a gate from a QGATE file");
    analyze->add_option("path", in_path, "QGATE file")->required();
    analyze->add_option("--permute", permute, "1-based party permutation, e.g. 2,1,3");

    CLI::App* generate = app.add_subcommand("generate", "emit a parametric family member");
    generate->add_option("family", family, "family name")->required();
    generate->add_option("--n", n, "number of parties")->capture_default_str();
    generate->add_option("--param", params, "family parameter name=value");
    generate->add_option("--out", out_path, "output path (default stdout)");

    CLI::App* diag3 = app.add_subcommand("classify-diag3", "classify a 3-qubit diagonal gate");
    diag3->add_option("path", in_path, "QGATE file")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "grid sweep over a family; CSV summary");
    sweep->add_option("family", family, "family name")->required();
    sweep->add_option("--n", n, "number of parties")->capture_default_str();
    sweep->add_option("--param", params, "fixed parameter name=value");
    sweep->add_option("--grid", grids, "grid axis name=lo:hi:steps");
    sweep->add_option("--seeds", seeds, "seed count for the t3-k0 variety sweep")
        ->capture_default_str();
    sweep->add_option("--out", out_path, "output CSV path (default stdout)");

    CLI::App* examples = app.add_subcommand("examples", "emit a built-in example gate");
    examples->add_option("name", name, "catalog gate name")->required();
    examples->add_option("--out", out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    }

    try {
        if (analyze->parsed()) return run_analyze(in_path, tol, permute);
        if (generate->parsed()) return run_generate(family, n, params, out_path, tol);
        if (diag3->parsed()) return run_classify_diag3(in_path, tol);
        if (sweep->parsed()) return run_sweep(family, n, params, grids, seeds, out_path, tol);
        if (examples->parsed()) return run_examples(name, out_path);
    } catch (const qsr2::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const qsr2::NotUnitaryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotUnitary;
    } catch (const qsr2::InternalInvariantViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        // domain errors: bad parameters, wrong shapes, degenerate inputs
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return 0;
}
