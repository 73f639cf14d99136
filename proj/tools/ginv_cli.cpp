#include <ginv/blocks.hpp>
#include <ginv/families.hpp>
#include <ginv/harness.hpp>
#include <ginv/io.hpp>
#include <ginv/linalg.hpp>
#include <ginv/lp.hpp>
#include <ginv/search.hpp>
#include <ginv/verify.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace ginv;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

json index_set_json(const IndexSet& s) {
    return json(s.indices());
}

void emit(const json& j) { std::cout << j.dump(2) << std::endl; }

struct GinvArgs {
    std::string mode = "ah";
    std::string input, output;
    double epsilon = 0.0;
    std::string pivot = "first";
    Index max_sweeps = 0;
};

SearchConfig make_config(double epsilon, const std::string& pivot, Index max_sweeps) {
    SearchConfig cfg;
    cfg.epsilon = epsilon;
    cfg.max_sweeps = max_sweeps;
    if (pivot == "best")
        cfg.pivot = PivotStrategy::BestImproving;
    else if (pivot == "first")
        cfg.pivot = PivotStrategy::FirstImproving;
    else
        throw InvalidParams("unknown pivot strategy '" + pivot + "'");
    return cfg;
}

int run_ginv(const GinvArgs& args) {
    const Matrix A = read_matrix_file(args.input);
    const SearchConfig cfg = make_config(args.epsilon, args.pivot, args.max_sweeps);

    GinvResult res;
    std::optional<Certificate> cert;
    if (args.mode == "sym") {
        res = sym_reflexive_ginv(A, cfg);
        cert = sym_certificate(A, res.S, cfg.tol);
    } else if (args.mode == "ah") {
        res = ah_symmetric_ginv(A, cfg);
        cert = ah_certificate(A, res.S, res.T, cfg.tol);
    } else if (args.mode == "ha") {
        res = ha_symmetric_ginv(A, cfg);
        Certificate tc = ah_certificate(A.transpose(), res.T, res.S, cfg.tol);
        tc.W = tc.W.transpose().eval();
        if (tc.U) tc.U = tc.U->transpose().eval();
        cert = std::move(tc);
    } else if (args.mode == "general") {
        res = general_reflexive_ginv(A, cfg);
        // dual point from the block formula, feasibility measured by (D)
        const Matrix inv = inverse(submatrix(A, res.S, res.T));
        const Matrix M = inv.unaryExpr([](double v) {
            return std::abs(v) <= 1e-14 ? 0.0 : (v > 0 ? 1.0 : -1.0);
        });
        const Matrix Wtil = inv.transpose() * M * inv.transpose();
        Certificate gc;
        gc.W = Matrix::Zero(A.rows(), A.cols());
        for (Index i = 0; i < res.S.size(); ++i)
            for (Index j = 0; j < res.T.size(); ++j) gc.W(res.S[i], res.T[j]) = Wtil(i, j);
        const auto [obj, scale] = dual_feasibility(A, gc.W, std::nullopt, cfg.tol);
        gc.dual_objective = obj;
        gc.feasibility_scale = scale;
        gc.implied_lower_bound = scale > 0 ? obj / scale : 0.0;
        cert = std::move(gc);
    } else {
        throw InvalidParams("unknown mode '" + args.mode + "'");
    }

    if (!args.output.empty()) write_matrix_file(args.output, res.H);

    json summary = {{"mode", args.mode},
                    {"rows", A.rows()},
                    {"cols", A.cols()},
                    {"one_norm", res.one_norm},
                    {"nnz", res.nnz},
                    {"swaps", res.trace.size()},
                    {"sweep_limit_hit", res.sweep_limit_hit},
                    {"S", index_set_json(res.S)},
                    {"T", index_set_json(res.T)}};
    if (cert) {
        summary["certificate"] = *cert;
        if (cert->dual_objective > 0)
            summary["certified_ratio"] = certified_ratio(A, res, *cert);
    }
    if (!args.output.empty()) summary["output"] = args.output;
    emit(summary);
    return kExitOk;
}

int run_lp(const std::string& model_name, const std::string& input,
           const std::string& output, const std::string& export_path) {
    const Matrix A = read_matrix_file(input);
    LpModel model;
    if (model_name == "p1") {
        model = build_p1(A);
    } else if (model_name == "p1sym") {
        model = build_p1_sym(A);
    } else if (model_name == "p13") {
        model = build_p13(A);
    } else if (model_name == "p123") {
        auto [S0, T0] = init_general(A);
        model = build_p123(A, column_block(A, T0));
    } else {
        throw InvalidParams("unknown LP model '" + model_name + "'");
    }

    if (!export_path.empty()) {
        std::ofstream out(export_path);
        if (!out) throw IoError("cannot open '" + export_path + "' for writing");
        out << export_lp(model);
    }

    const LpSolution sol = simplex_solve(model);
    if (!output.empty()) write_matrix_file(output, sol.H);

    emit({{"model", model_name},
          {"objective", sol.objective_value},
          {"nnz", nnz(sol.H)},
          {"iterations", sol.iterations},
          {"is_vertex", sol.is_vertex},
          {"constraint_rows", model.eq_matrix.rows()},
          {"variables", model.eq_matrix.cols()}});
    return kExitOk;
}

int run_certify(const std::string& input, const std::string& h_path) {
    const Matrix A = read_matrix_file(input);
    const Matrix H = read_matrix_file(h_path);
    const Tolerances tol;

    json out;
    const PropertyReport rep = check_properties(A, H, tol);
    out["properties"] = rep;
    out["one_norm"] = one_norm(H);
    out["nnz"] = nnz(H, tol.nnz_tol);

    // infer a block structure from the support of H
    const Index r = rep.rank_A;
    std::vector<Index> row_support, col_support;
    for (Index i = 0; i < H.rows(); ++i)
        if (H.row(i).cwiseAbs().maxCoeff() > tol.nnz_tol) row_support.push_back(i);
    for (Index j = 0; j < H.cols(); ++j)
        if (H.col(j).cwiseAbs().maxCoeff() > tol.nnz_tol) col_support.push_back(j);

    std::optional<Certificate> cert;
    std::string kind = "unstructured";
    const bool sym_input = is_symmetric(A, tol.residual_tol * (1.0 + max_norm(A)));
    if (sym_input && row_support == col_support &&
        static_cast<Index>(row_support.size()) == r) {
        kind = "symmetric_block";
        cert = sym_certificate(A, IndexSet(row_support, A.rows()), tol);
    } else if (static_cast<Index>(row_support.size()) == r) {
        kind = "column_block";
        const IndexSet T(row_support, A.cols());
        auto [S, Tfix] = init_general(cols_of(A, T), tol);
        std::vector<Index> rows(S.begin(), S.end());
        cert = ah_certificate(A, IndexSet(rows, A.rows()), T, tol);
    }
    out["kind_guess"] = kind;
    if (cert) {
        out["certificate"] = *cert;
        if (cert->dual_objective > 0)
            out["certificate"]["certified_ratio"] =
                one_norm(H) * cert->feasibility_scale / cert->dual_objective;
    }
    emit(out);
    return kExitOk;
}

int run_family(const std::string& name, const std::vector<std::string>& params,
               std::string prefix) {
    std::map<std::string, double> parsed;
    for (const auto& kv : params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw InvalidParams("--param expects key=value, got '" + kv + "'");
        parsed[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    const FamilyInstance fam = make_family(name, parsed);
    if (prefix.empty()) prefix = fam.name;

    write_matrix_file(prefix + ".mtx", fam.A);
    json sidecar = {{"name", fam.name},
                    {"params", fam.params},
                    {"known_values", fam.known_values},
                    {"rows", fam.A.rows()},
                    {"cols", fam.A.cols()},
                    {"matrix", prefix + ".mtx"}};
    if (fam.known_H) {
        write_matrix_file(prefix + "_H.mtx", *fam.known_H);
        sidecar["known_H"] = prefix + "_H.mtx";
    }
    if (fam.known_W) {
        write_matrix_file(prefix + "_W.mtx", *fam.known_W);
        sidecar["known_W"] = prefix + "_W.mtx";
    }
    if (fam.known_V) {
        write_matrix_file(prefix + "_V.mtx", *fam.known_V);
        sidecar["known_V"] = prefix + "_V.mtx";
    }
    std::ofstream side(prefix + ".json");
    if (!side) throw IoError("cannot open '" + prefix + ".json' for writing");
    side << sidecar.dump(2) << "\n";
    emit(sidecar);
    return kExitOk;
}

int run_bench(const std::vector<std::string>& spec_strings, Index count,
              std::uint64_t seed, const std::string& methods_csv, double epsilon,
              const std::string& pivot, const std::string& format,
              const std::string& output) {
    std::vector<GenSpec> specs;
    for (const auto& text : spec_strings) {
        long m = 0, n = 0, r = 0;
        if (std::sscanf(text.c_str(), "%ld,%ld,%ld", &m, &n, &r) != 3)
            throw InvalidParams("--spec expects m,n,r, got '" + text + "'");
        GenSpec base;
        base.m = m;
        base.n = n;
        base.r = r;
        base.seed = seed;
        const auto expanded = expand_specs(base, count);
        specs.insert(specs.end(), expanded.begin(), expanded.end());
    }

    std::vector<Method> methods;
    std::stringstream ss(methods_csv);
    std::string item;
    while (std::getline(ss, item, ',')) methods.push_back(method_from_string(item));
    if (methods.empty()) throw InvalidParams("--methods must name at least one method");

    const SearchConfig cfg = make_config(epsilon, pivot, 0);
    const auto records = run_experiment(specs, methods, cfg);

    TableFormat fmt = TableFormat::Csv;
    if (format == "markdown") fmt = TableFormat::Markdown;
    else if (format == "json") fmt = TableFormat::Json;
    else if (format != "csv") throw InvalidParams("unknown format '" + format + "'");

    const std::string table = emit_table(records, fmt);
    if (output.empty()) {
        std::cout << table;
    } else {
        std::ofstream out(output);
        if (!out) throw IoError("cannot open '" + output + "' for writing");
        out << table;
    }
    for (const auto& rec : records)
        if (!rec.ok) return kExitNumerical;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse reflexive generalized inverses: block constructions, "
                 "determinant local search, LP baselines, dual certificates"};
    app.require_subcommand(1);

    GinvArgs ginv_args;
    auto* sub_ginv = app.add_subcommand("ginv", "construct a generalized inverse");
    sub_ginv->add_option("--mode", ginv_args.mode, "sym | ah | ha | general")
        ->default_val("ah");
    sub_ginv->add_option("--input", ginv_args.input, "matrix file (.mtx/.csv/.json)")
        ->required();
    sub_ginv->add_option("--output", ginv_args.output, "write H here");
    sub_ginv->add_option("--epsilon", ginv_args.epsilon, "local-search epsilon");
    sub_ginv->add_option("--pivot", ginv_args.pivot, "first | best");
    sub_ginv->add_option("--max-sweeps", ginv_args.max_sweeps, "swap cap (0 = default)");

    std::string lp_model = "p13", lp_input, lp_output, lp_export;
    auto* sub_lp = app.add_subcommand("lp", "solve a 1-norm minimization LP");
    sub_lp->add_option("--model", lp_model, "p1 | p1sym | p13 | p123");
    sub_lp->add_option("--input", lp_input, "matrix file")->required();
    sub_lp->add_option("--output", lp_output, "write the optimal H here");
    sub_lp->add_option("--export-lp", lp_export, "write the model in LP text format");

    std::string cert_input, cert_h;
    auto* sub_certify = app.add_subcommand("certify", "check properties and bounds");
    sub_certify->add_option("--input", cert_input, "matrix A")->required();
    sub_certify->add_option("--h", cert_h, "candidate generalized inverse H")->required();

    std::string family_name, family_prefix;
    std::vector<std::string> family_params;
    auto* sub_family = app.add_subcommand("family", "emit a named instance family");
    sub_family->add_option("--name", family_name, "family name")->required();
    sub_family->add_option("--param", family_params, "key=value (repeatable)");
    sub_family->add_option("--output", family_prefix, "output prefix (default: name)");

    std::vector<std::string> bench_specs;
    Index bench_count = 1;
    std::uint64_t bench_seed = 1;
    std::string bench_methods = "local_search_ah";
    double bench_epsilon = 0.0;
    std::string bench_pivot = "first", bench_format = "csv", bench_output;
    auto* sub_bench = app.add_subcommand("bench", "run seeded experiments");
    sub_bench->add_option("--spec", bench_specs, "m,n,r (repeatable)")->required();
    sub_bench->add_option("--count", bench_count, "instances per spec");
    sub_bench->add_option("--seed", bench_seed, "base seed");
    sub_bench->add_option("--methods", bench_methods, "comma-separated method list");
    sub_bench->add_option("--epsilon", bench_epsilon, "local-search epsilon");
    sub_bench->add_option("--pivot", bench_pivot, "first | best");
    sub_bench->add_option("--format", bench_format, "csv | markdown | json");
    sub_bench->add_option("--output", bench_output, "write the table here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (sub_ginv->parsed()) return run_ginv(ginv_args);
        if (sub_lp->parsed()) return run_lp(lp_model, lp_input, lp_output, lp_export);
        if (sub_certify->parsed()) return run_certify(cert_input, cert_h);
        if (sub_family->parsed()) return run_family(family_name, family_params, family_prefix);
        if (sub_bench->parsed())
            return run_bench(bench_specs, bench_count, bench_seed, bench_methods,
                             bench_epsilon, bench_pivot, bench_format, bench_output);
    } catch (const SingularMatrix& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const SingularBlock& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const RankDeficientBlock& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const NumericalBreakdown& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const IterationLimit& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const DegenerateCertificate& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
