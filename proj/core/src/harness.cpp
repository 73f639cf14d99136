#include "ginv/harness.hpp"

#include "ginv/blocks.hpp"
#include "ginv/linalg.hpp"
#include "ginv/lp.hpp"
#include "ginv/verify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>

namespace ginv {

double GenSpec::effective_rho() const {
    if (rho) return *rho;
    return std::pow(1.0 / M, 2.0 / (static_cast<double>(r) + 1.0));
}

namespace {

void validate(const GenSpec& spec) {
    if (spec.m <= 0 || spec.n <= 0 || spec.r <= 0 || spec.r > std::min(spec.m, spec.n))
        throw InvalidSpec("gen_instance: need 0 < r <= min(m, n)");
    if (spec.M <= 0) throw InvalidSpec("gen_instance: M must be positive");
    const double rho = spec.effective_rho();
    if (!(rho > 0.0 && rho < 1.0)) throw InvalidSpec("gen_instance: need 0 < rho < 1");
}

// Box-Muller on top of mt19937_64 keeps the stream portable across
// standard libraries.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = unit();
        const double u2 = unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        spare_ = radius * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return radius * std::cos(2.0 * M_PI * u2);
    }

private:
    double unit() {  // uniform in (0, 1)
        return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
    }
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

Matrix gaussian(GaussianStream& stream, Index rows, Index cols) {
    Matrix G(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) G(i, j) = stream();
    return G;
}

// Thin orthonormal factor with deterministic column signs (R diagonal >= 0).
Matrix orthonormal_factor(GaussianStream& stream, Index rows, Index cols) {
    Matrix G = gaussian(stream, rows, cols);
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ() * Matrix::Identity(rows, cols);
    const Matrix R = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    for (Index j = 0; j < cols; ++j)
        if (R(j, j) < 0) Q.col(j) = -Q.col(j);
    return Q;
}

Vector singular_values(const GenSpec& spec) {
    const double rho = spec.effective_rho();
    Vector sv(spec.r);
    double power = 1.0;
    for (Index i = 0; i < spec.r; ++i) {
        power *= rho;
        sv(i) = spec.M * power;
    }
    return sv;
}

}  // namespace

Matrix gen_instance(const GenSpec& spec) {
    validate(spec);
    GaussianStream stream(spec.seed);
    const Matrix U = orthonormal_factor(stream, spec.m, spec.r);
    const Matrix V = orthonormal_factor(stream, spec.n, spec.r);
    return U * singular_values(spec).asDiagonal() * V.transpose();
}

Matrix gen_instance_symmetric(const GenSpec& spec) {
    validate(spec);
    if (spec.m != spec.n)
        throw InvalidSpec("gen_instance_symmetric: need m == n");
    GaussianStream stream(spec.seed);
    const Matrix U = orthonormal_factor(stream, spec.m, spec.r);
    Matrix A = U * singular_values(spec).asDiagonal() * U.transpose();
    return ((A + A.transpose()) / 2.0).eval();
}

const char* to_string(Method method) {
    switch (method) {
        case Method::LocalSearchAh: return "local_search_ah";
        case Method::LocalSearchSym: return "local_search_sym";
        case Method::LpP1: return "lp_p1";
        case Method::LpP13: return "lp_p13";
        case Method::LpP123: return "lp_p123";
    }
    return "?";
}

Method method_from_string(const std::string& name) {
    if (name == "local_search_ah") return Method::LocalSearchAh;
    if (name == "local_search_sym") return Method::LocalSearchSym;
    if (name == "lp_p1") return Method::LpP1;
    if (name == "lp_p13") return Method::LpP13;
    if (name == "lp_p123") return Method::LpP123;
    throw InvalidParams("unknown method '" + name + "'");
}

std::vector<GenSpec> expand_specs(const GenSpec& base, Index count) {
    std::vector<GenSpec> specs;
    specs.reserve(static_cast<std::size_t>(count));
    for (Index i = 0; i < count; ++i) {
        GenSpec spec = base;
        spec.seed = base.seed + static_cast<std::uint64_t>(i);
        specs.push_back(spec);
    }
    return specs;
}

namespace {

ExperimentRecord run_one(const GenSpec& spec, Method method, const SearchConfig& cfg) {
    ExperimentRecord rec;
    rec.spec = spec;
    rec.method = method;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        switch (method) {
            case Method::LocalSearchAh: {
                const Matrix A = gen_instance(spec);
                auto [S0, T0] = init_general(A, cfg.tol);
                rec.init_one_norm = column_block(A, T0, cfg.tol).one_norm;
                GinvResult res = ah_symmetric_ginv(A, cfg);
                rec.one_norm = res.one_norm;
                rec.nnz = res.nnz;
                rec.swaps = static_cast<Index>(res.trace.size());
                Certificate cert = ah_certificate(A, res.S, res.T, cfg.tol);
                rec.certified_ratio = certified_ratio(A, res, cert);
                break;
            }
            case Method::LocalSearchSym: {
                const Matrix A = gen_instance_symmetric(spec);
                IndexSet S0 = init_principal(A, cfg.tol);
                rec.init_one_norm = symmetric_block(A, S0, cfg.tol).one_norm;
                GinvResult res = sym_reflexive_ginv(A, cfg);
                rec.one_norm = res.one_norm;
                rec.nnz = res.nnz;
                rec.swaps = static_cast<Index>(res.trace.size());
                Certificate cert = sym_certificate(A, res.S, cfg.tol);
                rec.certified_ratio = certified_ratio(A, res, cert);
                break;
            }
            case Method::LpP1:
            case Method::LpP13:
            case Method::LpP123: {
                const Matrix A = gen_instance(spec);
                LpModel model;
                if (method == Method::LpP1) {
                    model = build_p1(A, cfg.tol);
                } else if (method == Method::LpP13) {
                    model = build_p13(A, cfg.tol);
                } else {
                    auto [S0, T0] = init_general(A, cfg.tol);
                    model = build_p123(A, column_block(A, T0, cfg.tol), cfg.tol);
                }
                LpSolution sol = simplex_solve(model);
                rec.one_norm = sol.objective_value;
                rec.nnz = nnz(sol.H, cfg.tol.nnz_tol);
                rec.swaps = sol.iterations;
                rec.init_one_norm = sol.objective_value;
                break;
            }
        }
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
    }
    rec.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

Index thread_cap() {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    Index cap = static_cast<Index>(hw);
    if (const char* env = std::getenv("GINV_THREADS")) {
        const long parsed = std::atol(env);
        if (parsed > 0) cap = std::min<Index>(cap, static_cast<Index>(parsed));
    }
    return cap;
}

std::string format_double(double v, bool full_precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), full_precision ? "%.17g" : "%.2f", v);
    return buf;
}

struct GroupStats {
    std::string key;
    GenSpec spec;
    Method method;
    std::vector<const ExperimentRecord*> members;

    double mean(double ExperimentRecord::* field) const {
        double sum = 0;
        for (auto* rec : members) sum += rec->*field;
        return sum / static_cast<double>(members.size());
    }
    double stddev(double ExperimentRecord::* field) const {
        if (members.size() < 2) return 0.0;
        const double mu = mean(field);
        double sum = 0;
        for (auto* rec : members) {
            const double d = rec->*field - mu;
            sum += d * d;
        }
        return std::sqrt(sum / static_cast<double>(members.size() - 1));
    }
    double mean_nnz() const {
        double sum = 0;
        for (auto* rec : members) sum += static_cast<double>(rec->nnz);
        return sum / static_cast<double>(members.size());
    }
    double mean_swaps() const {
        double sum = 0;
        for (auto* rec : members) sum += static_cast<double>(rec->swaps);
        return sum / static_cast<double>(members.size());
    }
};

std::vector<GroupStats> group_records(const std::vector<ExperimentRecord>& records) {
    std::vector<GroupStats> groups;
    for (const auto& rec : records) {
        if (!rec.ok) continue;
        std::ostringstream key;
        key << rec.spec.m << 'x' << rec.spec.n << 'x' << rec.spec.r << '/'
            << to_string(rec.method);
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const GroupStats& g) { return g.key == key.str(); });
        if (it == groups.end()) {
            groups.push_back({key.str(), rec.spec, rec.method, {}});
            it = std::prev(groups.end());
        }
        it->members.push_back(&rec);
    }
    return groups;
}

}  // namespace

std::vector<ExperimentRecord> run_experiment(const std::vector<GenSpec>& specs,
                                             const std::vector<Method>& methods,
                                             const SearchConfig& cfg) {
    std::vector<std::pair<Index, Index>> jobs;  // (spec index, method index)
    for (Index s = 0; s < static_cast<Index>(specs.size()); ++s)
        for (Index m = 0; m < static_cast<Index>(methods.size()); ++m)
            jobs.emplace_back(s, m);
    std::vector<ExperimentRecord> records(jobs.size());
    if (jobs.empty()) return records;

    const Index workers =
        std::min<Index>(thread_cap(), static_cast<Index>(jobs.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next.fetch_add(1); k < jobs.size(); k = next.fetch_add(1)) {
            const auto [s, m] = jobs[k];
            records[k] = run_one(specs[static_cast<std::size_t>(s)],
                                 methods[static_cast<std::size_t>(m)], cfg);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (Index w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return records;
}

std::string emit_table(const std::vector<ExperimentRecord>& records, TableFormat format) {
    if (format == TableFormat::Json) {
        nlohmann::json j = records;
        return j.dump(2) + "\n";
    }

    const bool full = format == TableFormat::Csv;
    std::ostringstream os;
    auto row = [&](const std::vector<std::string>& cells) {
        if (format == TableFormat::Csv) {
            for (std::size_t i = 0; i < cells.size(); ++i)
                os << (i ? "," : "") << cells[i];
            os << "\n";
        } else {
            os << "|";
            for (const auto& cell : cells) os << " " << cell << " |";
            os << "\n";
        }
    };

    const std::vector<std::string> header = {"m",     "n",          "r",
                                             "seed",  "method",     "one_norm",
                                             "nnz",   "swaps",      "init_one_norm",
                                             "time_s", "certified_ratio", "ok"};
    row(header);
    if (format == TableFormat::Markdown) {
        std::vector<std::string> rule(header.size(), "---");
        row(rule);
    }
    for (const auto& rec : records) {
        row({std::to_string(rec.spec.m), std::to_string(rec.spec.n),
             std::to_string(rec.spec.r), std::to_string(rec.spec.seed),
             to_string(rec.method), format_double(rec.one_norm, full),
             std::to_string(rec.nnz), std::to_string(rec.swaps),
             format_double(rec.init_one_norm, full), format_double(rec.wall_time_s, full),
             rec.certified_ratio ? format_double(*rec.certified_ratio, full) : "",
             rec.ok ? "true" : "false"});
    }
    for (const auto& group : group_records(records)) {
        row({std::to_string(group.spec.m), std::to_string(group.spec.n),
             std::to_string(group.spec.r), "mean", to_string(group.method),
             format_double(group.mean(&ExperimentRecord::one_norm), full),
             format_double(group.mean_nnz(), full), format_double(group.mean_swaps(), full),
             format_double(group.mean(&ExperimentRecord::init_one_norm), full),
             format_double(group.mean(&ExperimentRecord::wall_time_s), full), "", ""});
        row({std::to_string(group.spec.m), std::to_string(group.spec.n),
             std::to_string(group.spec.r), "std", to_string(group.method),
             format_double(group.stddev(&ExperimentRecord::one_norm), full), "", "",
             format_double(group.stddev(&ExperimentRecord::init_one_norm), full),
             format_double(group.stddev(&ExperimentRecord::wall_time_s), full), "", ""});
    }
    return os.str();
}

std::vector<ExperimentRecord> records_from_json(const std::string& text) {
    return nlohmann::json::parse(text).get<std::vector<ExperimentRecord>>();
}

void to_json(nlohmann::json& j, const GenSpec& spec) {
    j = nlohmann::json{{"m", spec.m}, {"n", spec.n}, {"r", spec.r},
                       {"seed", spec.seed}, {"M", spec.M}};
    if (spec.rho) j["rho"] = *spec.rho;
}

void from_json(const nlohmann::json& j, GenSpec& spec) {
    spec.m = j.at("m").get<Index>();
    spec.n = j.at("n").get<Index>();
    spec.r = j.at("r").get<Index>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.M = j.at("M").get<double>();
    spec.rho = j.contains("rho") ? std::optional<double>(j["rho"].get<double>())
                                 : std::nullopt;
}

void to_json(nlohmann::json& j, const ExperimentRecord& record) {
    j = nlohmann::json{{"spec", record.spec},
                       {"method", to_string(record.method)},
                       {"ok", record.ok},
                       {"error", record.error},
                       {"one_norm", record.one_norm},
                       {"nnz", record.nnz},
                       {"swaps", record.swaps},
                       {"init_one_norm", record.init_one_norm},
                       {"wall_time_s", record.wall_time_s}};
    if (record.certified_ratio) j["certified_ratio"] = *record.certified_ratio;
}

void from_json(const nlohmann::json& j, ExperimentRecord& record) {
    record.spec = j.at("spec").get<GenSpec>();
    record.method = method_from_string(j.at("method").get<std::string>());
    record.ok = j.at("ok").get<bool>();
    record.error = j.at("error").get<std::string>();
    record.one_norm = j.at("one_norm").get<double>();
    record.nnz = j.at("nnz").get<Index>();
    record.swaps = j.at("swaps").get<Index>();
    record.init_one_norm = j.at("init_one_norm").get<double>();
    record.wall_time_s = j.at("wall_time_s").get<double>();
    record.certified_ratio = j.contains("certified_ratio")
                                 ? std::optional<double>(j["certified_ratio"].get<double>())
                                 : std::nullopt;
}

}  // namespace ginv
