#pragma once

#include "ginv/search.hpp"
#include "ginv/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ginv {

/// Random-instance recipe: A has prescribed singular values
/// M * (rho^1, ..., rho^r) with rho defaulting to (1/M)^{2/(r+1)}, and
/// orthonormal factors drawn from seeded Gaussians. Deterministic per seed.
struct GenSpec {
    Index m = 0, n = 0, r = 0;
    std::uint64_t seed = 0;
    double M = 2.0;
    std::optional<double> rho;  // defaulted from M and r when absent

    double effective_rho() const;
};

Matrix gen_instance(const GenSpec& spec);

/// Symmetric positive-semidefinite twin of the same seed: Q diag Q^T with a
/// single m x r orthonormal factor. Used by the symmetric methods.
Matrix gen_instance_symmetric(const GenSpec& spec);

enum class Method { LocalSearchAh, LocalSearchSym, LpP1, LpP13, LpP123 };

const char* to_string(Method method);
Method method_from_string(const std::string& name);

struct ExperimentRecord {
    GenSpec spec;
    Method method = Method::LocalSearchAh;
    bool ok = true;
    std::string error;
    double one_norm = 0.0;
    Index nnz = 0;
    Index swaps = 0;               // accepted swaps or simplex iterations
    double init_one_norm = 0.0;    // ||H^0||_1 of the seed block (= one_norm for LP)
    double wall_time_s = 0.0;
    std::optional<double> certified_ratio;
};

/// Copies of base with seeds base.seed + 0, ..., base.seed + count - 1.
std::vector<GenSpec> expand_specs(const GenSpec& base, Index count);

/// One record per (spec, method), in input order. Instances run in parallel
/// across threads (capped by the GINV_THREADS environment variable);
/// failures are captured in the record and the run continues.
std::vector<ExperimentRecord> run_experiment(const std::vector<GenSpec>& specs,
                                             const std::vector<Method>& methods,
                                             const SearchConfig& cfg = {});

enum class TableFormat { Csv, Markdown, Json };

/// Stable column order (spec, method, one_norm, nnz, swaps, time).
/// Markdown prints 2-decimal floats and per-group mean/std rows; csv adds the
/// same aggregates at full precision; json holds the bare records and
/// round-trips through records_from_json.
std::string emit_table(const std::vector<ExperimentRecord>& records, TableFormat format);

std::vector<ExperimentRecord> records_from_json(const std::string& text);

void to_json(nlohmann::json& j, const GenSpec& spec);
void from_json(const nlohmann::json& j, GenSpec& spec);
void to_json(nlohmann::json& j, const ExperimentRecord& record);
void from_json(const nlohmann::json& j, ExperimentRecord& record);

}  // namespace ginv
