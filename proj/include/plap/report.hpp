#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "plap/model1d.hpp"
#include "plap/sharpness.hpp"

namespace plap {

/// One sweep/CLI output row. Methods that were not requested (or failed)
/// carry NaN; spread is computed from the populated methods only.
struct SweepRecord {
    double p = 0.0;
    int n = 0;
    double K = 0.0;
    double D = 0.0;
    double lambda_quad = std::numeric_limits<double>::quiet_NaN();
    double lambda_shoot = std::numeric_limits<double>::quiet_NaN();
    double lambda_rayleigh = std::numeric_limits<double>::quiet_NaN();
    double small_D_ref = std::numeric_limits<double>::quiet_NaN();
    double large_D_ref = std::numeric_limits<double>::quiet_NaN();
    double mckean = std::numeric_limits<double>::quiet_NaN();
    double spread = std::numeric_limits<double>::quiet_NaN();
    bool ok = true;
    std::string error;
};

enum class OutputKind { Table, Csv, Json };

struct OutputFormat {
    OutputKind kind = OutputKind::Table;
    std::optional<std::string> path; // stdout if absent
};

struct MethodSet {
    bool quad = true;
    bool shoot = false;
    bool rayleigh = false;
};

/// Runs the requested methods for one parameter point; failures are
/// captured in-row (ok = false) rather than thrown.
SweepRecord compute_record(const ModelParams& params, const MethodSet& methods,
                           std::size_t rayleigh_grid, const SolverConfig& cfg);

/// Fixed CSV schema:
/// p,n,K,D,lambda_quad,lambda_shoot,lambda_rayleigh,small_D_ref,large_D_ref,mckean,spread
extern const char* kSweepCsvHeader;

std::string format_number(double v, int sig_digits = 12);
std::string to_csv(const std::vector<SweepRecord>& records, int sig_digits = 12);
std::string to_json(const std::vector<SweepRecord>& records, int sig_digits = 12);
std::string to_table(const std::vector<SweepRecord>& records, int sig_digits = 12);

std::string sharpness_to_csv(const std::vector<ConvergenceRow>& rows,
                             int sig_digits = 12);
std::string sharpness_to_json(const std::vector<ConvergenceRow>& rows,
                              int sig_digits = 12);
std::string sharpness_to_table(const std::vector<ConvergenceRow>& rows,
                               int sig_digits = 12);

/// Deterministic-order parallel map: results land by index regardless of
/// completion order. workers <= 1 runs inline.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

/// Worker count from the LAMBDABAR_THREADS environment variable, falling
/// back to the hardware concurrency.
std::size_t worker_count();

} // namespace plap
