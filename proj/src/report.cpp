#include "plap/report.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace plap {

const char* kSweepCsvHeader =
    "p,n,K,D,lambda_quad,lambda_shoot,lambda_rayleigh,small_D_ref,"
    "large_D_ref,mckean,spread";

SweepRecord compute_record(const ModelParams& params, const MethodSet& methods,
                           std::size_t rayleigh_grid, const SolverConfig& cfg) {
    SweepRecord rec;
    rec.p = params.p;
    rec.n = params.n;
    rec.K = params.K;
    rec.D = params.D;
    try {
        Model1D model(params, cfg);
        rec.small_D_ref = model.asymptotic_small_D();
        if (params.K < 0.0) {
            rec.large_D_ref = model.asymptotic_large_D();
            rec.mckean = model.mckean_bound();
        }
        if (methods.quad)
            rec.lambda_quad = model.eigenvalue_from_D().lambda_bar;
        if (methods.shoot) rec.lambda_shoot = model.eigenvalue_shoot();
        if (methods.rayleigh)
            rec.lambda_rayleigh = model.rayleigh_min(rayleigh_grid);

        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (double v : {rec.lambda_quad, rec.lambda_shoot, rec.lambda_rayleigh}) {
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        if (std::isfinite(lo)) rec.spread = (hi - lo) / hi;
    } catch (const Error& e) {
        rec.ok = false;
        rec.error = e.what();
    }
    return rec;
}

std::string format_number(double v, int sig_digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", sig_digits, v);
    return buf;
}

std::string to_csv(const std::vector<SweepRecord>& rs, int sig) {
    std::ostringstream out;
    out << kSweepCsvHeader << '\n';
    for (const auto& r : rs) {
        out << format_number(r.p, sig) << ',' << r.n << ','
            << format_number(r.K, sig) << ',' << format_number(r.D, sig) << ','
            << format_number(r.lambda_quad, sig) << ','
            << format_number(r.lambda_shoot, sig) << ','
            << format_number(r.lambda_rayleigh, sig) << ','
            << format_number(r.small_D_ref, sig) << ','
            << format_number(r.large_D_ref, sig) << ','
            << format_number(r.mckean, sig) << ','
            << format_number(r.spread, sig) << '\n';
    }
    return out.str();
}

namespace {

nlohmann::json number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

} // namespace

std::string to_json(const std::vector<SweepRecord>& rs, int /*sig*/) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rs) {
        nlohmann::json row{
            {"p", r.p},
            {"n", r.n},
            {"K", r.K},
            {"D", r.D},
            {"lambda_quad", number_or_null(r.lambda_quad)},
            {"lambda_shoot", number_or_null(r.lambda_shoot)},
            {"lambda_rayleigh", number_or_null(r.lambda_rayleigh)},
            {"small_D_ref", number_or_null(r.small_D_ref)},
            {"large_D_ref", number_or_null(r.large_D_ref)},
            {"mckean", number_or_null(r.mckean)},
            {"spread", number_or_null(r.spread)},
            {"ok", r.ok},
        };
        if (!r.ok) row["error"] = r.error;
        arr.push_back(std::move(row));
    }
    return arr.dump(2) + "\n";
}

std::string to_table(const std::vector<SweepRecord>& rs, int sig) {
    std::ostringstream out;
    out << "       p   n        K            D     lambda_quad    "
           "lambda_shoot  lambda_rayleigh       spread\n";
    char buf[256];
    for (const auto& r : rs) {
        std::snprintf(buf, sizeof(buf),
                      "%8.4g %3d %8.4g %12.6g %15s %15s %16s %12.3g",
                      r.p, r.n, r.K, r.D,
                      format_number(r.lambda_quad, sig).c_str(),
                      format_number(r.lambda_shoot, sig).c_str(),
                      format_number(r.lambda_rayleigh, sig).c_str(), r.spread);
        out << buf;
        if (!r.ok) out << "  ERROR: " << r.error;
        out << '\n';
    }
    return out.str();
}

std::string sharpness_to_csv(const std::vector<ConvergenceRow>& rows, int sig) {
    std::ostringstream out;
    out << "eps,delta,R_eps,lower,upper,gap\n";
    for (const auto& r : rows) {
        out << format_number(r.eps, sig) << ',' << format_number(r.delta, sig)
            << ',' << format_number(r.R_eps, sig) << ','
            << format_number(r.lower, sig) << ','
            << format_number(r.upper, sig) << ',' << format_number(r.gap, sig)
            << '\n';
    }
    return out.str();
}

std::string sharpness_to_json(const std::vector<ConvergenceRow>& rows,
                              int /*sig*/) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{"eps", r.eps},
                       {"delta", r.delta},
                       {"R_eps", r.R_eps},
                       {"lower", r.lower},
                       {"upper", r.upper},
                       {"gap", r.gap}});
    return arr.dump(2) + "\n";
}

std::string sharpness_to_table(const std::vector<ConvergenceRow>& rows,
                               int sig) {
    std::ostringstream out;
    out << "        eps           delta           R_eps            lower"
           "            upper              gap\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%11s %15s %15s %16s %16s %16s\n",
                      format_number(r.eps, 6).c_str(),
                      format_number(r.delta, sig).c_str(),
                      format_number(r.R_eps, sig).c_str(),
                      format_number(r.lower, sig).c_str(),
                      format_number(r.upper, sig).c_str(),
                      format_number(r.gap, sig).c_str());
        out << buf;
    }
    return out.str();
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    // First failure wins; remaining indices are drained so
                    // the pool shuts down promptly.
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    next.store(count);
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::size_t worker_count() {
    if (const char* env = std::getenv("LAMBDABAR_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

} // namespace plap
