#include "fbl/verify.hpp"

#include "fbl/errors.hpp"
#include "fbl/report.hpp"
#include "streams.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace fbl {

using nlohmann::json;

json CheckReport::to_json() const
{
    json out;
    out["check"] = check;
    out["instances"] = instances;
    out["failures"] = failures;
    out["failure_count"] = failure_count;
    out["worst_slack"] = instances == 0 ? json(nullptr) : json(worst_slack);
    out["tolerance"] = tolerance;
    out["passed"] = passed();
    out["seed"] = seed;
    out["config"] = config;
    if (!details.empty()) out["details"] = details;
    return out;
}

CheckReport merge_reports(std::string name, const std::vector<CheckReport>& parts,
                          std::uint64_t seed)
{
    CheckReport merged;
    merged.check = std::move(name);
    merged.seed = seed;
    json parts_json = json::array();
    for (const auto& part : parts) {
        merged.instances += part.instances;
        merged.failure_count += part.failure_count;
        merged.worst_slack = std::min(merged.worst_slack, part.worst_slack);
        merged.tolerance = std::max(merged.tolerance, part.tolerance);
        for (const auto& f : part.failures) {
            if (merged.failures.size() < CheckReport::kMaxRecordedFailures) merged.failures.push_back(f);
        }
        parts_json.push_back(part.to_json());
    }
    merged.details["reports"] = std::move(parts_json);
    return merged;
}

namespace {

json functionals_json(std::span<const Functional> functionals)
{
    json out = json::array();
    for (const auto& f : functionals) out.push_back(f.values());
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Sign-averaging inequality

CheckReport check_lemma44(const Space& space, const std::vector<Functional>& functionals,
                          const std::vector<std::size_t>& indices)
{
    if (functionals.size() != indices.size()) {
        throw ConfigError("lemma44: one index per functional is required");
    }
    const std::size_t d = space.dim();
    for (const auto& f : functionals) {
        if (dual_norm(space, f) > 1.0 + 1e-12) {
            throw ConfigError("lemma44: functional outside the dual unit ball");
        }
    }

    Functional lhs_functional = Functional::zero(d);
    for (std::size_t i = 0; i < functionals.size(); ++i) {
        const std::size_t m = indices[i];
        if (m < 1 || m > d) throw ConfigError("lemma44: index outside 1..d");
        lhs_functional[m - 1] += std::abs(functionals[i][m - 1]);
    }
    const double lhs = dual_norm(space, lhs_functional);
    const TupleConstraint rhs = tuple_constraint(space, functionals);

    CheckReport report;
    report.check = "lemma44";
    report.tolerance = kInequalityTolerance;
    report.config = {{"space", space.to_string()}, {"l", functionals.size()}};
    json instance = {{"space", space.to_string()},
                     {"functionals", functionals_json(functionals)},
                     {"indices", indices},
                     {"lhs", lhs},
                     {"rhs", rhs.value}};
    report.record(rhs.value - lhs, [&] { return instance; });
    report.details["lhs"] = lhs;
    report.details["rhs"] = rhs.value;

    if (space.is_l1()) {
        // B_E has extreme points ±e_j, so C = max_j Σ_i |x_i*(e_j)|.
        double extreme = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            double column = 0.0;
            for (const auto& f : functionals) column += std::abs(f[j]);
            extreme = std::max(extreme, column);
        }
        report.details["extreme_point_constraint"] = extreme;
        if (extreme != rhs.value) {
            ++report.failure_count;
            instance["extreme_point_constraint"] = extreme;
            instance["reason"] = "sign-cube constraint differs from extreme-point formula";
            if (report.failures.size() < CheckReport::kMaxRecordedFailures) {
                report.failures.push_back(instance);
            }
        }
    }
    return report;
}

CheckReport check_lemma44_batch(const Lemma44Batch& batch)
{
    if (batch.max_l == 0 || batch.max_l > kMaxTupleSize) {
        throw ConfigError("lemma44: l must lie in 1.." + std::to_string(kMaxTupleSize));
    }
    if (!batch.space && (batch.max_dim == 0 || batch.exponents.empty())) {
        throw ConfigError("lemma44: empty dimension or exponent range");
    }

    CheckReport report;
    report.check = "lemma44";
    report.tolerance = kInequalityTolerance;
    report.seed = batch.seed;
    report.config = {{"instances", batch.instances}, {"max_l", batch.max_l}};
    if (batch.space) {
        report.config["space"] = batch.space->to_string();
    } else {
        json exps = json::array();
        for (const auto& p : batch.exponents) exps.push_back(p.to_string());
        report.config["max_dim"] = batch.max_dim;
        report.config["exponents"] = std::move(exps);
    }

    std::size_t l1_cross_checks = 0;
    for (std::size_t idx = 0; idx < batch.instances; ++idx) {
        auto rng = detail::make_stream(batch.seed, idx);
        std::normal_distribution<double> normal(0.0, 1.0);
        auto uniform_index = [&rng](std::size_t lo, std::size_t hi) {
            return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
        };
        const Space space = batch.space
            ? *batch.space
            : Space::lp(uniform_index(1, batch.max_dim),
                        batch.exponents[uniform_index(0, batch.exponents.size() - 1)]);
        const std::size_t d = space.dim();
        const std::size_t l = uniform_index(1, batch.max_l);
        std::vector<Functional> functionals;
        std::vector<std::size_t> indices;
        for (std::size_t i = 0; i < l; ++i) {
            Functional f = Functional::zero(d);
            for (std::size_t j = 0; j < d; ++j) f[j] = normal(rng);
            const double scale = std::max(1.0, dual_norm(space, f));
            for (std::size_t j = 0; j < d; ++j) f[j] /= scale;
            functionals.push_back(std::move(f));
            indices.push_back(uniform_index(1, d));
        }
        const CheckReport one = check_lemma44(space, functionals, indices);
        if (space.is_l1()) ++l1_cross_checks;
        report.instances += one.instances;
        report.failure_count += one.failure_count;
        report.worst_slack = std::min(report.worst_slack, one.worst_slack);
        for (const auto& f : one.failures) {
            if (report.failures.size() < CheckReport::kMaxRecordedFailures) report.failures.push_back(f);
        }
    }
    report.details["l1_cross_checks"] = l1_cross_checks;
    return report;
}

// ---------------------------------------------------------------------------
// Norm of spans of the generators

namespace {

/// Runs the search on `f` and records (bound - ratio) for every visited tuple.
void record_search(CheckReport& report, const HomExpr& f, const Space& space,
                   const SearchConfig& config, double bound)
{
    std::mutex mutex;
    const NormEstimate estimate = fbl_lower_bound(
        f, space, config, [&](std::span<const Functional> tuple, double objective, double constraint) {
            const double slack = bound - objective / constraint;
            std::lock_guard lock(mutex);
            report.record(slack, [&] {
                return json{{"tuple", functionals_json(tuple)},
                            {"objective", objective},
                            {"constraint", constraint}};
            });
        });
    report.details["best_lower_bound"] = estimate.lower_bound;
    report.details["bound"] = bound;
}

json search_config_json(const SearchConfig& config)
{
    return {{"k", config.tuple_size},
            {"restarts", config.restarts},
            {"local_steps", config.local_steps},
            {"seed", config.seed}};
}

} // namespace

CheckReport check_normspan(const LiftingSystem& system, const std::vector<double>& coefficients,
                           const SearchConfig& config)
{
    const Vector a(coefficients);
    require_same_dim(system.dim(), a.dim(), "check_normspan");

    CheckReport report;
    report.check = "normspan";
    report.tolerance = kInequalityTolerance;
    report.seed = config.seed;
    report.config = search_config_json(config);
    report.config["space"] = system.space().to_string();
    report.config["mseq"] = system.params().to_string();
    report.config["coefficients"] = coefficients;

    const double bound = norm(system.space(), a);
    record_search(report, T_apply(system, a), system.space(), config, bound);
    return report;
}

CheckReport check_normspan_batch(const LiftingSystem& system, std::size_t count,
                                 const SearchConfig& config)
{
    std::vector<CheckReport> parts;
    for (std::size_t idx = 0; idx < count; ++idx) {
        auto rng = detail::make_stream(config.seed ^ 0x6e6f726d7370616eULL, idx);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::bernoulli_distribution flip(0.5);
        std::vector<double> coefficients(system.dim());
        for (double& c : coefficients) c = (flip(rng) ? -1.0 : 1.0) * std::abs(normal(rng));
        SearchConfig run = config;
        run.seed = config.seed + idx;
        parts.push_back(check_normspan(system, coefficients, run));
    }
    CheckReport merged = merge_reports("normspan", parts, config.seed);
    merged.config = search_config_json(config);
    merged.config["space"] = system.space().to_string();
    merged.config["vectors"] = count;
    // Per-vector reports are large; keep only their headline numbers.
    json summary = json::array();
    for (const auto& p : parts) {
        summary.push_back({{"coefficients", p.config["coefficients"]},
                           {"bound", p.details["bound"]},
                           {"best_lower_bound", p.details["best_lower_bound"]},
                           {"tuples", p.instances},
                           {"failure_count", p.failure_count}});
    }
    merged.details = {{"vectors", std::move(summary)}};
    return merged;
}

// ---------------------------------------------------------------------------
// Truncation tail bound

CheckReport check_freenorm(const LiftingSystem& system, std::size_t n, std::size_t k,
                           const SearchConfig& config, std::size_t zero_samples)
{
    const Space& space = system.space();
    const std::size_t d = system.dim();
    if (n < 1 || n > d) throw ConfigError("freenorm: generator index outside 1..d");

    CheckReport report;
    report.check = "freenorm";
    report.seed = config.seed;
    report.config = search_config_json(config);
    report.config["space"] = space.to_string();
    report.config["mseq"] = system.params().to_string();
    report.config["n"] = n;
    report.config["k"] = k;

    if (n + k >= d) {
        // Every dropped factor is g_m(.) over m > d, i.e. absent.
        report.tolerance = 0.0;
        report.config["zero_samples"] = zero_samples;
        for (std::size_t idx = 0; idx < zero_samples; ++idx) {
            auto rng = detail::make_stream(config.seed, idx);
            std::normal_distribution<double> normal(0.0, 1.0);
            Functional x = Functional::zero(d);
            for (std::size_t j = 0; j < d; ++j) x[j] = normal(rng);
            const double diff = eval_h(system.params(), n, k, space, x) -
                                eval_f(system.params(), n, space, x);
            report.record(-std::abs(diff),
                          [&] { return json{{"xstar", x.values()}, {"difference", diff}}; });
        }
        return report;
    }

    report.tolerance = kInequalityTolerance;
    // h_{n,k} - f_n vanishes unless coordinates are separated by factors of
    // M_m, so Gaussian restarts would sit on a flat zero region.
    SearchConfig run = config;
    run.distribution = RestartDistribution::log_scale;
    report.config["distribution"] = "log_scale";
    const double tail = system.params().tail_sum(n + k, d);
    const HomExpr difference = HomExpr::add(
        {HomExpr::builtin_h(n, k, system.params()), HomExpr::scale(-1.0, system.generator(n))});
    record_search(report, difference, space, run, tail);
    return report;
}

// ---------------------------------------------------------------------------
// Exact identities

CheckReport check_disjoint(const LiftingSystem& system, std::size_t samples, std::uint64_t seed)
{
    const Space& space = system.space();
    const std::size_t d = system.dim();
    CheckReport report;
    report.check = "disjoint";
    report.seed = seed;
    report.config = {{"space", space.to_string()},
                     {"mseq", system.params().to_string()},
                     {"samples", samples}};
    std::vector<double> values(d);
    for (std::size_t idx = 0; idx < samples; ++idx) {
        auto rng = detail::make_stream(seed, idx);
        std::normal_distribution<double> normal(0.0, 1.0);
        Functional x = Functional::zero(d);
        for (std::size_t j = 0; j < d; ++j) x[j] = normal(rng);
        for (std::size_t n = 1; n <= d; ++n) values[n - 1] = eval_f(system.params(), n, space, x);
        double worst = 0.0;
        std::size_t worst_n = 0, worst_l = 0;
        for (std::size_t n = 1; n <= d; ++n) {
            for (std::size_t l = n + 1; l <= d; ++l) {
                const double overlap = std::min(values[n - 1], values[l - 1]);
                if (overlap > worst) {
                    worst = overlap;
                    worst_n = n;
                    worst_l = l;
                }
            }
        }
        report.record(-worst, [&] {
            return json{{"xstar", x.values()}, {"n", worst_n}, {"l", worst_l}, {"overlap", worst}};
        });
    }
    return report;
}

CheckReport check_biorthogonal(const LiftingSystem& system)
{
    const Space& space = system.space();
    const std::size_t d = system.dim();
    CheckReport report;
    report.check = "biorthogonal";
    report.config = {{"space", space.to_string()}, {"mseq", system.params().to_string()}};
    json matrix = json::array();
    for (std::size_t n = 1; n <= d; ++n) {
        json row = json::array();
        for (std::size_t j = 1; j <= d; ++j) {
            const double value = eval_f(system.params(), n, space, Functional::basis(d, j));
            const double expected = n == j ? 1.0 : 0.0;
            report.record(-std::abs(value - expected),
                          [&] { return json{{"n", n}, {"j", j}, {"value", value}}; });
            row.push_back(value);
        }
        matrix.push_back(std::move(row));
    }
    report.details["matrix"] = std::move(matrix);
    return report;
}

CheckReport check_beta_T(const LiftingSystem& system, std::size_t samples, std::uint64_t seed)
{
    const Space& space = system.space();
    const std::size_t d = system.dim();
    CheckReport report;
    report.check = "beta_T";
    report.tolerance = 1e-12;
    report.seed = seed;
    report.config = {{"space", space.to_string()}, {"samples", samples}};
    for (std::size_t idx = 0; idx < samples; ++idx) {
        auto rng = detail::make_stream(seed, idx);
        std::normal_distribution<double> normal(0.0, 1.0);
        Vector x = Vector::zero(d);
        for (std::size_t j = 0; j < d; ++j) x[j] = normal(rng);
        const Vector back = beta_apply(T_apply(system, x), space);
        double deviation = 0.0;
        for (std::size_t j = 0; j < d; ++j) deviation = std::max(deviation, std::abs(back[j] - x[j]));
        report.record(-deviation,
                      [&] { return json{{"x", x.values()}, {"beta_T_x", back.values()}}; });
    }
    return report;
}

} // namespace fbl
