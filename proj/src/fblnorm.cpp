#include "fbl/fblnorm.hpp"

#include "fbl/errors.hpp"
#include "streams.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace fbl {

namespace {

bool all_zero(std::span<const Functional> functionals)
{
    for (const auto& f : functionals) {
        for (double c : f.coords()) {
            if (c != 0.0) return false;
        }
    }
    return true;
}

} // namespace

TupleConstraint tuple_constraint(const Space& space, std::span<const Functional> functionals)
{
    const std::size_t k = functionals.size();
    if (k == 0) throw ConfigError("tuple must contain at least one functional");
    if (k > kMaxTupleSize) {
        throw ConfigError("tuple size " + std::to_string(k) + " exceeds the sign-cube cap of " +
                          std::to_string(kMaxTupleSize));
    }
    const std::size_t d = space.dim();
    for (const auto& f : functionals) require_same_dim(d, f.dim(), "tuple_constraint");

    std::vector<double> inverse(d);
    for (std::size_t j = 0; j < d; ++j) inverse[j] = 1.0 / space.weights()[j];
    const Exponent q = space.exponent().conjugate();

    TupleConstraint best;
    best.value = -1.0;
    std::vector<int> signs(k, 1);
    std::vector<double> combined(d);
    const std::uint64_t patterns = std::uint64_t(1) << (k - 1);
    // Bit (k-1-i) of p selects ε_i for i >= 1, set bit meaning +1; counting
    // p upward therefore walks the patterns in lexicographic order.
    for (std::uint64_t p = 0; p < patterns; ++p) {
        for (std::size_t i = 1; i < k; ++i) signs[i] = ((p >> (k - 1 - i)) & 1u) ? 1 : -1;
        std::fill(combined.begin(), combined.end(), 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            const auto c = functionals[i].coords();
            for (std::size_t j = 0; j < d; ++j) combined[j] += signs[i] * c[j];
        }
        const double value = weighted_lp_norm(combined, inverse, q);
        if (value > best.value) {
            best.value = value;
            best.signs = signs;
        }
    }
    return best;
}

FunctionalTuple::FunctionalTuple(const Space& space, std::vector<Functional> functionals)
    : functionals_(std::move(functionals)), constraint_(tuple_constraint(space, functionals_))
{
}

double tuple_objective(const HomExpr& f, const Space& space, std::span<const Functional> functionals)
{
    double acc = 0.0;
    for (const auto& xstar : functionals) {
        const double v = eval(f, space, xstar);
        if (!std::isfinite(v)) throw NonFiniteError("expression evaluated to a non-finite value");
        acc += std::abs(v);
    }
    return acc;
}

namespace {

constexpr double kInitialStep = 0.5;
constexpr double kStepDecay = 0.7;
constexpr int kDecayRounds = 8;

struct RestartResult {
    std::vector<Functional> tuple;
    double ratio = -1.0;
    std::size_t evaluations = 0;
};

class RestartSearch {
public:
    RestartSearch(const HomExpr& f, const Space& space, const SearchConfig& config,
                  const TupleObserver& observer)
        : f_(f), space_(space), config_(config), observer_(observer)
    {
    }

    RestartResult run(std::size_t restart) const
    {
        std::mt19937_64 rng = detail::make_stream(config_.seed, restart);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> exponent(-kLogScaleSpan, kLogScaleSpan);
        std::bernoulli_distribution negative(0.5);
        auto draw = [&] {
            if (config_.distribution == RestartDistribution::gaussian) return normal(rng);
            const double magnitude = std::exp2(exponent(rng));
            return negative(rng) ? -magnitude : magnitude;
        };

        const std::size_t k = config_.tuple_size;
        const std::size_t d = space_.dim();
        RestartResult out;
        std::vector<Functional> tuple(k, Functional::zero(d));
        do {
            for (auto& xstar : tuple) {
                for (std::size_t j = 0; j < d; ++j) xstar[j] = draw();
            }
        } while (all_zero(tuple));

        // Cache |f(x_i*)| so a single-coordinate move re-evaluates one term.
        std::vector<double> values(k);
        for (std::size_t i = 0; i < k; ++i) values[i] = term(tuple[i]);
        double ratio = score(tuple, values, out.evaluations);

        double step = kInitialStep;
        for (int round = 0; round < kDecayRounds; ++round) {
            for (std::size_t sweep = 0; sweep < config_.local_steps; ++sweep) {
                bool improved = false;
                for (std::size_t i = 0; i < k; ++i) {
                    for (std::size_t j = 0; j < d; ++j) {
                        const double origin = tuple[i][j];
                        // Optima of lattice-linear ratios sit on coordinate
                        // hyperplanes, which a fixed step grid never hits.
                        const double delta = config_.distribution == RestartDistribution::log_scale
                                                 ? step * std::abs(origin)
                                                 : step;
                        const double moves[] = {origin + delta, origin - delta, 0.0};
                        for (double target : moves) {
                            const double saved = tuple[i][j];
                            const double saved_value = values[i];
                            if (target == saved) continue;
                            tuple[i][j] = target;
                            if (all_zero(tuple)) {
                                tuple[i][j] = saved;
                                continue;
                            }
                            values[i] = term(tuple[i]);
                            const double candidate = score(tuple, values, out.evaluations);
                            if (candidate > ratio) {
                                ratio = candidate;
                                improved = true;
                                break;
                            }
                            tuple[i][j] = saved;
                            values[i] = saved_value;
                        }
                    }
                }
                if (!improved) break;
            }
            step *= kStepDecay;
        }
        out.tuple = std::move(tuple);
        out.ratio = ratio;
        return out;
    }

private:
    const HomExpr& f_;
    const Space& space_;
    const SearchConfig& config_;
    const TupleObserver& observer_;

    double term(const Functional& xstar) const
    {
        const double v = eval(f_, space_, xstar);
        if (!std::isfinite(v)) throw NonFiniteError("expression evaluated to a non-finite value");
        return std::abs(v);
    }

    double score(std::span<const Functional> tuple, std::span<const double> values,
                 std::size_t& evaluations) const
    {
        ++evaluations;
        double objective = 0.0;
        for (double v : values) objective += v;
        const double constraint = tuple_constraint(space_, tuple).value;
        if (observer_) observer_(tuple, objective, constraint);
        return objective / constraint;
    }
};

} // namespace

NormEstimate fbl_lower_bound(const HomExpr& f, const Space& space, const SearchConfig& config,
                             const TupleObserver& observer)
{
    if (config.tuple_size == 0 || config.tuple_size > kMaxTupleSize) {
        throw ConfigError("tuple size must lie in 1.." + std::to_string(kMaxTupleSize));
    }
    if (config.restarts == 0) throw ConfigError("at least one restart is required");
    if (f.dim() != 0) require_same_dim(space.dim(), f.dim(), "fbl_lower_bound");

    const RestartSearch search(f, space, config, observer);
    std::vector<RestartResult> results(config.restarts);
    const std::size_t threads = std::clamp<std::size_t>(config.threads, 1, config.restarts);
    if (threads == 1) {
        for (std::size_t r = 0; r < config.restarts; ++r) results[r] = search.run(r);
    } else {
        std::vector<std::exception_ptr> errors(threads);
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t r = t; r < config.restarts; r += threads) results[r] = search.run(r);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    // Merge in restart order; ties keep the earliest restart.
    std::size_t best = 0;
    std::size_t evaluations = 0;
    for (std::size_t r = 0; r < results.size(); ++r) {
        evaluations += results[r].evaluations;
        if (results[r].ratio > results[best].ratio) best = r;
    }

    NormEstimate estimate;
    estimate.witness = FunctionalTuple(space, std::move(results[best].tuple));
    estimate.objective = tuple_objective(f, space, estimate.witness.functionals());
    estimate.lower_bound = estimate.objective / estimate.witness.constraint();
    estimate.restarts = config.restarts;
    estimate.evaluations = evaluations;
    estimate.seed = config.seed;
    return estimate;
}

} // namespace fbl
