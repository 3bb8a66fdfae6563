#pragma once

#include "fbl/homfun.hpp"
#include "fbl/spaces.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fbl {

/// Largest tuple whose sign cube is enumerated.
inline constexpr std::size_t kMaxTupleSize = 24;

struct TupleConstraint {
    /// C = sup_{x in B_E} Σ_i |x_i*(x)| = max_ε ‖Σ_i ε_i x_i*‖_{E*}.
    double value = 0.0;
    /// Lexicographically smallest maximizing ε, with ε_1 = +1.
    std::vector<int> signs;
};

/// Exact admissibility constant of a tuple, by enumerating the 2^{k-1} sign
/// patterns with the first sign fixed.
TupleConstraint tuple_constraint(const Space& space, std::span<const Functional> functionals);

/// A finite tuple x_1*, ..., x_k* together with its cached constraint.
class FunctionalTuple {
public:
    FunctionalTuple() = default;
    FunctionalTuple(const Space& space, std::vector<Functional> functionals);

    const std::vector<Functional>& functionals() const noexcept { return functionals_; }
    double constraint() const noexcept { return constraint_.value; }
    const std::vector<int>& certificate() const noexcept { return constraint_.signs; }
    std::size_t size() const noexcept { return functionals_.size(); }

private:
    std::vector<Functional> functionals_;
    TupleConstraint constraint_;
};

/// Σ_i |f(x_i*)|. Throws NonFiniteError if any value is NaN or infinite.
double tuple_objective(const HomExpr& f, const Space& space, std::span<const Functional> functionals);

enum class RestartDistribution {
    /// i.i.d. standard normal coordinates.
    gaussian,
    /// Random signs with magnitudes 2^u, u uniform on [-kLogScaleSpan, kLogScaleSpan];
    /// reaches functions supported where coordinates differ by orders of magnitude.
    log_scale,
};

inline constexpr double kLogScaleSpan = 12.0;

struct SearchConfig {
    std::size_t tuple_size = 4;
    std::size_t restarts = 200;
    /// Maximum improvement sweeps per step-size round.
    std::size_t local_steps = 4;
    std::uint64_t seed = 0;
    RestartDistribution distribution = RestartDistribution::gaussian;
    /// Worker threads for restarts; results do not depend on it.
    std::size_t threads = 1;
};

struct NormEstimate {
    double lower_bound = 0.0;
    double objective = 0.0;
    FunctionalTuple witness;
    std::size_t restarts = 0;
    std::size_t evaluations = 0;
    std::uint64_t seed = 0;
};

/// Called on every tuple the search evaluates, with its objective and
/// constraint. Must be thread-safe when SearchConfig::threads > 1.
using TupleObserver =
    std::function<void(std::span<const Functional> tuple, double objective, double constraint)>;

/// Lower bound for ‖f‖_{FBL[E]} by random restarts refined with coordinate
/// hill climbing. Deterministic in (f, space, config); restart r draws from
/// its own stream seeded by (seed, r), so more restarts never lower the bound.
NormEstimate fbl_lower_bound(const HomExpr& f, const Space& space, const SearchConfig& config,
                             const TupleObserver& observer = {});

struct UpperBound {
    /// sup_S |f| * |A_0|, where S is the sup-norm unit sphere on the support.
    double value = 0.0;
    double face_sup = 0.0;
    /// True when the sup over S was computed exactly rather than on a grid.
    bool certified = false;
    std::size_t grid = 0;
    std::size_t evaluations = 0;
};

/// Upper bound for ‖f‖_{FBL[ℓ_1^d]} when f depends only on the coordinates
/// in `support` (1-based). The dependence is probed at random points first;
/// a failed probe raises ConfigError.
///
/// The sup over S is exact for |support| = 1, and for |support| = 2 when f
/// is piecewise linear (no f/h builtins); otherwise it is estimated on a grid
/// of `grid` points per free axis of each face.
UpperBound upper_bound_finite_coords(const HomExpr& f, const Space& space,
                                     std::span<const std::size_t> support, std::size_t grid,
                                     std::uint64_t probe_seed = 0);

} // namespace fbl
