#pragma once

#include "fbl/fblnorm.hpp"
#include "fbl/lifting.hpp"
#include "fbl/spaces.hpp"

#include <json.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fbl {

/// Absolute slack allowed on numerical inequalities.
inline constexpr double kInequalityTolerance = 1e-9;

/// Outcome of one verification check over a batch of instances.
///
/// `worst_slack` is the minimum of (right side - left side) over instances;
/// exact identities report minus the absolute deviation, with tolerance 0.
struct CheckReport {
    std::string check;
    std::size_t instances = 0;
    std::size_t failure_count = 0;
    /// Counterexample inputs, capped at kMaxRecordedFailures.
    std::vector<nlohmann::json> failures;
    double worst_slack = std::numeric_limits<double>::infinity();
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    nlohmann::json config = nlohmann::json::object();
    nlohmann::json details = nlohmann::json::object();

    static constexpr std::size_t kMaxRecordedFailures = 16;

    bool passed() const noexcept { return failure_count == 0; }
    /// Folds one instance's slack in; `counterexample()` builds the JSON
    /// input record and is only called when the instance fails.
    template <class MakeJson>
    void record(double slack, MakeJson&& counterexample)
    {
        ++instances;
        if (slack < worst_slack) worst_slack = slack;
        if (slack < -tolerance) {
            ++failure_count;
            if (failures.size() < kMaxRecordedFailures) failures.push_back(counterexample());
        }
    }
    nlohmann::json to_json() const;
};

/// Concatenates failures, sums instances, takes the minimum slack.
CheckReport merge_reports(std::string name, const std::vector<CheckReport>& parts,
                          std::uint64_t seed);

/// Single instance of the sign-averaging inequality
/// ‖Σ_i |x_i*(e_{m_i})| e_{m_i}*‖_{E*} <= sup_{x in B_E} Σ_i |x_i*(x)|.
/// Functionals must lie in the dual unit ball; indices are 1-based.
/// On l1 spaces the sign-cube constant is also compared exactly with the
/// extreme-point formula max_j Σ_i |x_i*(e_j)|.
CheckReport check_lemma44(const Space& space, const std::vector<Functional>& functionals,
                          const std::vector<std::size_t>& indices);

struct Lemma44Batch {
    std::size_t instances = 10'000;
    std::size_t max_l = 6;
    /// Random dimension 1..max_dim and exponent per instance unless fixed.
    std::optional<Space> space;
    std::size_t max_dim = 8;
    std::vector<Exponent> exponents = {Exponent::finite(1.0), Exponent::finite(1.5),
                                       Exponent::finite(2.0), Exponent::finite(3.0),
                                       Exponent::infinity()};
    std::uint64_t seed = 0;
};

/// Gaussian instances rescaled into the dual unit ball by max(1, ‖x*‖).
CheckReport check_lemma44_batch(const Lemma44Batch& batch);

/// Every tuple visited while searching Σ a_n f_n must have ratio at most
/// ‖Σ a_n e_n‖_X.
CheckReport check_normspan(const LiftingSystem& system, const std::vector<double>& coefficients,
                           const SearchConfig& config);

/// `count` random sign-and-magnitude coefficient vectors, each searched with
/// `config` (its seed offset by the vector index).
CheckReport check_normspan_batch(const LiftingSystem& system, std::size_t count,
                                 const SearchConfig& config);

/// ‖h_{n,k} - f_n‖ against the tail Σ_{j > n+k} 1/M_j. When n + k >= d the
/// difference is checked to vanish at `zero_samples` Gaussian points instead.
/// The search always uses log-scale restarts.
CheckReport check_freenorm(const LiftingSystem& system, std::size_t n, std::size_t k,
                           const SearchConfig& config, std::size_t zero_samples = 1000);

/// min(f_n(x*), f_l(x*)) == 0 for all n < l at `samples` Gaussian x*.
CheckReport check_disjoint(const LiftingSystem& system, std::size_t samples, std::uint64_t seed);

/// f_n(e_j*) == δ_{nj} for all n, j.
CheckReport check_biorthogonal(const LiftingSystem& system);

/// Lattice-lifting consistency: β(T(x)) == x to absolute 1e-12 at `samples`
/// random vectors.
CheckReport check_beta_T(const LiftingSystem& system, std::size_t samples, std::uint64_t seed);

} // namespace fbl
