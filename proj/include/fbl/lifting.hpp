#pragma once

#include "fbl/homfun.hpp"
#include "fbl/spaces.hpp"

#include <vector>

namespace fbl {

/// The lattice-lifting data for a space X: the disjoint positive generators
/// f_1, ..., f_d and the operator T(x) = Σ_n x_n f_n.
class LiftingSystem {
public:
    /// Throws ConfigError when `params` does not define cutoffs up to d.
    LiftingSystem(Space space, LiftParams params = LiftParams::pow2());

    const Space& space() const noexcept { return space_; }
    const LiftParams& params() const noexcept { return params_; }
    std::size_t dim() const noexcept { return space_.dim(); }
    /// f_n as an expression, 1-based.
    HomExpr generator(std::size_t n) const;

private:
    Space space_;
    LiftParams params_;
};

/// β(f) = Σ_n f(e_n*) e_n. Throws NonFiniteError on NaN/inf evaluations.
Vector beta_apply(const HomExpr& f, const Space& space);

/// T(x) as a formal combination of f_n builtins. Zero coefficients are
/// dropped and unit ones left unscaled, so T(e_n) is exactly f_n; T(0) is 0*f_1.
HomExpr T_apply(const LiftingSystem& system, const Vector& x);

enum class LiftEval {
    /// Stop at the unique n with f_n(x*) != 0.
    short_circuit,
    /// Sum every term.
    full_sum,
};

/// Evaluates T(x) at x* without building the expression.
double eval_lifted(const LiftingSystem& system, const Vector& x, const Functional& xstar,
                   LiftEval mode = LiftEval::short_circuit);

/// Checks T(x ∨ y)(x*) == (T(x) ∨ T(y))(x*) to absolute 1e-12.
bool T_lattice_check(const LiftingSystem& system, const Vector& x, const Vector& y,
                     const Functional& xstar);

} // namespace fbl
