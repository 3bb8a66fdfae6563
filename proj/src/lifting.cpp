#include "fbl/lifting.hpp"

#include "fbl/errors.hpp"

#include <cmath>

namespace fbl {

LiftingSystem::LiftingSystem(Space space, LiftParams params)
    : space_(std::move(space)), params_(std::move(params))
{
    if (params_.max_index() < space_.dim()) {
        throw ConfigError("M sequence defines " + std::to_string(params_.max_index()) +
                          " cutoffs, the space needs " + std::to_string(space_.dim()));
    }
}

HomExpr LiftingSystem::generator(std::size_t n) const
{
    if (n < 1 || n > dim()) throw ConfigError("generator index outside 1..d");
    return HomExpr::builtin_f(n, params_);
}

Vector beta_apply(const HomExpr& f, const Space& space)
{
    const std::size_t d = space.dim();
    std::vector<double> out(d);
    for (std::size_t n = 1; n <= d; ++n) {
        out[n - 1] = eval(f, space, Functional::basis(d, n));
        if (!std::isfinite(out[n - 1])) throw NonFiniteError("beta: non-finite evaluation");
    }
    return Vector(std::move(out));
}

HomExpr T_apply(const LiftingSystem& system, const Vector& x)
{
    require_same_dim(system.dim(), x.dim(), "T_apply");
    std::vector<HomExpr> terms;
    for (std::size_t n = 1; n <= x.dim(); ++n) {
        const double c = x[n - 1];
        if (c == 0.0) continue;
        HomExpr fn = system.generator(n);
        terms.push_back(c == 1.0 ? fn : HomExpr::scale(c, fn));
    }
    if (terms.empty()) return HomExpr::scale(0.0, system.generator(1));
    return HomExpr::add(std::move(terms));
}

double eval_lifted(const LiftingSystem& system, const Vector& x, const Functional& xstar,
                   LiftEval mode)
{
    require_same_dim(system.dim(), x.dim(), "eval_lifted");
    double acc = 0.0;
    for (std::size_t n = 1; n <= x.dim(); ++n) {
        const double fn = eval_f(system.params(), n, system.space(), xstar);
        if (fn == 0.0) continue;
        if (mode == LiftEval::short_circuit) return x[n - 1] * fn;
        acc += x[n - 1] * fn;
    }
    return acc;
}

bool T_lattice_check(const LiftingSystem& system, const Vector& x, const Vector& y,
                     const Functional& xstar)
{
    const Space& space = system.space();
    const double lhs = eval(T_apply(system, join(x, y)), space, xstar);
    const double rhs = eval(HomExpr::join(T_apply(system, x), T_apply(system, y)), space, xstar);
    return std::abs(lhs - rhs) <= 1e-12;
}

} // namespace fbl
