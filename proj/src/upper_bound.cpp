#include "fbl/errors.hpp"
#include "fbl/fblnorm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <utility>

namespace fbl {

namespace {

constexpr std::size_t kDependenceProbes = 64;
constexpr std::size_t kMaxGridEvaluations = 5'000'000;

// A continuous piecewise-linear function on [0, 1], as its breakpoints.
using Piecewise = std::vector<std::pair<double, double>>;

double value_at(const Piecewise& pl, double t)
{
    auto it = std::lower_bound(pl.begin(), pl.end(), t,
                               [](const auto& point, double x) { return point.first < x; });
    if (it == pl.end()) return pl.back().second;
    if (it->first == t || it == pl.begin()) return it->second;
    const auto& [t0, v0] = *(it - 1);
    const auto& [t1, v1] = *it;
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

std::vector<double> merged_knots(const Piecewise& a, const Piecewise& b)
{
    std::vector<double> knots;
    for (const auto& p : a) knots.push_back(p.first);
    for (const auto& p : b) knots.push_back(p.first);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    return knots;
}

// Adds the zero crossings of the piecewise-linear g = a - b to `knots`.
std::vector<double> with_crossings(std::vector<double> knots, const Piecewise& a, const Piecewise& b)
{
    std::vector<double> out;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (i > 0) {
            const double t0 = knots[i - 1];
            const double t1 = knots[i];
            const double g0 = value_at(a, t0) - value_at(b, t0);
            const double g1 = value_at(a, t1) - value_at(b, t1);
            if ((g0 < 0.0 && g1 > 0.0) || (g0 > 0.0 && g1 < 0.0)) {
                out.push_back(t0 + (t1 - t0) * g0 / (g0 - g1));
            }
        }
        out.push_back(knots[i]);
    }
    return out;
}

template <class Op>
Piecewise combine(const std::vector<double>& knots, const Piecewise& a, const Piecewise& b, Op op)
{
    Piecewise out;
    out.reserve(knots.size());
    for (double t : knots) out.emplace_back(t, op(value_at(a, t), value_at(b, t)));
    return out;
}

// Exact restriction of a lattice-linear expression to the segment P -> Q.
Piecewise restrict_to_segment(const HomExpr& e, const Functional& from, const Functional& to)
{
    using K = HomExpr::Kind;
    const auto& ch = e.children();
    switch (e.kind()) {
    case K::delta: return {{0.0, apply(from, e.vector())}, {1.0, apply(to, e.vector())}};
    case K::scale: {
        Piecewise out = restrict_to_segment(ch[0], from, to);
        for (auto& p : out) p.second *= e.coefficient();
        return out;
    }
    case K::add: {
        Piecewise acc = restrict_to_segment(ch[0], from, to);
        for (std::size_t i = 1; i < ch.size(); ++i) {
            Piecewise next = restrict_to_segment(ch[i], from, to);
            acc = combine(merged_knots(acc, next), acc, next, std::plus<>());
        }
        return acc;
    }
    case K::abs:
    case K::pos: {
        Piecewise inner = restrict_to_segment(ch[0], from, to);
        const Piecewise zero{{0.0, 0.0}, {1.0, 0.0}};
        auto knots = with_crossings(merged_knots(inner, zero), inner, zero);
        const bool is_abs = e.kind() == K::abs;
        return combine(knots, inner, zero, [is_abs](double v, double) {
            return is_abs ? std::abs(v) : std::max(v, 0.0);
        });
    }
    case K::join:
    case K::meet: {
        Piecewise a = restrict_to_segment(ch[0], from, to);
        Piecewise b = restrict_to_segment(ch[1], from, to);
        auto knots = with_crossings(merged_knots(a, b), a, b);
        if (e.kind() == K::join) {
            return combine(knots, a, b, [](double x, double y) { return std::max(x, y); });
        }
        return combine(knots, a, b, [](double x, double y) { return std::min(x, y); });
    }
    case K::builtin_f:
    case K::builtin_h: break;
    }
    throw ConfigError("segment restriction requires a piecewise-linear expression");
}

bool is_piecewise_linear(const HomExpr& e)
{
    if (e.kind() == HomExpr::Kind::builtin_f || e.kind() == HomExpr::Kind::builtin_h) return false;
    if (e.kind() == HomExpr::Kind::delta) return true;
    return std::all_of(e.children().begin(), e.children().end(), is_piecewise_linear);
}

void probe_dependence(const HomExpr& f, const Space& space, const std::set<std::size_t>& support,
                      std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t d = space.dim();
    for (std::size_t probe = 0; probe < kDependenceProbes; ++probe) {
        Functional x = Functional::zero(d);
        for (std::size_t j = 0; j < d; ++j) x[j] = normal(rng);
        Functional y = x;
        for (std::size_t j = 0; j < d; ++j) {
            if (!support.contains(j + 1)) y[j] = normal(rng);
        }
        const double fx = eval(f, space, x);
        const double fy = eval(f, space, y);
        if (!(std::abs(fx - fy) <= 1e-12 * std::max(1.0, std::abs(fx)))) {
            throw ConfigError("expression depends on coordinates outside the given support");
        }
    }
}

} // namespace

UpperBound upper_bound_finite_coords(const HomExpr& f, const Space& space,
                                     std::span<const std::size_t> support, std::size_t grid,
                                     std::uint64_t probe_seed)
{
    if (!space.is_l1()) throw ConfigError("the finite-support bound requires an l1 space");
    if (support.empty()) throw ConfigError("support must be nonempty");
    const std::set<std::size_t> indices(support.begin(), support.end());
    if (indices.size() != support.size()) throw ConfigError("support indices must be distinct");
    for (std::size_t a : indices) {
        if (a < 1 || a > space.dim()) throw ConfigError("support index outside 1..d");
    }
    if (grid < 2) throw ConfigError("grid resolution must be at least 2");
    if (f.dim() != 0) require_same_dim(space.dim(), f.dim(), "upper_bound_finite_coords");

    probe_dependence(f, space, indices, probe_seed);

    const std::vector<std::size_t> axes(indices.begin(), indices.end());
    const std::size_t d = space.dim();
    UpperBound out;
    out.grid = grid;

    if (axes.size() == 1) {
        for (double s : {1.0, -1.0}) {
            Functional x = Functional::zero(d);
            x[axes[0] - 1] = s;
            out.face_sup = std::max(out.face_sup, std::abs(eval(f, space, x)));
            ++out.evaluations;
        }
        out.certified = true;
    } else if (axes.size() == 2 && is_piecewise_linear(f)) {
        // S is the boundary of a square: four edges, each handled exactly.
        for (std::size_t fixed = 0; fixed < 2; ++fixed) {
            for (double s : {1.0, -1.0}) {
                Functional from = Functional::zero(d);
                Functional to = Functional::zero(d);
                from[axes[fixed] - 1] = s;
                to[axes[fixed] - 1] = s;
                from[axes[1 - fixed] - 1] = -1.0;
                to[axes[1 - fixed] - 1] = 1.0;
                for (const auto& [t, v] : restrict_to_segment(f, from, to)) {
                    out.face_sup = std::max(out.face_sup, std::abs(v));
                    ++out.evaluations;
                }
            }
        }
        out.certified = true;
    } else {
        const std::size_t free_axes = axes.size() - 1;
        double per_face = 1.0;
        for (std::size_t i = 0; i < free_axes; ++i) per_face *= static_cast<double>(grid);
        if (per_face * 2.0 * static_cast<double>(axes.size()) > double(kMaxGridEvaluations)) {
            throw ConfigError("grid too fine for the support size");
        }
        std::vector<std::size_t> odometer(free_axes);
        for (std::size_t fixed = 0; fixed < axes.size(); ++fixed) {
            for (double s : {1.0, -1.0}) {
                std::fill(odometer.begin(), odometer.end(), 0);
                while (true) {
                    Functional x = Functional::zero(d);
                    x[axes[fixed] - 1] = s;
                    for (std::size_t i = 0, slot = 0; i < axes.size(); ++i) {
                        if (i == fixed) continue;
                        x[axes[i] - 1] = -1.0 + 2.0 * double(odometer[slot++]) / double(grid - 1);
                    }
                    out.face_sup = std::max(out.face_sup, std::abs(eval(f, space, x)));
                    ++out.evaluations;
                    std::size_t slot = 0;
                    while (slot < free_axes && ++odometer[slot] == grid) odometer[slot++] = 0;
                    if (slot == free_axes) break;
                }
            }
        }
        out.certified = false;
    }
    out.value = out.face_sup * static_cast<double>(axes.size());
    return out;
}

} // namespace fbl
