#include "fbl/errors.hpp"
#include "fbl/fblnorm.hpp"
#include "fbl/lifting.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace fbl;

TEST_CASE("beta examples")
{
    const Space s = parse_space("l2:3");
    CHECK(beta_apply(parse_expr("d(1,2,3)"), s) == Vector{1, 2, 3});
    CHECK(beta_apply(parse_expr("|d(1,-2,0)|"), s) == Vector{1, 2, 0});
    CHECK(beta_apply(parse_expr("pos(d(1,-2,0))"), s) == Vector{1, 0, 0});
    CHECK(beta_apply(parse_expr("f(2)"), s) == Vector{0, 1, 0});
    CHECK_THROWS_AS(beta_apply(parse_expr("d(1,0)"), s), DimensionError);
    CHECK_THROWS_AS(beta_apply(HomExpr::scale(NAN, parse_expr("d(1,0,0)")), s), NonFiniteError);
}

TEST_CASE("T on basis vectors and zero")
{
    const LiftingSystem sys(parse_space("l1:4"));
    for (std::size_t n = 1; n <= 4; ++n) {
        CHECK(T_apply(sys, Vector::basis(4, n)) == sys.generator(n));
        CHECK(to_string(T_apply(sys, Vector::basis(4, n))) == "f(" + std::to_string(n) + ")");
    }
    const HomExpr zero = T_apply(sys, Vector::zero(4));
    gen::Rng rng(3);
    for (int i = 0; i < 200; ++i) CHECK(eval(zero, sys.space(), gen::functional(rng, 4)) == 0.0);
    CHECK(to_string(T_apply(sys, Vector{0, -2, 0, 1})) == "-2*f(2) + f(4)");
}

TEST_CASE("property: beta inverts T")
{
    gen::Rng rng(5);
    for (int i = 0; i < 2000; ++i) {
        const std::size_t d = gen::index(rng, 1, 8);
        const LiftingSystem sys(gen::space(rng, d));
        const Vector x = gen::vector(rng, d);
        const Vector back = beta_apply(T_apply(sys, x), sys.space());
        for (std::size_t j = 0; j < d; ++j) CHECK(back[j] == doctest::Approx(x[j]).epsilon(1e-12));
    }
}

TEST_CASE("lattice check examples")
{
    const LiftingSystem sys(parse_space("l2:2"));
    const Functional xs{1.0, 0.0};
    CHECK(T_lattice_check(sys, Vector{1, -1}, Vector{-1, 1}, xs));
    CHECK(T_lattice_check(sys, Vector{0, 0}, Vector{0, 0}, Functional{0.3, 0.9}));
    CHECK(T_lattice_check(sys, Vector{2, 5}, Vector{3, -4}, Functional{0.01, 1.0}));
}

TEST_CASE("property: T is a lattice homomorphism pointwise")
{
    gen::Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const std::size_t d = gen::index(rng, 1, 8);
        const LiftingSystem sys(Space::lp(d, Exponent::finite(2.0)));
        CHECK(T_lattice_check(sys, gen::vector(rng, d), gen::vector(rng, d), gen::functional(rng, d)));
    }
}

TEST_CASE("property: lifted evaluation modes agree with the expression")
{
    gen::Rng rng(9);
    for (int i = 0; i < 3000; ++i) {
        const std::size_t d = gen::index(rng, 1, 8);
        const LiftingSystem sys(Space::lp(d, Exponent::finite(1.0)));
        const Vector x = gen::vector(rng, d);
        const Functional xs = gen::functional(rng, d);
        const double fast = eval_lifted(sys, x, xs, LiftEval::short_circuit);
        const double slow = eval_lifted(sys, x, xs, LiftEval::full_sum);
        CHECK(fast == slow);
        CHECK(fast == doctest::Approx(eval(T_apply(sys, x), sys.space(), xs)).epsilon(1e-12).scale(1e-300));
    }
}

TEST_CASE("property: at most one generator is nonzero at a point")
{
    gen::Rng rng(11);
    for (int i = 0; i < 3000; ++i) {
        const std::size_t d = gen::index(rng, 1, 8);
        const LiftingSystem sys(Space::lp(d, Exponent::infinity()));
        const Functional xs = gen::functional(rng, d);
        int nonzero = 0;
        for (std::size_t n = 1; n <= d; ++n) {
            const double v = eval(sys.generator(n), sys.space(), xs);
            CHECK(v >= 0.0);
            CHECK(v == doctest::Approx(oracle::lift_generator(xs.values(), n, d)).epsilon(1e-12).scale(1e-300));
            nonzero += v != 0.0;
        }
        CHECK(nonzero <= 1);
    }
}

TEST_CASE("property: truncated generators decrease towards f_n")
{
    gen::Rng rng(13);
    const Space s = parse_space("l2:7");
    for (int i = 0; i < 2000; ++i) {
        const Functional xs = gen::functional(rng, 7);
        const std::size_t n = gen::index(rng, 1, 6);
        double previous = INFINITY;
        for (std::size_t k = 0; n + k <= 7; ++k) {
            const double v = eval_h(LiftParams::pow2(), n, k, s, xs);
            CHECK(v <= previous + 1e-15);
            previous = v;
        }
        CHECK(previous == eval_f(LiftParams::pow2(), n, s, xs));
    }
}

TEST_CASE("cutoff lists must cover the dimension")
{
    CHECK_THROWS_AS(LiftingSystem(parse_space("l2:4"), LiftParams::from_rule("custom:2,4,8")), ConfigError);
    const LiftingSystem ok(parse_space("l2:3"), LiftParams::from_rule("custom:2,4,8"));
    CHECK(ok.dim() == 3);
    CHECK_THROWS_AS(T_apply(ok, Vector{1, 2}), DimensionError);
}

TEST_CASE("property: lifted vectors do not exceed the vector norm on any tuple")
{
    gen::Rng rng(17);
    for (int i = 0; i < 20; ++i) {
        const std::size_t d = gen::index(rng, 1, 5);
        const LiftingSystem sys(gen::space(rng, d));
        const Vector x = gen::vector(rng, d);
        const double nx = norm(sys.space(), x);
        double worst = 0.0;
        fbl_lower_bound(T_apply(sys, x), sys.space(), {.tuple_size = 4, .restarts = 4, .seed = std::uint64_t(i)},
                        [&](std::span<const Functional>, double obj, double c) { worst = std::max(worst, obj / c); });
        CHECK(worst <= nx + 1e-9 * std::max(1.0, nx));
    }
}
