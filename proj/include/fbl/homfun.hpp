#pragma once

#include "fbl/spaces.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace fbl {

enum class Ramp { linear };

/// Cutoff data (M_n), (N_n) and the ramp family g_m driving the disjoint
/// generators f_n and their truncations h_{n,k}.
///
/// Sequences are 1-based. The default rule is M_n = 2^n, N_n = 2^{n+1};
/// a custom rule takes an explicit finite list for M and sets N_n = 2 M_n.
class LiftParams {
public:
    enum class Rule { pow2, custom };

    static LiftParams pow2();
    /// Requires a nonempty, strictly increasing list of positive finite values.
    static LiftParams custom(std::vector<double> m_values);
    /// Parses `pow2`, `custom:4,8,16`. Known divergent rules (`harmonic`)
    /// and malformed lists are rejected with ConfigError.
    static LiftParams from_rule(std::string_view text);

    Rule rule() const noexcept { return rule_; }
    Ramp ramp() const noexcept { return ramp_; }
    /// Largest index with defined cutoffs (unbounded for pow2).
    std::size_t max_index() const noexcept;

    double M(std::size_t n) const;
    double N(std::size_t n) const;
    /// Σ_{j > from, j <= upto} 1/M_j; for pow2 the infinite tail 2^{-from}
    /// is returned regardless of `upto`.
    double tail_sum(std::size_t from, std::size_t upto) const;
    std::string to_string() const;

    friend bool operator==(const LiftParams&, const LiftParams&) = default;

private:
    Rule rule_ = Rule::pow2;
    Ramp ramp_ = Ramp::linear;
    std::vector<double> m_values_;
};

/// g_m(t): 1 on [0, M_m], linear down to 0 on [M_m, N_m], 0 beyond.
double eval_g(const LiftParams& params, std::size_t m, double t);

/// Immutable expression tree for a positively homogeneous function on E*.
/// Copies share structure.
class HomExpr {
public:
    enum class Kind { delta, scale, add, abs, pos, join, meet, builtin_f, builtin_h };

    static HomExpr delta(Vector x);
    static HomExpr scale(double c, HomExpr child);
    /// A single term is returned unchanged, so sums always hold >= 2 terms.
    static HomExpr add(std::vector<HomExpr> children);
    static HomExpr abs(HomExpr child);
    static HomExpr pos(HomExpr child);
    static HomExpr join(HomExpr left, HomExpr right);
    static HomExpr meet(HomExpr left, HomExpr right);
    static HomExpr builtin_f(std::size_t n, LiftParams params);
    static HomExpr builtin_h(std::size_t n, std::size_t k, LiftParams params);

    Kind kind() const noexcept;
    /// Dimension fixed by Delta nodes, 0 when no Delta occurs.
    std::size_t dim() const noexcept;

    const Vector& vector() const;                  // delta
    double coefficient() const;                    // scale
    const std::vector<HomExpr>& children() const;  // scale/abs/pos: 1, join/meet: 2, add: >= 2
    std::size_t index() const;                     // builtin_f / builtin_h: n
    std::size_t level() const;                     // builtin_h: k
    const LiftParams& params() const;              // builtins

    friend bool operator==(const HomExpr& a, const HomExpr& b);

private:
    struct Node;
    explicit HomExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

double eval(const HomExpr& expr, const Space& space, const Functional& xstar);

/// f_n(x*), exact in finite dimension: the product runs over n < m <= d.
double eval_f(const LiftParams& params, std::size_t n, const Space& space, const Functional& xstar);
/// h_{n,k}(x*): as f_n with the product truncated at min(n + k, d).
double eval_h(const LiftParams& params, std::size_t n, std::size_t k, const Space& space,
              const Functional& xstar);

/// Pretty-prints in the textual grammar accepted by parse_expr.
std::string to_string(const HomExpr& expr);

/// Parses the lattice expression grammar:
///
///     expr := meet ( "v" meet )*
///     meet := sum ( "^" sum )*
///     sum  := prod ( ("+"|"-") prod )*
///     prod := [ number "*" ] atom
///     atom := "d(" number ("," number)* ")" | "|" expr "|" | "pos(" expr ")"
///           | "f(" int ")" | "h(" int "," int ")" | "(" expr ")"
///
/// `a - b` is read as `a + -1*b`. Builtins f/h use `params`.
/// Throws ParseError (with byte offset) on malformed input or inconsistent
/// Delta dimensions.
HomExpr parse_expr(std::string_view text, const LiftParams& params = LiftParams::pow2());

} // namespace fbl
