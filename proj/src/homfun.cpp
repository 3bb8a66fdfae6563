#include "fbl/homfun.hpp"

#include "fbl/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace fbl {

// ---------------------------------------------------------------------------
// LiftParams

LiftParams LiftParams::pow2()
{
    return LiftParams{};
}

LiftParams LiftParams::custom(std::vector<double> m_values)
{
    if (m_values.empty()) throw ConfigError("custom M sequence must be nonempty");
    double previous = 0.0;
    for (double m : m_values) {
        if (!std::isfinite(m) || !(m > previous)) {
            throw ConfigError("custom M sequence must be positive, finite and strictly increasing");
        }
        previous = m;
    }
    LiftParams p;
    p.rule_ = Rule::custom;
    p.m_values_ = std::move(m_values);
    return p;
}

LiftParams LiftParams::from_rule(std::string_view text)
{
    if (text == "pow2") return pow2();
    if (text == "harmonic") {
        throw ConfigError("M_n = n is not admissible: the series of 1/M_n diverges");
    }
    constexpr std::string_view prefix = "custom:";
    if (text.substr(0, prefix.size()) == prefix) {
        std::vector<double> values;
        std::string_view rest = text.substr(prefix.size());
        while (!rest.empty()) {
            const std::size_t comma = rest.find(',');
            std::string_view token = rest.substr(0, comma);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
            if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
                throw ConfigError("malformed custom M sequence '" + std::string(text) + "'");
            }
            values.push_back(v);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        return custom(std::move(values));
    }
    throw ConfigError("unknown M sequence rule '" + std::string(text) + "'");
}

std::size_t LiftParams::max_index() const noexcept
{
    return rule_ == Rule::pow2 ? std::size_t(1000) : m_values_.size();
}

double LiftParams::M(std::size_t n) const
{
    if (n < 1 || n > max_index()) {
        throw ConfigError("cutoff index " + std::to_string(n) + " outside the M sequence");
    }
    if (rule_ == Rule::pow2) return std::ldexp(1.0, static_cast<int>(n));
    return m_values_[n - 1];
}

double LiftParams::N(std::size_t n) const
{
    return 2.0 * M(n);
}

double LiftParams::tail_sum(std::size_t from, std::size_t upto) const
{
    if (rule_ == Rule::pow2) return std::ldexp(1.0, -static_cast<int>(from));
    double acc = 0.0;
    for (std::size_t j = from + 1; j <= std::min(upto, m_values_.size()); ++j) acc += 1.0 / M(j);
    return acc;
}

std::string LiftParams::to_string() const
{
    if (rule_ == Rule::pow2) return "pow2";
    std::string out = "custom:";
    for (std::size_t i = 0; i < m_values_.size(); ++i) {
        char buf[64];
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, m_values_[i]);
        if (i) out += ",";
        out.append(buf, end);
    }
    return out;
}

double eval_g(const LiftParams& params, std::size_t m, double t)
{
    const double lo = params.M(m);
    const double hi = params.N(m);
    if (t <= lo) return 1.0;
    if (t >= hi) return 0.0;
    return std::clamp((hi - t) / (hi - lo), 0.0, 1.0);
}

namespace {

// g_m(num / den) with the cutoffs tested in product form. The zero branch
// compares num against the same rounded N_m * den used by the positive part
// of f_m, which keeps disjointness exact in floating point.
double ramp_factor(const LiftParams& params, std::size_t m, double num, double den)
{
    const double lo = params.M(m);
    const double hi = params.N(m);
    if (num <= lo * den) return 1.0;
    if (num >= hi * den) return 0.0;
    return std::clamp((hi - num / den) / (hi - lo), 0.0, 1.0);
}

double lift_term(const LiftParams& params, std::size_t n, std::size_t last,
                 std::span<const double> xs)
{
    const double a = std::abs(xs[n - 1]);
    if (a == 0.0) return 0.0;
    double prior = 0.0;
    for (std::size_t m = 1; m < n; ++m) prior = std::max(prior, std::abs(xs[m - 1]));
    const double base = a - params.N(n) * prior;
    if (!(base > 0.0)) return 0.0;
    double product = 1.0;
    for (std::size_t m = n + 1; m <= last; ++m) {
        product *= ramp_factor(params, m, std::abs(xs[m - 1]), a);
        if (product == 0.0) return 0.0;
    }
    return base * product;
}

void check_builtin_index(std::size_t n, std::size_t dim)
{
    if (n < 1 || n > dim) {
        throw ConfigError("generator index " + std::to_string(n) + " outside 1.." +
                          std::to_string(dim));
    }
}

} // namespace

double eval_f(const LiftParams& params, std::size_t n, const Space& space, const Functional& xstar)
{
    require_same_dim(space.dim(), xstar.dim(), "eval_f");
    check_builtin_index(n, space.dim());
    return lift_term(params, n, space.dim(), xstar.coords());
}

double eval_h(const LiftParams& params, std::size_t n, std::size_t k, const Space& space,
              const Functional& xstar)
{
    require_same_dim(space.dim(), xstar.dim(), "eval_h");
    check_builtin_index(n, space.dim());
    return lift_term(params, n, std::min(n + k, space.dim()), xstar.coords());
}

// ---------------------------------------------------------------------------
// HomExpr

struct HomExpr::Node {
    Kind kind;
    std::size_t dim = 0;
    Vector vec;
    double coef = 0.0;
    std::vector<HomExpr> children;
    std::size_t n = 0;
    std::size_t k = 0;
    LiftParams params;
};

namespace {

std::size_t merged_dim(const std::vector<HomExpr>& children)
{
    std::size_t dim = 0;
    for (const auto& c : children) {
        if (c.dim() == 0) continue;
        if (dim != 0 && dim != c.dim()) {
            throw DimensionError("expression mixes generators of dimension " + std::to_string(dim) +
                                 " and " + std::to_string(c.dim()));
        }
        dim = c.dim();
    }
    return dim;
}

} // namespace

HomExpr HomExpr::delta(Vector x)
{
    if (x.dim() == 0) throw DimensionError("delta generator needs a nonempty vector");
    auto node = std::make_shared<Node>();
    node->kind = Kind::delta;
    node->dim = x.dim();
    node->vec = std::move(x);
    return HomExpr(std::move(node));
}

HomExpr HomExpr::scale(double c, HomExpr child)
{
    auto node = std::make_shared<Node>();
    node->kind = Kind::scale;
    node->coef = c;
    node->children.push_back(std::move(child));
    node->dim = merged_dim(node->children);
    return HomExpr(std::move(node));
}

HomExpr HomExpr::add(std::vector<HomExpr> children)
{
    if (children.empty()) throw ConfigError("sum needs at least one term");
    if (children.size() == 1) return std::move(children.front());
    auto node = std::make_shared<Node>();
    node->kind = Kind::add;
    node->children = std::move(children);
    node->dim = merged_dim(node->children);
    return HomExpr(std::move(node));
}

namespace {

template <class NodeT>
std::shared_ptr<NodeT> make_node(HomExpr::Kind kind, std::vector<HomExpr> children)
{
    auto node = std::make_shared<NodeT>();
    node->kind = kind;
    node->children = std::move(children);
    node->dim = merged_dim(node->children);
    return node;
}

} // namespace

HomExpr HomExpr::abs(HomExpr child)
{
    return HomExpr(make_node<Node>(Kind::abs, {std::move(child)}));
}

HomExpr HomExpr::pos(HomExpr child)
{
    return HomExpr(make_node<Node>(Kind::pos, {std::move(child)}));
}

HomExpr HomExpr::join(HomExpr left, HomExpr right)
{
    return HomExpr(make_node<Node>(Kind::join, {std::move(left), std::move(right)}));
}

HomExpr HomExpr::meet(HomExpr left, HomExpr right)
{
    return HomExpr(make_node<Node>(Kind::meet, {std::move(left), std::move(right)}));
}

HomExpr HomExpr::builtin_f(std::size_t n, LiftParams params)
{
    if (n < 1) throw ConfigError("generator index is 1-based");
    auto node = std::make_shared<Node>();
    node->kind = Kind::builtin_f;
    node->n = n;
    node->params = std::move(params);
    return HomExpr(std::move(node));
}

HomExpr HomExpr::builtin_h(std::size_t n, std::size_t k, LiftParams params)
{
    if (n < 1) throw ConfigError("generator index is 1-based");
    auto node = std::make_shared<Node>();
    node->kind = Kind::builtin_h;
    node->n = n;
    node->k = k;
    node->params = std::move(params);
    return HomExpr(std::move(node));
}

HomExpr::Kind HomExpr::kind() const noexcept { return node_->kind; }
std::size_t HomExpr::dim() const noexcept { return node_->dim; }
const Vector& HomExpr::vector() const { return node_->vec; }
double HomExpr::coefficient() const { return node_->coef; }
const std::vector<HomExpr>& HomExpr::children() const { return node_->children; }
std::size_t HomExpr::index() const { return node_->n; }
std::size_t HomExpr::level() const { return node_->k; }
const LiftParams& HomExpr::params() const { return node_->params; }

bool operator==(const HomExpr& a, const HomExpr& b)
{
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.kind != y.kind) return false;
    switch (x.kind) {
    case HomExpr::Kind::delta: return x.vec == y.vec;
    case HomExpr::Kind::builtin_f: return x.n == y.n && x.params == y.params;
    case HomExpr::Kind::builtin_h: return x.n == y.n && x.k == y.k && x.params == y.params;
    case HomExpr::Kind::scale:
        if (x.coef != y.coef) return false;
        break;
    default: break;
    }
    return x.children == y.children;
}

namespace {

double eval_node(const HomExpr& e, const Space& space, const Functional& xstar)
{
    using K = HomExpr::Kind;
    const auto& ch = e.children();
    switch (e.kind()) {
    case K::delta: return apply(xstar, e.vector());
    case K::scale: return e.coefficient() * eval_node(ch[0], space, xstar);
    case K::add: {
        double acc = 0.0;
        for (const auto& c : ch) acc += eval_node(c, space, xstar);
        return acc;
    }
    case K::abs: return std::abs(eval_node(ch[0], space, xstar));
    case K::pos: return std::max(eval_node(ch[0], space, xstar), 0.0);
    case K::join: return std::max(eval_node(ch[0], space, xstar), eval_node(ch[1], space, xstar));
    case K::meet: return std::min(eval_node(ch[0], space, xstar), eval_node(ch[1], space, xstar));
    case K::builtin_f:
        check_builtin_index(e.index(), space.dim());
        return lift_term(e.params(), e.index(), space.dim(), xstar.coords());
    case K::builtin_h:
        check_builtin_index(e.index(), space.dim());
        return lift_term(e.params(), e.index(), std::min(e.index() + e.level(), space.dim()),
                         xstar.coords());
    }
    return 0.0;
}

} // namespace

double eval(const HomExpr& expr, const Space& space, const Functional& xstar)
{
    require_same_dim(space.dim(), xstar.dim(), "eval");
    if (expr.dim() != 0) require_same_dim(space.dim(), expr.dim(), "eval");
    return eval_node(expr, space, xstar);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string number_text(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

enum class Level { expr, meet, sum, prod, atom };

Level level_of(HomExpr::Kind kind)
{
    using K = HomExpr::Kind;
    switch (kind) {
    case K::join: return Level::expr;
    case K::meet: return Level::meet;
    case K::add: return Level::sum;
    case K::scale: return Level::prod;
    default: return Level::atom;
    }
}

void print(const HomExpr& e, std::string& out);

// Emits `e` so that it parses back at grammar level `want`.
void print_at(const HomExpr& e, Level want, std::string& out)
{
    if (level_of(e.kind()) < want) {
        out += '(';
        print(e, out);
        out += ')';
    } else {
        print(e, out);
    }
}

void print(const HomExpr& e, std::string& out)
{
    using K = HomExpr::Kind;
    const auto& ch = e.children();
    switch (e.kind()) {
    case K::delta:
        out += "d(";
        for (std::size_t i = 0; i < e.vector().dim(); ++i) {
            if (i) out += ',';
            out += number_text(e.vector()[i]);
        }
        out += ')';
        break;
    case K::scale:
        out += number_text(e.coefficient());
        out += '*';
        print_at(ch[0], Level::atom, out);
        break;
    case K::add:
        for (std::size_t i = 0; i < ch.size(); ++i) {
            if (i) out += " + ";
            print_at(ch[i], Level::prod, out);
        }
        break;
    case K::abs:
        out += '|';
        print(ch[0], out);
        out += '|';
        break;
    case K::pos:
        out += "pos(";
        print(ch[0], out);
        out += ')';
        break;
    case K::join:
        print_at(ch[0], Level::expr, out);
        out += " v ";
        print_at(ch[1], Level::meet, out);
        break;
    case K::meet:
        print_at(ch[0], Level::meet, out);
        out += " ^ ";
        print_at(ch[1], Level::sum, out);
        break;
    case K::builtin_f: out += "f(" + std::to_string(e.index()) + ")"; break;
    case K::builtin_h:
        out += "h(" + std::to_string(e.index()) + "," + std::to_string(e.level()) + ")";
        break;
    }
}

} // namespace

std::string to_string(const HomExpr& expr)
{
    std::string out;
    print(expr, out);
    return out;
}

} // namespace fbl
