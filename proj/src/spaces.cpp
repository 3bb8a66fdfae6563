#include "fbl/spaces.hpp"

#include "fbl/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace fbl {

void require_same_dim(std::size_t a, std::size_t b, const char* what)
{
    if (a != b) {
        throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                             " vs " + std::to_string(b) + ")");
    }
}

Vector Vector::basis(std::size_t dim, std::size_t n)
{
    if (n < 1 || n > dim) {
        throw ConfigError("basis index " + std::to_string(n) + " outside 1.." + std::to_string(dim));
    }
    Vector v = zero(dim);
    v[n - 1] = 1.0;
    return v;
}

Functional Functional::basis(std::size_t dim, std::size_t n)
{
    if (n < 1 || n > dim) {
        throw ConfigError("basis index " + std::to_string(n) + " outside 1.." + std::to_string(dim));
    }
    Functional f = zero(dim);
    f[n - 1] = 1.0;
    return f;
}

Exponent Exponent::finite(double p)
{
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw ConfigError("exponent must lie in [1, inf), got " + std::to_string(p));
    }
    return Exponent(false, p);
}

Exponent Exponent::conjugate() const
{
    if (infinite_) return finite(1.0);
    if (p_ == 1.0) return infinity();
    if (p_ == 2.0) return finite(2.0);
    return finite(p_ / (p_ - 1.0));
}

namespace {

std::string format_double(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

} // namespace

std::string Exponent::to_string() const
{
    return infinite_ ? std::string("inf") : format_double(p_);
}

Space::Space(Family family, Exponent p, std::vector<double> input_weights)
    : family_(family), p_(p), input_weights_(std::move(input_weights))
{
    if (input_weights_.empty()) throw ConfigError("space dimension must be at least 1");
    for (double w : input_weights_) {
        if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("weights must be finite and > 0");
    }
    // In the basis e_n / w_n every weight becomes 1.
    weights_.resize(input_weights_.size());
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        weights_[i] = input_weights_[i] / input_weights_[i];
    }
}

Space Space::lp(std::size_t dim, Exponent p)
{
    return Space(Family::lp, p, std::vector<double>(dim, 1.0));
}

Space Space::weighted_lp(Exponent p, std::vector<double> weights)
{
    return Space(Family::weighted_lp, p, std::move(weights));
}

std::string Space::to_string() const
{
    if (family_ == Family::weighted_lp) {
        std::string out = "wlp:" + p_.to_string() + ":[";
        for (std::size_t i = 0; i < input_weights_.size(); ++i) {
            if (i) out += ",";
            out += format_double(input_weights_[i]);
        }
        return out + "]";
    }
    const std::string d = std::to_string(dim());
    if (p_.is_infinite()) return "linf:" + d;
    if (p_.value() == 1.0) return "l1:" + d;
    if (p_.value() == 2.0) return "l2:" + d;
    return "lp:" + p_.to_string() + ":" + d;
}

namespace {

struct SpaceScanner {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos); }

    std::string_view field()
    {
        std::size_t end = text.find(':', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view out = text.substr(pos, end - pos);
        return out;
    }

    void expect(char c)
    {
        if (pos >= text.size() || text[pos] != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }

    double number(std::string_view token)
    {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
            fail("expected a number");
        }
        pos += token.size();
        return v;
    }

    std::size_t dimension()
    {
        std::string_view token = text.substr(pos);
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
            fail("expected a positive integer dimension");
        }
        if (v == 0) throw ConfigError("space dimension must be at least 1");
        pos += token.size();
        return v;
    }

    Exponent exponent()
    {
        std::string_view token = field();
        if (token == "inf") {
            pos += token.size();
            return Exponent::infinity();
        }
        return Exponent::finite(number(token));
    }
};

} // namespace

Space parse_space(std::string_view text)
{
    SpaceScanner s{text};
    std::string_view kind = s.field();
    s.pos += kind.size();
    s.expect(':');
    if (kind == "l1") return Space::lp(s.dimension(), Exponent::finite(1.0));
    if (kind == "l2") return Space::lp(s.dimension(), Exponent::finite(2.0));
    if (kind == "linf") return Space::lp(s.dimension(), Exponent::infinity());
    if (kind == "lp") {
        Exponent p = s.exponent();
        s.expect(':');
        return Space::lp(s.dimension(), p);
    }
    if (kind == "wlp") {
        Exponent p = s.exponent();
        s.expect(':');
        s.expect('[');
        std::vector<double> weights;
        while (true) {
            std::size_t end = text.find_first_of(",]", s.pos);
            if (end == std::string_view::npos) s.fail("unterminated weight list");
            weights.push_back(s.number(text.substr(s.pos, end - s.pos)));
            if (text[s.pos] == ']') break;
            s.expect(',');
        }
        s.expect(']');
        if (s.pos != text.size()) s.fail("trailing characters");
        return Space::weighted_lp(p, std::move(weights));
    }
    s.pos = 0;
    s.fail("unknown space family '" + std::string(kind) + "'");
}

double weighted_lp_norm(std::span<const double> coords, std::span<const double> weights,
                        const Exponent& p)
{
    double largest = 0.0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        largest = std::max(largest, std::abs(coords[i]) * weights[i]);
    }
    if (p.is_infinite() || largest == 0.0) return largest;

    const double q = p.value();
    double acc = 0.0;
    if (q == 1.0) {
        for (std::size_t i = 0; i < coords.size(); ++i) acc += std::abs(coords[i]) * weights[i];
        return acc;
    }
    // Scale by the largest term to keep the powers in range.
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const double t = std::abs(coords[i]) * weights[i] / largest;
        acc += q == 2.0 ? t * t : std::pow(t, q);
    }
    return largest * (q == 2.0 ? std::sqrt(acc) : std::pow(acc, 1.0 / q));
}

double norm(const Space& space, const Vector& x)
{
    require_same_dim(space.dim(), x.dim(), "norm");
    return weighted_lp_norm(x.coords(), space.weights(), space.exponent());
}

double dual_norm(const Space& space, const Functional& xstar)
{
    require_same_dim(space.dim(), xstar.dim(), "dual_norm");
    std::vector<double> inverse(space.dim());
    for (std::size_t i = 0; i < inverse.size(); ++i) inverse[i] = 1.0 / space.weights()[i];
    return weighted_lp_norm(xstar.coords(), inverse, space.exponent().conjugate());
}

double apply(const Functional& xstar, const Vector& x)
{
    require_same_dim(xstar.dim(), x.dim(), "apply");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) acc += xstar[i] * x[i];
    return acc;
}

namespace {

template <class Op>
Vector coordinatewise(const Vector& x, const Vector& y, Op op, const char* what)
{
    require_same_dim(x.dim(), y.dim(), what);
    std::vector<double> out(x.dim());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(x[i], y[i]);
    return Vector(std::move(out));
}

} // namespace

Vector join(const Vector& x, const Vector& y)
{
    return coordinatewise(x, y, [](double a, double b) { return std::max(a, b); }, "join");
}

Vector meet(const Vector& x, const Vector& y)
{
    return coordinatewise(x, y, [](double a, double b) { return std::min(a, b); }, "meet");
}

Vector abs(const Vector& x)
{
    return coordinatewise(x, x, [](double a, double) { return std::abs(a); }, "abs");
}

Vector positive_part(const Vector& x)
{
    return coordinatewise(x, x, [](double a, double) { return std::max(a, 0.0); }, "positive_part");
}

} // namespace fbl
