#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fbl {

/// Coordinates of an element x of E with respect to the normalized basis (e_n).
class Vector {
public:
    Vector() = default;
    explicit Vector(std::vector<double> coords) : coords_(std::move(coords)) {}
    Vector(std::initializer_list<double> coords) : coords_(coords) {}

    static Vector zero(std::size_t dim) { return Vector(std::vector<double>(dim, 0.0)); }
    /// The basis vector e_n, 1-based.
    static Vector basis(std::size_t dim, std::size_t n);

    std::size_t dim() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    double& operator[](std::size_t i) { return coords_[i]; }
    std::span<const double> coords() const noexcept { return coords_; }
    const std::vector<double>& values() const noexcept { return coords_; }

    friend bool operator==(const Vector&, const Vector&) = default;

private:
    std::vector<double> coords_;
};

/// Coordinates of x* in E* with respect to the biorthogonal functionals (e_n*).
class Functional {
public:
    Functional() = default;
    explicit Functional(std::vector<double> coords) : coords_(std::move(coords)) {}
    Functional(std::initializer_list<double> coords) : coords_(coords) {}

    static Functional zero(std::size_t dim) { return Functional(std::vector<double>(dim, 0.0)); }
    /// The biorthogonal functional e_n*, 1-based.
    static Functional basis(std::size_t dim, std::size_t n);

    std::size_t dim() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    double& operator[](std::size_t i) { return coords_[i]; }
    std::span<const double> coords() const noexcept { return coords_; }
    const std::vector<double>& values() const noexcept { return coords_; }

    friend bool operator==(const Functional&, const Functional&) = default;

private:
    std::vector<double> coords_;
};

/// An exponent p in [1, ∞]. Infinity is a distinct state, never a float sentinel.
class Exponent {
public:
    static Exponent finite(double p);
    static Exponent infinity() noexcept { return Exponent(true, 0.0); }

    bool is_infinite() const noexcept { return infinite_; }
    /// Only meaningful when !is_infinite().
    double value() const noexcept { return p_; }
    /// Hölder conjugate q with 1/p + 1/q = 1.
    Exponent conjugate() const;
    std::string to_string() const;

    friend bool operator==(const Exponent&, const Exponent&) = default;

private:
    Exponent(bool infinite, double p) noexcept : infinite_(infinite), p_(p) {}
    bool infinite_;
    double p_;
};

enum class Family { lp, weighted_lp };

/// A d-dimensional Banach space with a 1-unconditional normalized basis,
/// ordered coordinatewise.
///
/// Weighted spaces are stored in the normalized basis e_n / w_n, so that
/// ‖e_n‖ = 1 for every n; the weights as given are kept for reporting.
class Space {
public:
    static Space lp(std::size_t dim, Exponent p);
    static Space weighted_lp(Exponent p, std::vector<double> weights);

    std::size_t dim() const noexcept { return weights_.size(); }
    Family family() const noexcept { return family_; }
    const Exponent& exponent() const noexcept { return p_; }
    /// Weights acting on coordinates in the normalized basis.
    std::span<const double> weights() const noexcept { return weights_; }
    std::span<const double> input_weights() const noexcept { return input_weights_; }
    bool is_l1() const noexcept { return !p_.is_infinite() && p_.value() == 1.0; }

    /// Canonical textual form (`l2:6`, `lp:2.5:4`, `wlp:2:[1,0.5]`).
    std::string to_string() const;

private:
    Space(Family family, Exponent p, std::vector<double> input_weights);

    Family family_;
    Exponent p_;
    std::vector<double> input_weights_;
    std::vector<double> weights_;
};

/// Parses `l1:4`, `l2:6`, `linf:3`, `lp:2.5:4`, `wlp:2:[1,0.5,0.25]`.
/// Throws ParseError on malformed text and ConfigError on invalid values.
Space parse_space(std::string_view text);

double norm(const Space& space, const Vector& x);
double dual_norm(const Space& space, const Functional& xstar);
/// x*(x) = Σ x*_i x_i.
double apply(const Functional& xstar, const Vector& x);

Vector join(const Vector& x, const Vector& y);
Vector meet(const Vector& x, const Vector& y);
Vector abs(const Vector& x);
Vector positive_part(const Vector& x);

/// ℓ_p norm of raw weighted coordinates; shared by the primal and dual oracles.
double weighted_lp_norm(std::span<const double> coords, std::span<const double> weights,
                        const Exponent& p);

void require_same_dim(std::size_t a, std::size_t b, const char* what);

} // namespace fbl
