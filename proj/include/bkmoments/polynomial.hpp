#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bkmoments/multi_index.hpp"

namespace bkm {

/// Sparse multivariate polynomial with real coefficients in a fixed number
/// of variables.
///
/// Terms are kept in canonical form: one entry per exponent, sorted
/// lexicographically, and no coefficient equal to exactly 0.0. There is no
/// epsilon-based dropping; a coefficient that cancels to a tiny nonzero
/// residue is kept.
class Polynomial {
public:
    using Terms = std::map<MultiIndex, double>;

    explicit Polynomial(std::size_t dimension);

    /// Builds from (exponent, coefficient) pairs; repeated exponents are summed.
    Polynomial(std::size_t dimension, std::span<const std::pair<MultiIndex, double>> terms);

    static Polynomial constant(std::size_t dimension, double value);
    /// coeff * x_axis
    static Polynomial variable(std::size_t dimension, std::size_t axis, double coeff = 1.0);
    /// coeff * x^exponent
    static Polynomial monomial(const MultiIndex& exponent, double coeff);

    std::size_t dimension() const noexcept { return dimension_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    /// True when every term has the zero exponent.
    bool is_constant() const noexcept;
    /// Coefficient of x^exponent (0 when absent).
    double coefficient(const MultiIndex& exponent) const;
    long long degree() const noexcept;

    double evaluate(std::span<const double> point) const;
    /// Evaluation at an integer point (lattice coordinates).
    double evaluate(const IntVector& point) const;

    Polynomial operator-() const;
    Polynomial& operator*=(double s);

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

    /// Human-readable form using `symbol` followed by the 1-based axis,
    /// e.g. "0.5*n1^2*n2 - n2". Single-variable polynomials omit the index.
    std::string to_string(const std::string& symbol = "x") const;

private:
    void add_term(const MultiIndex& exponent, double coeff);

    std::size_t dimension_;
    Terms terms_;

    friend Polynomial poly_add(const Polynomial&, const Polynomial&);
    friend Polynomial poly_mul(const Polynomial&, const Polynomial&);
    friend Polynomial poly_shift(const Polynomial&, std::span<const double>);
};

Polynomial poly_add(const Polynomial& p, const Polynomial& q);
Polynomial poly_mul(const Polynomial& p, const Polynomial& q);
inline Polynomial poly_sub(const Polynomial& p, const Polynomial& q) { return poly_add(p, -q); }

/// Rewrites p(x) as q(y) with y = x - origin, so that q(y) == p(y + origin).
/// Coefficients come from the binomial expansion of every monomial.
Polynomial poly_shift(const Polynomial& p, std::span<const double> origin);

double poly_eval(const Polynomial& p, std::span<const double> point);

inline Polynomial operator+(const Polynomial& p, const Polynomial& q) { return poly_add(p, q); }
inline Polynomial operator-(const Polynomial& p, const Polynomial& q) { return poly_sub(p, q); }
inline Polynomial operator*(const Polynomial& p, const Polynomial& q) { return poly_mul(p, q); }
inline Polynomial operator*(double s, Polynomial p) { return p *= s; }

}  // namespace bkm
