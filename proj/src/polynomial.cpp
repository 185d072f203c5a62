#include "bkmoments/polynomial.hpp"

#include <cmath>
#include <cstdio>

namespace bkm {
namespace {

void require_dimension(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got) {
        throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                             ", got " + std::to_string(got));
    }
}

// Row k of Pascal's triangle as doubles; exact for the degrees we meet.
std::vector<double> binomial_row(int k) {
    std::vector<double> row(static_cast<std::size_t>(k) + 1, 1.0);
    for (int i = 1; i < k; ++i) {
        row[static_cast<std::size_t>(i)] =
            row[static_cast<std::size_t>(i - 1)] * static_cast<double>(k - i + 1) / static_cast<double>(i);
    }
    return row;
}

std::string format_coeff(double c) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", c);
    return buf;
}

}  // namespace

Polynomial::Polynomial(std::size_t dimension) : dimension_(dimension) {
    if (dimension == 0 || dimension > kMaxDim) {
        throw DimensionError("polynomial dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    }
}

Polynomial::Polynomial(std::size_t dimension, std::span<const std::pair<MultiIndex, double>> terms)
    : Polynomial(dimension) {
    for (const auto& [exp, coeff] : terms) {
        require_dimension(dimension_, exp.size(), "polynomial term");
        if (!exp.is_nonnegative()) throw InvalidArgument("monomial exponents must be non-negative");
        add_term(exp, coeff);
    }
}

Polynomial Polynomial::constant(std::size_t dimension, double value) {
    Polynomial p(dimension);
    p.add_term(MultiIndex::zeros(dimension), value);
    return p;
}

Polynomial Polynomial::variable(std::size_t dimension, std::size_t axis, double coeff) {
    if (axis >= dimension) throw DimensionError("variable axis out of range");
    Polynomial p(dimension);
    p.add_term(MultiIndex::unit(dimension, axis), coeff);
    return p;
}

Polynomial Polynomial::monomial(const MultiIndex& exponent, double coeff) {
    if (!exponent.is_nonnegative()) throw InvalidArgument("monomial exponents must be non-negative");
    Polynomial p(exponent.size());
    p.add_term(exponent, coeff);
    return p;
}

void Polynomial::add_term(const MultiIndex& exponent, double coeff) {
    if (coeff == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(exponent, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0.0) terms_.erase(it);
    }
}

bool Polynomial::is_constant() const noexcept {
    for (const auto& [exp, c] : terms_) {
        if (!exp.is_zero()) return false;
    }
    return true;
}

double Polynomial::coefficient(const MultiIndex& exponent) const {
    require_dimension(dimension_, exponent.size(), "coefficient lookup");
    auto it = terms_.find(exponent);
    return it == terms_.end() ? 0.0 : it->second;
}

long long Polynomial::degree() const noexcept {
    long long d = 0;
    for (const auto& [exp, c] : terms_) d = std::max(d, exp.total());
    return d;
}

double Polynomial::evaluate(std::span<const double> point) const {
    require_dimension(dimension_, point.size(), "polynomial evaluation");
    double sum = 0.0;
    for (const auto& [exp, c] : terms_) {
        double term = c;
        for (std::size_t d = 0; d < dimension_; ++d) {
            for (int k = 0; k < exp[d]; ++k) term *= point[d];
        }
        sum += term;
    }
    return sum;
}

double Polynomial::evaluate(const IntVector& point) const {
    require_dimension(dimension_, point.size(), "polynomial evaluation");
    double sum = 0.0;
    for (const auto& [exp, c] : terms_) {
        double term = c;
        for (std::size_t d = 0; d < dimension_; ++d) {
            const double x = static_cast<double>(point[d]);
            for (int k = 0; k < exp[d]; ++k) term *= x;
        }
        sum += term;
    }
    return sum;
}

Polynomial Polynomial::operator-() const {
    Polynomial out = *this;
    for (auto& [exp, c] : out.terms_) c = -c;
    return out;
}

Polynomial& Polynomial::operator*=(double s) {
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= s;
        it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
    }
    return *this;
}

std::string Polynomial::to_string(const std::string& symbol) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    // Highest total degree first reads more naturally.
    std::vector<std::pair<MultiIndex, double>> ordered(terms_.begin(), terms_.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        return a.first.total() > b.first.total();
    });
    for (const auto& [exp, c] : ordered) {
        double mag = std::abs(c);
        if (first) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        first = false;
        std::string body;
        for (std::size_t d = 0; d < dimension_; ++d) {
            if (exp[d] == 0) continue;
            if (!body.empty()) body += '*';
            body += symbol;
            if (dimension_ > 1) body += std::to_string(d + 1);
            if (exp[d] > 1) body += "^" + std::to_string(exp[d]);
        }
        if (body.empty()) {
            out += format_coeff(mag);
        } else if (mag == 1.0) {
            out += body;
        } else {
            out += format_coeff(mag) + "*" + body;
        }
    }
    return out;
}

Polynomial poly_add(const Polynomial& p, const Polynomial& q) {
    require_dimension(p.dimension_, q.dimension_, "poly_add");
    Polynomial out = p;
    for (const auto& [exp, c] : q.terms_) out.add_term(exp, c);
    return out;
}

Polynomial poly_mul(const Polynomial& p, const Polynomial& q) {
    require_dimension(p.dimension_, q.dimension_, "poly_mul");
    Polynomial out(p.dimension_);
    for (const auto& [ep, cp] : p.terms_) {
        for (const auto& [eq, cq] : q.terms_) out.add_term(ep + eq, cp * cq);
    }
    return out;
}

Polynomial poly_shift(const Polynomial& p, std::span<const double> origin) {
    require_dimension(p.dimension_, origin.size(), "poly_shift");
    const std::size_t dim = p.dimension_;
    Polynomial out(dim);
    for (const auto& [exp, coeff] : p.terms_) {
        // x_d^m = sum_k C(m,k) origin_d^(m-k) y_d^k; expand the tensor product.
        std::vector<std::vector<double>> factors(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            const int m = exp[d];
            auto row = binomial_row(m);
            factors[d].resize(static_cast<std::size_t>(m) + 1);
            for (int k = 0; k <= m; ++k) {
                double pw = 1.0;
                for (int j = 0; j < m - k; ++j) pw *= origin[d];
                factors[d][static_cast<std::size_t>(k)] = row[static_cast<std::size_t>(k)] * pw;
            }
        }
        MultiIndex k(dim);
        while (true) {
            double c = coeff;
            for (std::size_t d = 0; d < dim; ++d) c *= factors[d][static_cast<std::size_t>(k[d])];
            out.add_term(k, c);
            std::size_t d = 0;
            for (; d < dim; ++d) {
                if (++k[d] <= exp[d]) break;
                k[d] = 0;
            }
            if (d == dim) break;
        }
    }
    return out;
}

double poly_eval(const Polynomial& p, std::span<const double> point) { return p.evaluate(point); }

}  // namespace bkm
