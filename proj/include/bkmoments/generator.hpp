#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bkmoments/multi_index.hpp"
#include "bkmoments/polynomial.hpp"
#include "bkmoments/weight_map.hpp"

namespace bkm {

/// Polynomial-coefficient SDE  dX = a(X) dt + B(X) dW  described by its
/// drift a(x) and the diffusion matrix [B B^T](x).
struct SdeModel {
    std::size_t dimension = 0;
    std::vector<Polynomial> drift;                  ///< a_i(x), length D
    std::vector<std::vector<Polynomial>> diffusion; ///< [B B^T]_ij(x), D x D, symmetric

    /// Throws DimensionError / InvalidArgument when the model is malformed
    /// (wrong sizes, mixed dimensions, asymmetric diffusion).
    void validate() const;
};

/// One term of the adjoint generator in the monomial basis: from lattice
/// state n the term moves weight to n + shift with coefficient gamma(n).
struct Event {
    Polynomial gamma;  ///< polynomial in the lattice coordinates n
    Shift shift;

    friend bool operator==(const Event&, const Event&) = default;
};

/// Off-diagonal matrix element [L]_{n'n} for a fixed source n.
struct Transition {
    MultiIndex target;
    double value;
};

/// Event table of the adjoint (backward Kolmogorov) generator at a chosen
/// origin. Events are merged by shift and sorted lexicographically by shift.
class Generator {
public:
    Generator(std::vector<double> origin, std::vector<Event> events);

    std::size_t dimension() const noexcept { return origin_.size(); }
    const std::vector<double>& origin() const noexcept { return origin_; }
    const std::vector<Event>& events() const noexcept { return events_; }

    /// [L]_{nn}: the zero-shift event evaluated at n.
    double diag_element(const MultiIndex& n) const;

    /// Nonzero off-diagonal elements of column n. Targets with a negative
    /// component are skipped; equal targets are merged.
    std::vector<Transition> offdiag_targets(const MultiIndex& n) const;

    /// Largest amount any single off-diagonal event lowers coordinate d, or
    /// the coordinate sum when d == dimension(). Zero when nothing lowers it.
    int max_descent(std::size_t d) const;

    friend bool operator==(const Generator&, const Generator&) = default;

private:
    std::vector<double> origin_;
    std::vector<Event> events_;
    std::ptrdiff_t zero_event_ = -1;
};

/// Shifted per-monomial events before merging. Drift monomial c*y^m of
/// a_i yields (c*n_i, m - e_i); diffusion monomial c*y^m of (1/2)[BB^T]_ij
/// yields (c*n_i*(n_j - delta_ij), m - e_i - e_j).
std::vector<Event> raw_events(const SdeModel& model, std::span<const double> origin);

/// Sums gamma over equal shifts, drops identically-zero events and sorts by shift.
std::vector<Event> merge_events(std::vector<Event> events);

Generator compile_generator(const SdeModel& model, std::span<const double> origin);

inline double diag_element(const Generator& g, const MultiIndex& n) { return g.diag_element(n); }
inline std::vector<Transition> offdiag_targets(const Generator& g, const MultiIndex& n) {
    return g.offdiag_targets(n);
}

/// out[n'] = sum_n [L]_{n'n} w[n].
WeightMap apply_generator(const Generator& g, const WeightMap& w);

/// Event table laid out as "No.  gamma_r(n)  v_r", one row per merged event.
std::string format_event_table(const Generator& g);

}  // namespace bkm
