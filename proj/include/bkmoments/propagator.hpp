#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bkmoments/generator.hpp"
#include "bkmoments/multi_index.hpp"
#include "bkmoments/weight_map.hpp"

namespace bkm {

enum class SchemeKind { Explicit1, Explicit2, Implicit1, Implicit2 };

struct StepScheme {
    SchemeKind kind = SchemeKind::Implicit2;
    /// Implicit2 only: divide the two-hop resolvent term by
    /// (1-h[L]_{n'n'})(1-h[L]_{mm})(1-h[L]_{nn}). Off by default.
    bool keep_two_hop_denominator = false;
};

std::string_view scheme_name(SchemeKind kind);
/// Parses "explicit1" | "explicit2" | "implicit1" | "implicit2".
SchemeKind parse_scheme(std::string_view name);

/// Maximum number of lattice moves one step of `kind` can make.
int hops_per_step(SchemeKind kind);

struct RunPlan {
    double horizon = 1.0;  ///< T > 0
    int steps = 1;         ///< M >= 1
    MultiIndex alpha;
    StepScheme scheme;
    /// Drop weights below this magnitude after every step. 0 keeps every
    /// nonzero weight; anything positive makes the result approximate.
    double prune_threshold = 0.0;

    void validate(std::size_t dimension) const;
    /// Step size used inside a single stepper call: T/M, or T/(2M) for Implicit2.
    double step_size() const;
};

/// Magnitude above which a weight is treated as divergence.
inline constexpr double kDivergenceLimit = 1e100;
/// |1 - h[L]_{nn}| (or the effective second-order diagonal) below this is singular.
inline constexpr double kSingularTolerance = 1e-8;

/// Applies one scheme step to weight maps, caching per-state matrix
/// columns so that repeated steps with the same h are cheap.
///
/// With `cutoff` set, the lattice is truncated to the box n_d < cutoff:
/// transitions out of the box are dropped, and so are two-hop paths through
/// an intermediate state outside it. The cache makes a Stepper
/// non-thread-safe; use one per thread.
class Stepper {
public:
    Stepper(const Generator& g, StepScheme scheme, double h, std::optional<int> cutoff = std::nullopt);

    WeightMap step(const WeightMap& w);

    WeightMap apply_generator(const WeightMap& w);
    WeightMap explicit1(const WeightMap& w);
    WeightMap explicit2(const WeightMap& w);
    WeightMap implicit1(const WeightMap& w);
    WeightMap resolvent2(const WeightMap& w);
    WeightMap implicit2(const WeightMap& w);

    /// Column n of the second-order resolvent approximation, including the diagonal.
    const std::vector<Transition>& resolvent2_column(const MultiIndex& n);

    double h() const noexcept { return h_; }
    const Generator& generator() const noexcept { return g_; }

private:
    struct LocalColumn {
        double diag = 0.0;
        std::vector<Transition> targets;
    };

    const LocalColumn& local(const MultiIndex& n);
    double denominator(const MultiIndex& n);
    bool inside(const MultiIndex& n) const;
    const std::vector<Transition>& implicit1_column(const MultiIndex& n);

    const Generator& g_;
    StepScheme scheme_;
    double h_;
    std::optional<int> cutoff_;
    std::unordered_map<MultiIndex, LocalColumn, IntVectorHash> local_;
    std::unordered_map<MultiIndex, std::vector<Transition>, IntVectorHash> implicit1_;
    std::unordered_map<MultiIndex, std::vector<Transition>, IntVectorHash> resolvent2_;
};

/// w + h L w
WeightMap step_explicit1(const Generator& g, const WeightMap& w, double h);
/// w + h L w + (h^2/2) L L w
WeightMap step_explicit2(const Generator& g, const WeightMap& w, double h);
/// First-order local resolvent approximation of (1 - hL)^{-1} w.
WeightMap step_implicit1(const Generator& g, const WeightMap& w, double h);
/// Second-order local resolvent approximation of (1 - hL)^{-1} w.
WeightMap resolvent2_apply(const Generator& g, const WeightMap& w, double h, bool keep_two_hop_denominator = false,
                           std::optional<int> cutoff = std::nullopt);
/// resolvent2(explicit1(w, h_half), h_half)
WeightMap step_implicit2(const Generator& g, const WeightMap& w, double h_half,
                         bool keep_two_hop_denominator = false);

struct RunTrace {
    double estimate = 0.0;
    std::vector<std::size_t> support_sizes;  ///< support after each step
    WeightMap final_weights;
};

/// Propagates {alpha: 1} through M steps and returns the weight at n = 0,
/// i.e. E[(X(T) - origin)^alpha]. States that can no longer reach 0 within
/// the remaining steps are dropped; they cannot affect the result.
double run(const Generator& g, const RunPlan& plan);
RunTrace run_traced(const Generator& g, const RunPlan& plan);

/// Largest M accepted by enumerate_walks.
inline constexpr int kMaxEnumeratedSteps = 8;

/// Brute-force sum over every length-M sequence of identity moves and
/// events from alpha to 0 under the explicit first-order scheme.
double enumerate_walks(const Generator& g, const RunPlan& plan);

/// E[X^alpha] from the shifted moments E[(X - origin)^beta], beta <= alpha.
double recover_raw_moment(const std::map<MultiIndex, double>& shifted, const MultiIndex& alpha,
                          std::span<const double> origin);

}  // namespace bkm
