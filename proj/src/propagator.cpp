#include "bkmoments/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace bkm {
namespace {

std::string describe(const MultiIndex& n, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return "state " + n.to_string() + " (value " + buf + ")";
}

// Column-oriented sparse matrix-vector product: out = sum_n w[n] * column(n).
template <class ColumnFn>
WeightMap scatter(const WeightMap& w, ColumnFn&& column) {
    WeightMap out;
    out.reserve(w.size() * 4);
    for (const auto& [n, weight] : w) {
        for (const auto& t : column(n)) out.add(t.target, t.value * weight);
    }
    out.drop_zeros();
    return out;
}

// Lower bound on the number of off-diagonal moves needed to bring n to 0.
// Saturates when 0 is unreachable.
class ReachabilityBound {
public:
    explicit ReachabilityBound(const Generator& g) : dim_(g.dimension()) {
        for (std::size_t d = 0; d <= dim_; ++d) descent_.push_back(g.max_descent(d));
    }

    long long operator()(const MultiIndex& n) const {
        long long bound = 0;
        for (std::size_t d = 0; d <= dim_; ++d) {
            const long long amount = d == dim_ ? n.total() : n[d];
            if (amount == 0) continue;
            if (descent_[d] == 0) return std::numeric_limits<long long>::max();
            bound = std::max(bound, (amount + descent_[d] - 1) / descent_[d]);
        }
        return bound;
    }

private:
    std::size_t dim_;
    std::vector<int> descent_;
};

}  // namespace

std::string_view scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::Explicit1: return "explicit1";
        case SchemeKind::Explicit2: return "explicit2";
        case SchemeKind::Implicit1: return "implicit1";
        case SchemeKind::Implicit2: return "implicit2";
    }
    return "unknown";
}

SchemeKind parse_scheme(std::string_view name) {
    for (auto k : {SchemeKind::Explicit1, SchemeKind::Explicit2, SchemeKind::Implicit1, SchemeKind::Implicit2}) {
        if (scheme_name(k) == name) return k;
    }
    throw InvalidArgument("unknown method '" + std::string(name) +
                          "' (expected explicit1, explicit2, implicit1 or implicit2)");
}

int hops_per_step(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::Explicit1: return 1;
        case SchemeKind::Implicit1: return 1;
        case SchemeKind::Explicit2: return 2;
        case SchemeKind::Implicit2: return 3;
    }
    return 3;
}

void RunPlan::validate(std::size_t dimension) const {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidArgument("horizon T must be positive");
    if (steps < 1) throw InvalidArgument("step count M must be at least 1");
    if (alpha.size() != dimension) throw DimensionError("alpha length does not match model dimension");
    if (!alpha.is_nonnegative()) throw InvalidArgument("alpha entries must be non-negative");
    if (prune_threshold < 0.0) throw InvalidArgument("prune threshold must be non-negative");
}

double RunPlan::step_size() const {
    const double h = horizon / static_cast<double>(steps);
    return scheme.kind == SchemeKind::Implicit2 ? 0.5 * h : h;
}

Stepper::Stepper(const Generator& g, StepScheme scheme, double h, std::optional<int> cutoff)
    : g_(g), scheme_(scheme), h_(h), cutoff_(cutoff) {
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("step size h must be positive");
    if (cutoff && *cutoff < 1) throw InvalidArgument("lattice cutoff must be at least 1");
}

bool Stepper::inside(const MultiIndex& n) const {
    if (!cutoff_) return true;
    return std::all_of(n.begin(), n.end(), [c = *cutoff_](int x) { return x < c; });
}

const Stepper::LocalColumn& Stepper::local(const MultiIndex& n) {
    auto it = local_.find(n);
    if (it != local_.end()) return it->second;
    LocalColumn col;
    col.diag = g_.diag_element(n);
    col.targets = g_.offdiag_targets(n);
    if (cutoff_) std::erase_if(col.targets, [this](const Transition& t) { return !inside(t.target); });
    return local_.emplace(n, std::move(col)).first->second;
}

double Stepper::denominator(const MultiIndex& n) {
    const double d = 1.0 - h_ * local(n).diag;
    if (!(std::abs(d) >= kSingularTolerance)) {
        throw NumericalError("singular resolvent diagonal 1 - h[L]_nn at " + describe(n, d) +
                             "; reduce the step size");
    }
    return d;
}

WeightMap Stepper::apply_generator(const WeightMap& w) {
    WeightMap out;
    out.reserve(w.size() * 4);
    for (const auto& [n, weight] : w) {
        const auto& col = local(n);
        if (col.diag != 0.0) out.add(n, col.diag * weight);
        for (const auto& t : col.targets) out.add(t.target, t.value * weight);
    }
    out.drop_zeros();
    return out;
}

WeightMap Stepper::explicit1(const WeightMap& w) {
    WeightMap out = w;
    out.axpy(h_, apply_generator(w));
    return out;
}

WeightMap Stepper::explicit2(const WeightMap& w) {
    const WeightMap lw = apply_generator(w);
    const WeightMap llw = apply_generator(lw);
    WeightMap out = w;
    out.axpy(h_, lw);
    out.axpy(0.5 * h_ * h_, llw);
    return out;
}

const std::vector<Transition>& Stepper::implicit1_column(const MultiIndex& n) {
    auto it = implicit1_.find(n);
    if (it != implicit1_.end()) return it->second;
    const double dn = denominator(n);
    std::vector<Transition> col;
    col.push_back({n, 1.0 / dn});
    for (const auto& t : local(n).targets) {
        col.push_back({t.target, h_ * t.value / (denominator(t.target) * dn)});
    }
    return implicit1_.emplace(n, std::move(col)).first->second;
}

WeightMap Stepper::implicit1(const WeightMap& w) {
    return scatter(w, [this](const MultiIndex& n) -> const auto& { return implicit1_column(n); });
}

const std::vector<Transition>& Stepper::resolvent2_column(const MultiIndex& n) {
    auto it = resolvent2_.find(n);
    if (it != resolvent2_.end()) return it->second;

    const double dn = denominator(n);
    const double h2 = h_ * h_;
    // Node-based cache: references survive later insertions.
    const LocalColumn& here = local(n);

    // n -> m -> n loops for the diagonal; m != n holds because targets are off-diagonal.
    double loop_sum = 0.0;
    std::map<MultiIndex, double> off;
    for (const auto& first : here.targets) {
        const MultiIndex& mid = first.target;
        const double dmid = denominator(mid);
        off[mid] += h_ * first.value / (dmid * dn);
        const auto& onward = local(mid).targets;
        for (const auto& second : onward) {
            if (second.target == n) {
                loop_sum += second.value * first.value;
                continue;
            }
            double term = h2 * second.value * first.value;
            if (scheme_.keep_two_hop_denominator) term /= denominator(second.target) * dmid * dn;
            off[second.target] += term;
        }
    }

    const double effective = 1.0 - h_ * here.diag - h2 * loop_sum;
    if (!(std::abs(effective) >= kSingularTolerance)) {
        throw NumericalError("singular second-order resolvent diagonal at " + describe(n, effective) +
                             "; reduce the step size");
    }
    std::vector<Transition> col;
    col.reserve(off.size() + 1);
    col.push_back({n, 1.0 / effective});
    for (const auto& [target, value] : off) {
        if (value != 0.0) col.push_back({target, value});
    }
    return resolvent2_.emplace(n, std::move(col)).first->second;
}

WeightMap Stepper::resolvent2(const WeightMap& w) {
    return scatter(w, [this](const MultiIndex& n) -> const auto& { return resolvent2_column(n); });
}

WeightMap Stepper::implicit2(const WeightMap& w) { return resolvent2(explicit1(w)); }

WeightMap Stepper::step(const WeightMap& w) {
    switch (scheme_.kind) {
        case SchemeKind::Explicit1: return explicit1(w);
        case SchemeKind::Explicit2: return explicit2(w);
        case SchemeKind::Implicit1: return implicit1(w);
        case SchemeKind::Implicit2: return implicit2(w);
    }
    return w;
}

WeightMap step_explicit1(const Generator& g, const WeightMap& w, double h) {
    return Stepper(g, {SchemeKind::Explicit1}, h).explicit1(w);
}

WeightMap step_explicit2(const Generator& g, const WeightMap& w, double h) {
    return Stepper(g, {SchemeKind::Explicit2}, h).explicit2(w);
}

WeightMap step_implicit1(const Generator& g, const WeightMap& w, double h) {
    return Stepper(g, {SchemeKind::Implicit1}, h).implicit1(w);
}

WeightMap resolvent2_apply(const Generator& g, const WeightMap& w, double h, bool keep_two_hop_denominator,
                           std::optional<int> cutoff) {
    return Stepper(g, {SchemeKind::Implicit2, keep_two_hop_denominator}, h, cutoff).resolvent2(w);
}

WeightMap step_implicit2(const Generator& g, const WeightMap& w, double h_half, bool keep_two_hop_denominator) {
    return Stepper(g, {SchemeKind::Implicit2, keep_two_hop_denominator}, h_half).implicit2(w);
}

RunTrace run_traced(const Generator& g, const RunPlan& plan) {
    plan.validate(g.dimension());
    Stepper stepper(g, plan.scheme, plan.step_size());
    const ReachabilityBound bound(g);
    const long long hops = hops_per_step(plan.scheme.kind);

    RunTrace trace;
    trace.support_sizes.reserve(static_cast<std::size_t>(plan.steps));
    WeightMap w = WeightMap::unit(plan.alpha);
    for (int k = 1; k <= plan.steps; ++k) {
        w = stepper.step(w);
        w.prune(plan.prune_threshold);
        const long long remaining = hops * (plan.steps - k);
        WeightMap kept;
        kept.reserve(w.size());
        for (const auto& [n, weight] : w) {
            if (bound(n) <= remaining) kept.set(n, weight);
        }
        w = std::move(kept);
        const double peak = w.max_abs();
        if (!(peak <= kDivergenceLimit)) {
            throw NumericalError("weights diverged at step " + std::to_string(k) + " of " +
                                 std::to_string(plan.steps) + " (max |w| = " + std::to_string(peak) +
                                 "); increase M or use an implicit scheme");
        }
        trace.support_sizes.push_back(w.size());
    }
    trace.estimate = w.at(MultiIndex::zeros(g.dimension()));
    trace.final_weights = std::move(w);
    return trace;
}

double run(const Generator& g, const RunPlan& plan) { return run_traced(g, plan).estimate; }

double enumerate_walks(const Generator& g, const RunPlan& plan) {
    plan.validate(g.dimension());
    if (plan.scheme.kind != SchemeKind::Explicit1) {
        throw InvalidArgument("walk enumeration is only defined for the explicit1 scheme");
    }
    if (plan.steps > kMaxEnumeratedSteps) {
        throw InvalidArgument("walk enumeration is limited to M <= " + std::to_string(kMaxEnumeratedSteps));
    }
    const double h = plan.step_size();
    const auto& events = g.events();

    // Depth-first over step sequences; choice -1 is the identity move.
    double total = 0.0;
    auto visit = [&](auto&& self, const MultiIndex& n, int remaining, double weight) -> void {
        if (remaining == 0) {
            if (n.is_zero()) total += weight;
            return;
        }
        self(self, n, remaining - 1, weight);
        for (const auto& e : events) {
            MultiIndex next = n + e.shift;
            if (!next.is_nonnegative()) continue;
            const double factor = h * e.gamma.evaluate(n);
            if (factor == 0.0) continue;
            self(self, next, remaining - 1, weight * factor);
        }
    };
    visit(visit, plan.alpha, plan.steps, 1.0);
    return total;
}

double recover_raw_moment(const std::map<MultiIndex, double>& shifted, const MultiIndex& alpha,
                          std::span<const double> origin) {
    if (origin.size() != alpha.size()) throw DimensionError("origin length does not match alpha");
    if (!alpha.is_nonnegative()) throw InvalidArgument("alpha entries must be non-negative");
    const std::size_t dim = alpha.size();
    double total = 0.0;
    MultiIndex beta(dim);
    while (true) {
        auto it = shifted.find(beta);
        if (it == shifted.end()) throw InvalidArgument("missing shifted moment for beta = " + beta.to_string());
        double coeff = 1.0;
        for (std::size_t d = 0; d < dim; ++d) {
            double binom = 1.0;
            for (int i = 1; i <= beta[d]; ++i) binom = binom * (alpha[d] - beta[d] + i) / i;
            coeff *= binom * std::pow(origin[d], alpha[d] - beta[d]);
        }
        total += coeff * it->second;
        std::size_t d = 0;
        for (; d < dim; ++d) {
            if (++beta[d] <= alpha[d]) break;
            beta[d] = 0;
        }
        if (d == dim) break;
    }
    return total;
}

}  // namespace bkm
