#include "bkmoments/generator.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace bkm {

void SdeModel::validate() const {
    if (dimension == 0 || dimension > kMaxDim) {
        throw DimensionError("model dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    }
    if (drift.size() != dimension) throw DimensionError("drift must have one polynomial per dimension");
    if (diffusion.size() != dimension) throw DimensionError("diffusion must be a D x D matrix");
    for (const auto& a : drift) {
        if (a.dimension() != dimension) throw DimensionError("drift polynomial has wrong dimension");
    }
    for (const auto& row : diffusion) {
        if (row.size() != dimension) throw DimensionError("diffusion must be a D x D matrix");
        for (const auto& p : row) {
            if (p.dimension() != dimension) throw DimensionError("diffusion polynomial has wrong dimension");
        }
    }
    for (std::size_t i = 0; i < dimension; ++i) {
        for (std::size_t j = i + 1; j < dimension; ++j) {
            if (!(diffusion[i][j] == diffusion[j][i])) {
                throw InvalidArgument("diffusion matrix is not symmetric at (" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + ")");
            }
        }
    }
}

std::vector<Event> raw_events(const SdeModel& model, std::span<const double> origin) {
    model.validate();
    const std::size_t dim = model.dimension;
    if (origin.size() != dim) throw DimensionError("origin length does not match model dimension");

    std::vector<Event> events;
    for (std::size_t i = 0; i < dim; ++i) {
        const Polynomial shifted = poly_shift(model.drift[i], origin);
        const Shift down_i = Shift::unit(dim, i);
        for (const auto& [m, c] : shifted.terms()) {
            events.push_back({Polynomial::variable(dim, i, c), m - down_i});
        }
    }
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            const Polynomial shifted = poly_shift(0.5 * model.diffusion[i][j], origin);
            if (shifted.is_zero()) continue;
            // n_i * (n_j - delta_ij)
            Polynomial second = Polynomial::variable(dim, i) *
                                (Polynomial::variable(dim, j) - Polynomial::constant(dim, i == j ? 1.0 : 0.0));
            const Shift down = Shift::unit(dim, i) + Shift::unit(dim, j);
            for (const auto& [m, c] : shifted.terms()) {
                events.push_back({c * second, m - down});
            }
        }
    }
    return events;
}

std::vector<Event> merge_events(std::vector<Event> events) {
    std::map<Shift, Polynomial> by_shift;
    for (auto& e : events) {
        auto it = by_shift.find(e.shift);
        if (it == by_shift.end()) {
            by_shift.emplace(e.shift, std::move(e.gamma));
        } else {
            it->second = it->second + e.gamma;
        }
    }
    std::vector<Event> merged;
    merged.reserve(by_shift.size());
    for (auto& [shift, gamma] : by_shift) {
        if (!gamma.is_zero()) merged.push_back({std::move(gamma), shift});
    }
    return merged;
}

Generator compile_generator(const SdeModel& model, std::span<const double> origin) {
    return Generator({origin.begin(), origin.end()}, merge_events(raw_events(model, origin)));
}

Generator::Generator(std::vector<double> origin, std::vector<Event> events)
    : origin_(std::move(origin)), events_(std::move(events)) {
    const std::size_t dim = origin_.size();
    if (dim == 0 || dim > kMaxDim) throw DimensionError("generator dimension out of range");
    for (std::size_t r = 0; r < events_.size(); ++r) {
        const auto& e = events_[r];
        if (e.shift.size() != dim || e.gamma.dimension() != dim) {
            throw DimensionError("event dimension does not match generator origin");
        }
        if (r > 0 && !(events_[r - 1].shift < e.shift)) {
            throw InvalidArgument("events must be merged and sorted by shift");
        }
        if (e.shift.is_zero()) zero_event_ = static_cast<std::ptrdiff_t>(r);
    }
}

double Generator::diag_element(const MultiIndex& n) const {
    if (n.size() != dimension()) throw DimensionError("state dimension does not match generator");
    if (zero_event_ < 0) return 0.0;
    return events_[static_cast<std::size_t>(zero_event_)].gamma.evaluate(n);
}

std::vector<Transition> Generator::offdiag_targets(const MultiIndex& n) const {
    if (n.size() != dimension()) throw DimensionError("state dimension does not match generator");
    std::vector<Transition> out;
    out.reserve(events_.size());
    for (const auto& e : events_) {
        if (e.shift.is_zero()) continue;
        MultiIndex target = n + e.shift;
        if (!target.is_nonnegative()) continue;
        const double value = e.gamma.evaluate(n);
        if (value == 0.0) continue;
        // Shifts are distinct after merging, so targets are too.
        out.push_back({target, value});
    }
    return out;
}

int Generator::max_descent(std::size_t d) const {
    int best = 0;
    for (const auto& e : events_) {
        if (e.shift.is_zero()) continue;
        long long drop = d == dimension() ? -e.shift.total() : -static_cast<long long>(e.shift[d]);
        best = std::max(best, static_cast<int>(drop));
    }
    return best;
}

WeightMap apply_generator(const Generator& g, const WeightMap& w) {
    WeightMap out;
    out.reserve(w.size() * (g.events().size() + 1));
    for (const auto& [n, weight] : w) {
        const double d = g.diag_element(n);
        if (d != 0.0) out.add(n, d * weight);
        for (const auto& t : g.offdiag_targets(n)) out.add(t.target, t.value * weight);
    }
    out.drop_zeros();
    return out;
}

std::string format_event_table(const Generator& g) {
    std::vector<std::string> gammas;
    std::size_t width = 12;
    for (const auto& e : g.events()) {
        gammas.push_back(e.gamma.to_string("n"));
        width = std::max(width, gammas.back().size());
    }
    std::string out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-4s  ", "No.");
    out += buf;
    out += "gamma_r(n)";
    out += std::string(width - 10, ' ');
    out += "  v_r\n";
    for (std::size_t r = 0; r < g.events().size(); ++r) {
        std::snprintf(buf, sizeof buf, "%-4zu  ", r + 1);
        out += buf;
        out += gammas[r];
        out += std::string(width - gammas[r].size(), ' ');
        out += "  " + g.events()[r].shift.to_string() + "\n";
    }
    return out;
}

}  // namespace bkm
