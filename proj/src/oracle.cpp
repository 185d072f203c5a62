#include "bkmoments/oracle.hpp"

#include "em_kernel.hpp"

#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <random>
#include <string>

namespace bkm {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Sparse L restricted to the cutoff box, stored by rows (incoming transitions).
struct BoxMatrix {
    std::vector<std::size_t> row_start;
    std::vector<std::size_t> col;
    std::vector<double> value;

    void multiply(const std::vector<double>& x, std::vector<double>& y) const {
        const std::size_t n = row_start.size() - 1;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k) s += value[k] * x[col[k]];
            y[i] = s;
        }
    }
};

}  // namespace

double ou_closed_form(double gamma, double sigma, double x_ini, double horizon, int order) {
    if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    if (!(horizon >= 0.0)) throw InvalidArgument("horizon must be non-negative");
    const double decay = std::exp(-gamma * horizon);
    switch (order) {
        case 1: return x_ini * decay - x_ini;
        case 2:
            return sigma * sigma / (2.0 * gamma) * (1.0 - decay * decay) + x_ini * x_ini * decay * decay -
                   2.0 * x_ini * x_ini * decay + x_ini * x_ini;
        default:
            throw InvalidArgument("closed-form OU moments exist for order 1 and 2 only, got " +
                                  std::to_string(order));
    }
}

double ode_oracle(const Generator& g, const MultiIndex& alpha, const OdeOracleConfig& cfg) {
    const std::size_t dim = g.dimension();
    if (alpha.size() != dim) throw DimensionError("alpha length does not match generator");
    if (cfg.cutoff < 1) throw InvalidArgument("cutoff must be at least 1");
    if (!(cfg.horizon >= 0.0)) throw InvalidArgument("horizon must be non-negative");
    if (!(cfg.dt > 0.0)) throw InvalidArgument("dt must be positive");
    if (cfg.dt > cfg.horizon && cfg.horizon > 0.0) throw InvalidArgument("dt must not exceed the horizon");
    const long long side = cfg.cutoff;
    for (auto a : alpha) {
        if (a < 0 || a >= side) throw InvalidArgument("alpha " + alpha.to_string() + " lies outside the cutoff box");
    }

    std::size_t states = 1;
    for (std::size_t d = 0; d < dim; ++d) states *= static_cast<std::size_t>(side);
    auto index_of = [&](const MultiIndex& n) {
        std::size_t idx = 0;
        for (std::size_t d = dim; d-- > 0;) idx = idx * static_cast<std::size_t>(side) + static_cast<std::size_t>(n[d]);
        return idx;
    };
    auto state_of = [&](std::size_t idx) {
        MultiIndex n(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            n[d] = static_cast<int>(idx % static_cast<std::size_t>(side));
            idx /= static_cast<std::size_t>(side);
        }
        return n;
    };
    auto inside = [&](const MultiIndex& n) {
        for (auto x : n) {
            if (x >= side) return false;
        }
        return true;
    };

    // Gather incoming transitions per target row.
    std::vector<std::vector<std::pair<std::size_t, double>>> rows(states);
    for (std::size_t j = 0; j < states; ++j) {
        const MultiIndex n = state_of(j);
        if (double d = g.diag_element(n); d != 0.0) rows[j].emplace_back(j, d);
        for (const auto& t : g.offdiag_targets(n)) {
            if (inside(t.target)) rows[index_of(t.target)].emplace_back(j, t.value);
        }
    }
    BoxMatrix L;
    L.row_start.push_back(0);
    for (const auto& r : rows) {
        for (const auto& [c, v] : r) {
            L.col.push_back(c);
            L.value.push_back(v);
        }
        L.row_start.push_back(L.col.size());
    }

    using State = std::vector<double>;
    State p(states, 0.0);
    p[index_of(alpha)] = 1.0;
    if (cfg.horizon == 0.0) return p[0];

    const auto steps = static_cast<long long>(std::ceil(cfg.horizon / cfg.dt - 1e-9));
    const double dt = cfg.horizon / static_cast<double>(steps);
    boost::numeric::odeint::runge_kutta4<State> rk4;
    auto rhs = [&L](const State& x, State& dxdt, double) { L.multiply(x, dxdt); };
    double t = 0.0;
    for (long long k = 0; k < steps; ++k) {
        rk4.do_step(rhs, p, t, dt);
        t = static_cast<double>(k + 1) * dt;
    }
    return p[0];
}

std::vector<double> noise_factor(const std::vector<std::vector<double>>& sigma) {
    const std::size_t n = sigma.size();
    std::vector<double> b(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = sigma[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= b[i * n + k] * b[j * n + k];
            if (i == j) {
                if (s < -1e-12 * std::max(1.0, std::abs(sigma[i][i]))) {
                    throw InvalidArgument("diffusion matrix is not positive semi-definite");
                }
                b[i * n + i] = s > 0.0 ? std::sqrt(s) : 0.0;
            } else {
                b[i * n + j] = b[j * n + j] > 0.0 ? s / b[j * n + j] : 0.0;
            }
        }
    }
    return b;
}

McEstimate mc_oracle(const SdeModel& model, std::span<const double> x_ini, const MultiIndex& alpha, double horizon,
                     const McOracleConfig& cfg) {
    return detail::mc_oracle_with(detail::detect_kernel_isa(), model, x_ini, alpha, horizon, cfg);
}

namespace detail {

McEstimate mc_oracle_with(KernelIsa isa, const SdeModel& model, std::span<const double> x_ini, const MultiIndex& alpha,
                          double horizon, const McOracleConfig& cfg) {
    model.validate();
    const std::size_t dim = model.dimension;
    if (x_ini.size() != dim || alpha.size() != dim) throw DimensionError("x_ini/alpha length does not match model");
    if (!alpha.is_nonnegative()) throw InvalidArgument("alpha entries must be non-negative");
    if (cfg.paths < 1) throw InvalidArgument("Monte Carlo needs at least one path");
    if (!(cfg.dt > 0.0)) throw InvalidArgument("dt must be positive");
    if (!(horizon >= 0.0)) throw InvalidArgument("horizon must be non-negative");

    std::vector<std::vector<double>> sigma(dim, std::vector<double>(dim));
    const MultiIndex zero = MultiIndex::zeros(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            const auto& p = model.diffusion[i][j];
            if (!p.is_constant()) {
                throw InvalidArgument("Monte Carlo oracle supports constant diffusion only");
            }
            sigma[i][j] = p.coefficient(zero);
        }
    }
    const std::vector<double> b = noise_factor(sigma);
    std::vector<FlatPolynomial> drift;
    for (const auto& a : model.drift) drift.emplace_back(a);

    const auto steps = horizon == 0.0 ? 0LL : static_cast<long long>(std::ceil(horizon / cfg.dt - 1e-9));
    const double dt = steps ? horizon / static_cast<double>(steps) : 0.0;

    EmBlock block;
    block.dim = dim;
    block.drift = drift.data();
    block.noise = b.data();
    block.dt = dt;
    block.sqrt_dt = std::sqrt(dt);

    constexpr std::size_t B = kPathBlock;
    std::vector<double> x(dim * B), z(dim * B), scratch(2 * dim * B);
    std::vector<std::mt19937_64> engines(B);
    boost::random::normal_distribution<double> normal;
    const std::uint64_t base = splitmix64(cfg.seed);

    double mean = 0.0;
    double m2 = 0.0;
    for (std::uint64_t first = 0; first < cfg.paths; first += B) {
        const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(B, cfg.paths - first));
        block.paths = n;
        for (std::size_t p = 0; p < n; ++p) {
            engines[p].seed(splitmix64(base ^ (first + p)));
            for (std::size_t d = 0; d < dim; ++d) x[d * B + p] = x_ini[d];
        }
        for (long long k = 0; k < steps; ++k) {
            for (std::size_t p = 0; p < n; ++p) {
                for (std::size_t d = 0; d < dim; ++d) z[d * B + p] = normal(engines[p]);
            }
            em_step(isa, block, x.data(), z.data(), scratch.data());
        }
        for (std::size_t p = 0; p < n; ++p) {
            double value = 1.0;
            for (std::size_t d = 0; d < dim; ++d) {
                for (int k = 0; k < alpha[d]; ++k) value *= x[d * B + p] - x_ini[d];
            }
            // Welford update, in path order.
            const double delta = value - mean;
            mean += delta / static_cast<double>(first + p + 1);
            m2 += delta * (value - mean);
        }
    }
    McEstimate est;
    est.mean = mean;
    if (cfg.paths > 1) {
        const double var = m2 / static_cast<double>(cfg.paths - 1);
        est.std_error = std::sqrt(var / static_cast<double>(cfg.paths));
    }
    return est;
}

}  // namespace detail
}  // namespace bkm
