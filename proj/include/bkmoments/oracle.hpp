#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bkmoments/generator.hpp"
#include "bkmoments/multi_index.hpp"

namespace bkm {

/// Shifted OU moment E[(X_T - x_ini)^order | X_0 = x_ini] for order 1 or 2.
double ou_closed_form(double gamma, double sigma, double x_ini, double horizon, int order);

struct OdeOracleConfig {
    int cutoff = 15;       ///< keep states with every n_d < cutoff
    double dt = 1e-6;      ///< RK4 step (shortened so that T is hit exactly)
    double horizon = 0.1;  ///< T
};

/// Integrates dP/dt = L P on the cutoff box with classical RK4 from
/// P = indicator(alpha) and returns P(0, T). Flow out of the box is lost.
double ode_oracle(const Generator& g, const MultiIndex& alpha, const OdeOracleConfig& cfg);

struct McOracleConfig {
    std::uint64_t paths = 1'000'000;
    double dt = 1e-3;
    std::uint64_t seed = 7;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Euler-Maruyama estimate of E[prod_d (X_d(T) - x_ini_d)^alpha_d].
///
/// Only constant diffusion matrices are supported; the noise matrix B is
/// the Cholesky factor of [B B^T]. Every path owns a std::mt19937_64 seeded
/// from SplitMix64(seed, path index), so results depend only on `seed`.
/// Paths advance in blocks of 64 through a vectorised kernel (AVX2 when the
/// CPU has it); the kernel choice does not change the result.
McEstimate mc_oracle(const SdeModel& model, std::span<const double> x_ini, const MultiIndex& alpha, double horizon,
                     const McOracleConfig& cfg);

/// Lower-triangular B with B B^T = sigma (row-major, D x D). Throws when
/// sigma is not positive semi-definite.
std::vector<double> noise_factor(const std::vector<std::vector<double>>& sigma);

}  // namespace bkm
