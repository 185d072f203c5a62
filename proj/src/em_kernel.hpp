#pragma once

// Blocked Euler-Maruyama update used by the Monte Carlo oracle.
//
// Paths are processed in blocks stored structure-of-arrays: coordinate d of
// path p lives at x[d * kPathBlock + p]. The scalar and AVX2 kernels share
// one source body and never contract a*b+c into FMA, so they produce
// bit-identical results.

#include <cstddef>
#include <span>
#include <vector>

#include "bkmoments/oracle.hpp"
#include "bkmoments/polynomial.hpp"

namespace bkm::detail {

inline constexpr std::size_t kPathBlock = 64;

/// Monomial list flattened for the block kernel.
struct FlatPolynomial {
    std::vector<double> coeffs;
    std::vector<int> exponents;  // terms x dim, row-major
    std::size_t dim = 0;

    FlatPolynomial() = default;
    explicit FlatPolynomial(const Polynomial& p);
};

struct EmBlock {
    std::size_t dim = 0;
    std::size_t paths = 0;                   ///< live paths in the block, <= kPathBlock
    const FlatPolynomial* drift = nullptr;   ///< dim polynomials
    const double* noise = nullptr;           ///< lower-triangular B, dim x dim row-major
    double dt = 0.0;
    double sqrt_dt = 0.0;
};

enum class KernelIsa { Scalar, Avx2 };

/// Widest kernel the running CPU supports.
KernelIsa detect_kernel_isa();
const char* kernel_isa_name(KernelIsa isa);

/// One Euler-Maruyama step for every path of the block:
/// x += a(x) dt + B z sqrt(dt). `z` holds standard normals in the same
/// layout as `x`; `scratch` needs 2 * dim * kPathBlock doubles.
void em_step(KernelIsa isa, const EmBlock& block, double* x, const double* z, double* scratch);

/// mc_oracle with an explicit kernel choice; every choice returns the same bits.
McEstimate mc_oracle_with(KernelIsa isa, const SdeModel& model, std::span<const double> x_ini, const MultiIndex& alpha,
                          double horizon, const McOracleConfig& cfg);

}  // namespace bkm::detail
