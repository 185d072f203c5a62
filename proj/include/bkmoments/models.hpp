#pragma once

#include <vector>

#include "bkmoments/generator.hpp"

namespace bkm {

/// dX = -gamma X dt + sigma dW
struct OuParams {
    double gamma = 1.0;
    double sigma = 0.5;
    double x_ini = 1.0;
};

/// dX1 = X2 dt + nu11 dW1
/// dX2 = (epsilon X2 (1 - X1^2) - X1) dt + nu22 dW2
struct VanDerPolParams {
    double epsilon = 1.0;
    double nu11 = 0.5;
    double nu22 = 0.5;
    double x_ini_1 = 0.5;
    double x_ini_2 = 1.0;
};

SdeModel build_ou(const OuParams& p);
SdeModel build_van_der_pol(const VanDerPolParams& p);

inline std::vector<double> origin_of(const OuParams& p) { return {p.x_ini}; }
inline std::vector<double> origin_of(const VanDerPolParams& p) { return {p.x_ini_1, p.x_ini_2}; }

}  // namespace bkm
