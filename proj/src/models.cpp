#include "bkmoments/models.hpp"

#include <string>

namespace bkm {
namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0)) throw InvalidArgument(std::string(name) + " must be positive");
}

}  // namespace

SdeModel build_ou(const OuParams& p) {
    require_positive(p.gamma, "gamma");
    require_positive(p.sigma, "sigma");
    SdeModel m;
    m.dimension = 1;
    m.drift = {Polynomial::variable(1, 0, -p.gamma)};
    m.diffusion = {{Polynomial::constant(1, p.sigma * p.sigma)}};
    return m;
}

SdeModel build_van_der_pol(const VanDerPolParams& p) {
    require_positive(p.epsilon, "epsilon");
    require_positive(p.nu11, "nu11");
    require_positive(p.nu22, "nu22");
    const auto x1 = Polynomial::variable(2, 0);
    const auto x2 = Polynomial::variable(2, 1);
    const auto one = Polynomial::constant(2, 1.0);
    SdeModel m;
    m.dimension = 2;
    m.drift = {x2, p.epsilon * (x2 * (one - x1 * x1)) - x1};
    m.diffusion = {{Polynomial::constant(2, p.nu11 * p.nu11), Polynomial(2)},
                   {Polynomial(2), Polynomial::constant(2, p.nu22 * p.nu22)}};
    return m;
}

}  // namespace bkm
