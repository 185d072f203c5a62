#include "bkmoments/extrapolation.hpp"

#include <string>

#include "bkmoments/error.hpp"

namespace bkm {
namespace {

void check(const EstimatePair& p) {
    if (p.M1 < 1 || p.M2 < 1) throw InvalidArgument("step counts must be positive");
    if (p.M1 == p.M2) throw InvalidArgument("extrapolation needs two different step counts");
}

}  // namespace

double extrapolate1(const EstimatePair& p) {
    check(p);
    const double M1 = p.M1;
    const double M2 = p.M2;
    return p.m2 - M1 * (p.m1 - p.m2) / (M2 - M1);
}

double extrapolate2(const EstimatePair& p) {
    check(p);
    const double M1 = p.M1;
    const double M2 = p.M2;
    return p.m2 - M1 * M1 * (p.m1 - p.m2) / (M2 * M2 - M1 * M1);
}

double extrapolate(const EstimatePair& pair, int order) {
    switch (order) {
        case 1: return extrapolate1(pair);
        case 2: return extrapolate2(pair);
        default: throw InvalidArgument("extrapolation order must be 1 or 2, got " + std::to_string(order));
    }
}

}  // namespace bkm
