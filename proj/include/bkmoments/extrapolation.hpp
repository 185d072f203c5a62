#pragma once

namespace bkm {

/// Two estimates of the same statistic computed with step counts M1 and M2.
struct EstimatePair {
    double m1 = 0.0;
    double m2 = 0.0;
    int M1 = 0;
    int M2 = 0;
};

/// Limit estimate assuming error = C/M:  m2 - M1 (m1 - m2) / (M2 - M1).
double extrapolate1(const EstimatePair& pair);

/// Limit estimate assuming error = C/M^2:  m2 - M1^2 (m1 - m2) / (M2^2 - M1^2).
double extrapolate2(const EstimatePair& pair);

/// Dispatches on order (1 or 2).
double extrapolate(const EstimatePair& pair, int order);

}  // namespace bkm
