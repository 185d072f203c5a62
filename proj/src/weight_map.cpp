#include "bkmoments/weight_map.hpp"

#include <algorithm>
#include <cmath>

namespace bkm {

WeightMap::WeightMap(std::initializer_list<std::pair<const MultiIndex, double>> init) {
    for (const auto& [n, w] : init) add(n, w);
    drop_zeros();
}

void WeightMap::drop_zeros() {
    std::erase_if(weights_, [](const auto& kv) { return kv.second == 0.0; });
}

void WeightMap::prune(double threshold) {
    if (threshold <= 0.0) {
        drop_zeros();
        return;
    }
    std::erase_if(weights_, [threshold](const auto& kv) { return std::abs(kv.second) < threshold; });
}

double WeightMap::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& [n, w] : weights_) {
        // NaN must trip the divergence guard, so propagate it.
        if (std::isnan(w)) return w;
        m = std::max(m, std::abs(w));
    }
    return m;
}

WeightMap& WeightMap::operator*=(double s) {
    for (auto& [n, w] : weights_) w *= s;
    drop_zeros();
    return *this;
}

WeightMap& WeightMap::axpy(double s, const WeightMap& other) {
    for (const auto& [n, w] : other.weights_) weights_[n] += s * w;
    drop_zeros();
    return *this;
}

std::vector<std::pair<MultiIndex, double>> WeightMap::sorted() const {
    std::vector<std::pair<MultiIndex, double>> out(weights_.begin(), weights_.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

}  // namespace bkm
