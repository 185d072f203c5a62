#pragma once

#include <initializer_list>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bkmoments/multi_index.hpp"

namespace bkm {

/// Sparse coefficient vector P(n) over lattice states.
class WeightMap {
public:
    using Storage = std::unordered_map<MultiIndex, double, IntVectorHash>;

    WeightMap() = default;
    WeightMap(std::initializer_list<std::pair<const MultiIndex, double>> init);

    /// Single unit weight at `n`.
    static WeightMap unit(const MultiIndex& n) { return WeightMap{{n, 1.0}}; }

    double at(const MultiIndex& n) const {
        auto it = weights_.find(n);
        return it == weights_.end() ? 0.0 : it->second;
    }

    void add(const MultiIndex& n, double value) { weights_[n] += value; }
    void set(const MultiIndex& n, double value) { weights_[n] = value; }
    void erase(const MultiIndex& n) { weights_.erase(n); }

    /// Removes entries that are exactly 0.0.
    void drop_zeros();
    /// Removes entries with |w| < threshold (threshold <= 0 drops only exact zeros).
    void prune(double threshold);

    std::size_t size() const noexcept { return weights_.size(); }
    bool empty() const noexcept { return weights_.empty(); }
    void reserve(std::size_t n) { weights_.reserve(n); }

    auto begin() const { return weights_.begin(); }
    auto end() const { return weights_.end(); }
    const Storage& storage() const noexcept { return weights_; }

    double max_abs() const noexcept;

    WeightMap& operator*=(double s);
    /// this += s * other
    WeightMap& axpy(double s, const WeightMap& other);

    /// Entries sorted by state, for printing and deterministic comparison.
    std::vector<std::pair<MultiIndex, double>> sorted() const;

    friend bool operator==(const WeightMap& a, const WeightMap& b) { return a.weights_ == b.weights_; }

private:
    Storage weights_;
};

}  // namespace bkm
