#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "bkmoments/error.hpp"

namespace bkm {

/// Largest supported state-space dimension.
inline constexpr std::size_t kMaxDim = 6;

/// Fixed-capacity integer vector used for lattice states, moment orders,
/// monomial exponents and (signed) event shift vectors.
///
/// Unused trailing slots are always zero so that equality, ordering and
/// hashing can look at the whole buffer.
class IntVector {
public:
    using value_type = std::int32_t;

    IntVector() = default;

    explicit IntVector(std::size_t dim) : size_(check_dim(dim)) {}

    IntVector(std::initializer_list<value_type> values)
        : size_(check_dim(values.size())) {
        std::copy(values.begin(), values.end(), data_.begin());
    }

    explicit IntVector(std::span<const value_type> values)
        : size_(check_dim(values.size())) {
        std::copy(values.begin(), values.end(), data_.begin());
    }

    static IntVector zeros(std::size_t dim) { return IntVector(dim); }

    static IntVector unit(std::size_t dim, std::size_t axis) {
        IntVector v(dim);
        v[axis] = 1;
        return v;
    }

    std::size_t size() const noexcept { return size_; }

    value_type operator[](std::size_t i) const noexcept { return data_[i]; }
    value_type& operator[](std::size_t i) noexcept { return data_[i]; }

    const value_type* begin() const noexcept { return data_.data(); }
    const value_type* end() const noexcept { return data_.data() + size_; }

    bool is_zero() const noexcept {
        return std::all_of(begin(), end(), [](value_type x) { return x == 0; });
    }

    bool is_nonnegative() const noexcept {
        return std::all_of(begin(), end(), [](value_type x) { return x >= 0; });
    }

    /// Sum of entries (total degree for exponents).
    long long total() const noexcept {
        long long s = 0;
        for (auto x : *this) s += x;
        return s;
    }

    IntVector& operator+=(const IntVector& o) {
        require_same_size(o);
        for (std::size_t i = 0; i < size_; ++i) data_[i] += o.data_[i];
        return *this;
    }

    IntVector& operator-=(const IntVector& o) {
        require_same_size(o);
        for (std::size_t i = 0; i < size_; ++i) data_[i] -= o.data_[i];
        return *this;
    }

    friend IntVector operator+(IntVector a, const IntVector& b) { return a += b; }
    friend IntVector operator-(IntVector a, const IntVector& b) { return a -= b; }

    friend bool operator==(const IntVector& a, const IntVector& b) noexcept {
        return a.size_ == b.size_ && a.data_ == b.data_;
    }

    /// Lexicographic order over entries; shorter vectors sort first.
    friend std::strong_ordering operator<=>(const IntVector& a, const IntVector& b) noexcept {
        if (auto c = a.size_ <=> b.size_; c != 0) return c;
        return a.data_ <=> b.data_;
    }

    std::size_t hash() const noexcept {
        // FNV-1a over the live entries.
        std::uint64_t h = 1469598103934665603ull;
        for (auto x : *this) {
            h ^= static_cast<std::uint32_t>(x);
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h ^ (h >> 29));
    }

    std::vector<value_type> to_vector() const { return {begin(), end()}; }

    /// "[a,b,c]"
    std::string to_string() const;

private:
    static std::uint8_t check_dim(std::size_t dim) {
        if (dim > kMaxDim) {
            throw DimensionError("dimension " + std::to_string(dim) + " exceeds supported maximum " +
                                 std::to_string(kMaxDim));
        }
        return static_cast<std::uint8_t>(dim);
    }

    void require_same_size(const IntVector& o) const {
        if (o.size_ != size_) throw DimensionError("integer vector length mismatch");
    }

    std::array<value_type, kMaxDim> data_{};
    std::uint8_t size_ = 0;
};

/// Lattice state n, moment order alpha, or monomial exponent; entries >= 0.
using MultiIndex = IntVector;
/// Signed state-change vector of an event.
using Shift = IntVector;

/// Builds a MultiIndex, rejecting negative entries.
MultiIndex make_multi_index(std::span<const int> entries);

struct IntVectorHash {
    std::size_t operator()(const IntVector& v) const noexcept { return v.hash(); }
};

}  // namespace bkm

template <>
struct std::hash<bkm::IntVector> {
    std::size_t operator()(const bkm::IntVector& v) const noexcept { return v.hash(); }
};
