#include "bkmoments/multi_index.hpp"

namespace bkm {

std::string IntVector::to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < size_; ++i) {
        if (i) out += ',';
        out += std::to_string(data_[i]);
    }
    out += ']';
    return out;
}

MultiIndex make_multi_index(std::span<const int> entries) {
    MultiIndex m(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i] < 0) {
            throw InvalidArgument("multi-index entries must be non-negative, got " +
                                  std::to_string(entries[i]));
        }
        m[i] = entries[i];
    }
    return m;
}

}  // namespace bkm
