#include "qrsim/basis.hpp"

#include <algorithm>
#include <stdexcept>

namespace qrsim {

BasisEnumeration::BasisEnumeration(std::vector<Configuration> configs) : configs_(std::move(configs)) {
    std::sort(configs_.begin(), configs_.end());
    for (std::size_t i = 0; i < configs_.size(); ++i) {
        auto [it, inserted] = index_.emplace(configs_[i], static_cast<int>(i));
        if (!inserted) {
            throw std::invalid_argument("duplicate configuration in basis: " +
                                        format_configuration(configs_[i]));
        }
    }
}

const Configuration& BasisEnumeration::at(int index) const {
    if (index < 0 || index >= size()) {
        throw std::out_of_range("basis index " + std::to_string(index) + " out of range");
    }
    return configs_[static_cast<std::size_t>(index)];
}

int BasisEnumeration::index_of(const Configuration& c) const {
    auto it = index_.find(c);
    return it == index_.end() ? -1 : it->second;
}

} // namespace qrsim
