#pragma once

#include <map>
#include <memory>
#include <vector>

#include "qrsim/configuration.hpp"

namespace qrsim {

// Ordered list of configurations with a bijective index map. Always sorted in
// the configuration order so matrices and dumps are reproducible.
class BasisEnumeration {
public:
    BasisEnumeration() = default;
    explicit BasisEnumeration(std::vector<Configuration> configs); // sorts, rejects duplicates

    int size() const { return static_cast<int>(configs_.size()); }
    const Configuration& at(int index) const;
    int index_of(const Configuration& c) const; // -1 when absent
    bool contains(const Configuration& c) const { return index_of(c) >= 0; }
    const std::vector<Configuration>& configurations() const { return configs_; }

private:
    std::vector<Configuration> configs_;
    std::map<Configuration, int> index_;
};

using BasisPtr = std::shared_ptr<const BasisEnumeration>;

} // namespace qrsim
