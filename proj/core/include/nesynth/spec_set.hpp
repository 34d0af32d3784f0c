#pragma once

#include <cstddef>
#include <vector>

namespace nesynth {

struct SpecPair {
    std::vector<double> input;
    double output = 0.0;
};

/// Input/output examples the induced program must reproduce.
struct SpecSet {
    std::size_t arity = 0;
    std::vector<SpecPair> pairs;

    std::size_t size() const noexcept { return pairs.size(); }
};

} // namespace nesynth
