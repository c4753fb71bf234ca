#pragma once

#include <stdexcept>
#include <string>

namespace mobiuse {

// Malformed input files, bad checkpoints, dataset/model mismatches.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite values produced during optimization.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mobiuse
