#pragma once

#include <stdexcept>

namespace combnet {

// Invalid parameters or violated preconditions (CLI exit code 2).
struct SpecError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Violated internal invariant, failed cross-check or failed reconstruction
// (CLI exit code 1). Never an accepted outcome.
struct CheckError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// mds_decode called with fewer than k distinct blocks.
struct InsufficientBlocks : SpecError {
    using SpecError::SpecError;
};

}  // namespace combnet
