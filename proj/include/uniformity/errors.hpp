#pragma once

#include <stdexcept>
#include <string>

namespace unif {

// Error taxonomy mirrored by CLI exit codes: SpecError -> 2,
// ValidityError -> 3, ResourceError -> 4.
struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace unif
