#pragma once

#include <stdexcept>
#include <string>

namespace fibtrace {

// bad arguments: out-of-range parameters, non-finite inputs
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// a requested object cannot be built with the given constraints
struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// arithmetic broke down mid-run (overflow, NaN where none is expected)
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

}  // namespace fibtrace
