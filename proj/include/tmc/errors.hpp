#pragma once

#include <stdexcept>
#include <string>

namespace tmc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BoundsError : Error { using Error::Error; };
struct ArgumentError : Error { using Error::Error; };
struct LookupError : Error { using Error::Error; };
// malformed input documents; message carries the JSON path
struct InputError : Error { using Error::Error; };
struct GeometryError : Error { using Error::Error; };
struct BudgetError : Error { using Error::Error; };
struct UnsupportedError : Error { using Error::Error; };
struct ExtractionError : Error { using Error::Error; };
struct InvariantError : Error { using Error::Error; };

} // namespace tmc
