#pragma once

#include <stdexcept>
#include <string>

namespace telsim {

// Shape/target mismatches and out-of-range basis levels.
struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// Domain-value violations (ordering, normalization, malformed input).
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Broken caller contracts (non-projector passed to project, support
// violations, applying a deterministic-failure plan).
struct ContractError : std::logic_error {
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace telsim
