#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace beamlu {

/// A computation failed numerically (singular pivot, non-convergence, ...).
/// `index()` identifies the failing pivot, block, or sweep count depending
/// on the throwing operation.
class numerical_error : public std::runtime_error {
public:
    numerical_error(const std::string& what, std::size_t index)
        : std::runtime_error(what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Block LU breakdown: a blocking-aligned diagonal block was singular to
/// working precision at elimination step `block_index()` (0-based).
class block_singular_error : public numerical_error {
public:
    block_singular_error(const std::string& what, std::size_t block_index)
        : numerical_error(what, block_index) {}

    std::size_t block_index() const noexcept { return index(); }
};

} // namespace beamlu
