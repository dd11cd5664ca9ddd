#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "beamlu/matrix.hpp"

namespace beamlu {

class mm_parse_error : public std::runtime_error {
public:
    mm_parse_error(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Matrix Market reader: array and coordinate formats, real or integer
/// fields, general or symmetric storage (symmetric is expanded to full).
Matrix read_matrix_market(const std::string& path);

/// Writes dense array format, real general, 17 significant digits so values
/// round-trip bit-exactly.
void write_matrix_market(const std::string& path, const Matrix& a);

} // namespace beamlu
