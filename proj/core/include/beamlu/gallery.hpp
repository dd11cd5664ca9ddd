#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "beamlu/blocking.hpp"
#include "beamlu/matrix.hpp"

namespace beamlu {

enum class MatrixFamily {
    zielke,
    turing_t,
    tridiag_ttt,
    diagdom_rows,
    diagdom_cols,
    diagdom_both,
    block_diagdom_cols,
    spd,
    inverse_block_diagdom_rows,
    random_cond,
    leading_swap,
};

const char* to_string(MatrixFamily f);

/// A named generator plus its parameters; `generate` is deterministic for a
/// fixed spec.
struct MatrixSpec {
    MatrixFamily family;
    std::size_t n = 0;
    double delta = 0.0;       // dominance margin (pointwise delta or block Delta)
    double cond_target = 0.0; // spd / random_cond
    std::uint64_t seed = 0;
    std::optional<BlockingScheme> blocking; // block families

    static MatrixSpec zielke(std::size_t n);
    static MatrixSpec turing_t(std::size_t n);
    static MatrixSpec tridiag_ttt(std::size_t n);
    static MatrixSpec diagdom_rows(std::size_t n, double delta, std::uint64_t seed);
    static MatrixSpec diagdom_cols(std::size_t n, double delta, std::uint64_t seed);
    static MatrixSpec diagdom_both(std::size_t n, double delta, std::uint64_t seed);
    static MatrixSpec block_diagdom_cols(std::size_t n, BlockingScheme blocking, double delta,
                                         std::uint64_t seed);
    static MatrixSpec spd(std::size_t n, double cond_target, std::uint64_t seed);
    static MatrixSpec inverse_block_diagdom_rows(std::size_t n, BlockingScheme blocking,
                                                 double delta, std::uint64_t seed);
    static MatrixSpec random_cond(std::size_t n, double cond_target, std::uint64_t seed);
    static MatrixSpec leading_swap(std::size_t n);

    std::string to_string() const;
};

Matrix generate(const MatrixSpec& spec);

/// Random orthogonal matrix: QR of a Gaussian matrix with the R diagonal sign
/// fixed positive. Exposed because generators and tests both need it.
Matrix random_orthogonal(std::size_t n, std::uint64_t seed);

} // namespace beamlu
