#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "beamlu/blocking.hpp"
#include "beamlu/matrix.hpp"

namespace beamlu {

/// A member of the dimension-invariant norm families used throughout:
/// elementwise max, 1- and inf-operator norms, Frobenius, spectral, the
/// elementwise 1-norm ("sum"), plus the block-max and block-sum norms that
/// take an inner norm over every block of a partitioned matrix.
class NormKind {
public:
    enum class Tag { max, one, inf, frobenius, spectral, sum, block_max, block_sum };

    static NormKind max() { return NormKind(Tag::max); }
    static NormKind one() { return NormKind(Tag::one); }
    static NormKind inf() { return NormKind(Tag::inf); }
    static NormKind frobenius() { return NormKind(Tag::frobenius); }
    static NormKind spectral() { return NormKind(Tag::spectral); }
    static NormKind sum() { return NormKind(Tag::sum); }

    /// Square partitioning: the same blocking on rows and columns.
    static NormKind block_max(const NormKind& inner, const BlockingScheme& blocking) {
        return block_max(inner, blocking, blocking);
    }
    static NormKind block_sum(const NormKind& inner, const BlockingScheme& blocking) {
        return block_sum(inner, blocking, blocking);
    }
    static NormKind block_max(const NormKind& inner, const BlockingScheme& rows,
                              const BlockingScheme& cols);
    static NormKind block_sum(const NormKind& inner, const BlockingScheme& rows,
                              const BlockingScheme& cols);

    Tag tag() const { return tag_; }
    bool is_block() const { return tag_ == Tag::block_max || tag_ == Tag::block_sum; }
    const NormKind& inner() const;
    const BlockingScheme& row_blocking() const;
    const BlockingScheme& col_blocking() const;

    /// Same kind rebound to another partitioning (used for Schur-complement
    /// tails, whose dimension shrinks step by step).
    NormKind with_blocking(const BlockingScheme& rows, const BlockingScheme& cols) const;

    /// Stable short name: "max", "one", "inf", "fro", "spectral", "sum",
    /// "bmax[...]", "bsum[...]". Used as the key in traces and reports.
    std::string name() const;

    friend bool operator==(const NormKind& a, const NormKind& b);

private:
    explicit NormKind(Tag t) : tag_(t) {}

    Tag tag_;
    std::shared_ptr<const NormKind> inner_;
    std::optional<BlockingScheme> row_blocking_;
    std::optional<BlockingScheme> col_blocking_;
};

/// Norm of a non-empty matrix. Block kinds require blockings matching the
/// matrix shape; mismatch throws std::invalid_argument. The spectral norm is
/// computed by a full Jacobi SVD, never estimated.
double norm(const Matrix& a, const NormKind& kind);

/// {max, one, inf, frobenius, spectral} — the default trace set.
std::vector<NormKind> default_trace_norms();

} // namespace beamlu
