#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "beamlu/matrix.hpp"

namespace beamlu {

/// Partition of 1..n into contiguous blocks, stored as the 1-based list of
/// block start indices with n+1 appended as past-the-end marker.
/// Example: n=4, starts [1,3,5] describes two 2x2 blocks.
class BlockingScheme {
public:
    /// Validates: strictly increasing, first element 1, last element n+1.
    BlockingScheme(std::vector<std::size_t> starts, std::size_t n);

    static BlockingScheme uniform(std::size_t n, std::size_t block_size);
    static BlockingScheme single(std::size_t n);
    static BlockingScheme scalar(std::size_t n); // all blocks size 1

    std::size_t dim() const { return n_; }
    std::size_t num_blocks() const { return starts_.size() - 1; }

    /// 0-based element offset of block k (k in [0, num_blocks)).
    std::size_t offset(std::size_t k) const { return starts_[k] - 1; }
    std::size_t block_size(std::size_t k) const { return starts_[k + 1] - starts_[k]; }
    std::size_t max_block_size() const;
    std::size_t min_block_size() const;

    const std::vector<std::size_t>& starts() const { return starts_; }

    /// True when every start of *this also occurs in `finer` (so *this is a
    /// coarsening of `finer` on the same dimension).
    bool coarsens(const BlockingScheme& finer) const;

    /// Blocking for the trailing matrix that starts at block k, re-based to 1.
    BlockingScheme tail(std::size_t k) const;

    std::string to_string() const;

    friend bool operator==(const BlockingScheme& a, const BlockingScheme& b) {
        return a.n_ == b.n_ && a.starts_ == b.starts_;
    }

private:
    std::vector<std::size_t> starts_;
    std::size_t n_;
};

/// Copy of block (bi, bj), 0-based block indices.
Matrix block_view(const Matrix& a, const BlockingScheme& blocking, std::size_t bi,
                  std::size_t bj);

/// Copy of the block rectangle [bi0, bi1) x [bj0, bj1).
Matrix block_range_view(const Matrix& a, const BlockingScheme& blocking, std::size_t bi0,
                        std::size_t bi1, std::size_t bj0, std::size_t bj1);

} // namespace beamlu
