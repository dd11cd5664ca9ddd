#include "beamlu/blocking.hpp"

#include <algorithm>
#include <stdexcept>

namespace beamlu {

BlockingScheme::BlockingScheme(std::vector<std::size_t> starts, std::size_t n)
    : starts_(std::move(starts)), n_(n) {
    if (starts_.size() < 2) throw std::invalid_argument("blocking: needs at least one block");
    if (starts_.front() != 1) throw std::invalid_argument("blocking: first start must be 1");
    if (starts_.back() != n_ + 1)
        throw std::invalid_argument("blocking: last entry must be n+1");
    for (std::size_t i = 1; i < starts_.size(); ++i)
        if (starts_[i] <= starts_[i - 1])
            throw std::invalid_argument("blocking: starts must be strictly increasing");
}

BlockingScheme BlockingScheme::uniform(std::size_t n, std::size_t block_size) {
    if (n == 0 || block_size == 0) throw std::invalid_argument("blocking: empty");
    std::vector<std::size_t> s;
    for (std::size_t p = 1; p <= n; p += block_size) s.push_back(p);
    s.push_back(n + 1);
    return BlockingScheme(std::move(s), n);
}

BlockingScheme BlockingScheme::single(std::size_t n) {
    return BlockingScheme({1, n + 1}, n);
}

BlockingScheme BlockingScheme::scalar(std::size_t n) {
    return uniform(n, 1);
}

std::size_t BlockingScheme::max_block_size() const {
    std::size_t m = 0;
    for (std::size_t k = 0; k < num_blocks(); ++k) m = std::max(m, block_size(k));
    return m;
}

std::size_t BlockingScheme::min_block_size() const {
    std::size_t m = n_;
    for (std::size_t k = 0; k < num_blocks(); ++k) m = std::min(m, block_size(k));
    return m;
}

bool BlockingScheme::coarsens(const BlockingScheme& finer) const {
    if (n_ != finer.n_) return false;
    return std::includes(finer.starts_.begin(), finer.starts_.end(),
                         starts_.begin(), starts_.end());
}

BlockingScheme BlockingScheme::tail(std::size_t k) const {
    if (k >= num_blocks()) throw std::invalid_argument("blocking: tail index out of range");
    std::vector<std::size_t> s;
    const std::size_t shift = starts_[k] - 1;
    for (std::size_t i = k; i < starts_.size(); ++i) s.push_back(starts_[i] - shift);
    return BlockingScheme(std::move(s), n_ - shift);
}

Matrix block_view(const Matrix& a, const BlockingScheme& blocking, std::size_t bi,
                  std::size_t bj) {
    return block_range_view(a, blocking, bi, bi + 1, bj, bj + 1);
}

Matrix block_range_view(const Matrix& a, const BlockingScheme& blocking, std::size_t bi0,
                        std::size_t bi1, std::size_t bj0, std::size_t bj1) {
    const std::size_t nt = blocking.num_blocks();
    if (bi0 >= bi1 || bj0 >= bj1 || bi1 > nt || bj1 > nt)
        throw std::invalid_argument("block_view: block range out of bounds");
    if (a.rows() != blocking.dim() || a.cols() != blocking.dim())
        throw std::invalid_argument("block_view: blocking inconsistent with matrix");
    const std::size_t r0 = blocking.offset(bi0);
    const std::size_t r1 = blocking.offset(bi1 - 1) + blocking.block_size(bi1 - 1);
    const std::size_t c0 = blocking.offset(bj0);
    const std::size_t c1 = blocking.offset(bj1 - 1) + blocking.block_size(bj1 - 1);
    return submatrix(a, r0, r1, c0, c1);
}

std::string BlockingScheme::to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < starts_.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(starts_[i]);
    }
    out += "]";
    return out;
}

} // namespace beamlu
