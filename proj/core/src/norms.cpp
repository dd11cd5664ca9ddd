#include "beamlu/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "beamlu/svd.hpp"

namespace beamlu {

NormKind NormKind::block_max(const NormKind& inner, const BlockingScheme& rows,
                             const BlockingScheme& cols) {
    if (inner.is_block())
        throw std::invalid_argument("block norm: inner norm must not itself be a block norm");
    NormKind k(Tag::block_max);
    k.inner_ = std::make_shared<NormKind>(inner);
    k.row_blocking_ = rows;
    k.col_blocking_ = cols;
    return k;
}

NormKind NormKind::block_sum(const NormKind& inner, const BlockingScheme& rows,
                             const BlockingScheme& cols) {
    NormKind k = block_max(inner, rows, cols);
    k.tag_ = Tag::block_sum;
    return k;
}

const NormKind& NormKind::inner() const {
    if (!is_block()) throw std::invalid_argument("inner(): not a block norm");
    return *inner_;
}

const BlockingScheme& NormKind::row_blocking() const {
    if (!is_block()) throw std::invalid_argument("row_blocking(): not a block norm");
    return *row_blocking_;
}

const BlockingScheme& NormKind::col_blocking() const {
    if (!is_block()) throw std::invalid_argument("col_blocking(): not a block norm");
    return *col_blocking_;
}

NormKind NormKind::with_blocking(const BlockingScheme& rows, const BlockingScheme& cols) const {
    if (!is_block()) return *this;
    return tag_ == Tag::block_max ? block_max(*inner_, rows, cols)
                                  : block_sum(*inner_, rows, cols);
}

std::string NormKind::name() const {
    switch (tag_) {
        case Tag::max: return "max";
        case Tag::one: return "one";
        case Tag::inf: return "inf";
        case Tag::frobenius: return "fro";
        case Tag::spectral: return "spectral";
        case Tag::sum: return "sum";
        case Tag::block_max: return "bmax[" + inner_->name() + "]";
        case Tag::block_sum: return "bsum[" + inner_->name() + "]";
    }
    return "?";
}

bool operator==(const NormKind& a, const NormKind& b) {
    if (a.tag_ != b.tag_) return false;
    if (!a.is_block()) return true;
    return *a.inner_ == *b.inner_ && *a.row_blocking_ == *b.row_blocking_ &&
           *a.col_blocking_ == *b.col_blocking_;
}

namespace {

double scalar_norm(const Matrix& a, NormKind::Tag tag) {
    switch (tag) {
        case NormKind::Tag::max: {
            double m = 0.0;
            for (std::size_t i = 0; i < a.rows(); ++i)
                for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::fabs(a(i, j)));
            return m;
        }
        case NormKind::Tag::one: {
            double m = 0.0;
            for (std::size_t j = 0; j < a.cols(); ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < a.rows(); ++i) s += std::fabs(a(i, j));
                m = std::max(m, s);
            }
            return m;
        }
        case NormKind::Tag::inf: {
            double m = 0.0;
            for (std::size_t i = 0; i < a.rows(); ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < a.cols(); ++j) s += std::fabs(a(i, j));
                m = std::max(m, s);
            }
            return m;
        }
        case NormKind::Tag::frobenius: {
            double s = 0.0;
            for (std::size_t i = 0; i < a.rows(); ++i)
                for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
            return std::sqrt(s);
        }
        case NormKind::Tag::spectral:
            return sigma_max(a);
        case NormKind::Tag::sum: {
            double s = 0.0;
            for (std::size_t i = 0; i < a.rows(); ++i)
                for (std::size_t j = 0; j < a.cols(); ++j) s += std::fabs(a(i, j));
            return s;
        }
        default:
            throw std::invalid_argument("scalar_norm: block tag");
    }
}

} // namespace

double norm(const Matrix& a, const NormKind& kind) {
    if (a.empty()) throw std::invalid_argument("norm: empty matrix");
    if (!kind.is_block()) return scalar_norm(a, kind.tag());

    const BlockingScheme& rb = kind.row_blocking();
    const BlockingScheme& cb = kind.col_blocking();
    if (rb.dim() != a.rows() || cb.dim() != a.cols())
        throw std::invalid_argument("norm: blocking inconsistent with matrix shape");

    const bool take_max = kind.tag() == NormKind::Tag::block_max;
    double acc = 0.0;
    for (std::size_t bi = 0; bi < rb.num_blocks(); ++bi) {
        for (std::size_t bj = 0; bj < cb.num_blocks(); ++bj) {
            Matrix blk = submatrix(a, rb.offset(bi), rb.offset(bi) + rb.block_size(bi),
                                   cb.offset(bj), cb.offset(bj) + cb.block_size(bj));
            const double v = scalar_norm(blk, kind.inner().tag());
            acc = take_max ? std::max(acc, v) : acc + v;
        }
    }
    return acc;
}

std::vector<NormKind> default_trace_norms() {
    return {NormKind::max(), NormKind::one(), NormKind::inf(), NormKind::frobenius(),
            NormKind::spectral()};
}

} // namespace beamlu
