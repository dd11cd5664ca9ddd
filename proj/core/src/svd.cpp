#include "beamlu/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "beamlu/errors.hpp"

namespace beamlu {

namespace {

constexpr double kOffMassTol = 1e-15; // times ||A||_F^2, Gram off-diagonal mass

// The working copy is stored transposed (one row per column of A), so the
// pair dots and rotations below run on contiguous memory.
double row_dot(const Matrix& wt, std::size_t p, std::size_t q) {
    const double* rp = wt.data() + p * wt.cols();
    const double* rq = wt.data() + q * wt.cols();
    double s = 0.0;
    for (std::size_t i = 0; i < wt.cols(); ++i) s += rp[i] * rq[i];
    return s;
}

void rotate_rows(Matrix& m, std::size_t p, std::size_t q, double c, double s) {
    double* rp = m.data() + p * m.cols();
    double* rq = m.data() + q * m.cols();
    for (std::size_t i = 0; i < m.cols(); ++i) {
        const double mp = rp[i];
        const double mq = rq[i];
        rp[i] = c * mp - s * mq;
        rq[i] = s * mp + c * mq;
    }
}

// Fill columns marked zero with unit vectors orthonormalized against the
// rest, so U stays orthogonal even for rank-deficient input.
void complete_orthonormal(Matrix& u, const std::vector<bool>& is_zero) {
    const std::size_t m = u.rows();
    const std::size_t n = u.cols();
    for (std::size_t j = 0; j < n; ++j) {
        if (!is_zero[j]) continue;
        for (std::size_t cand = 0; cand < m; ++cand) {
            std::vector<double> v(m, 0.0);
            v[cand] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == j || is_zero[k]) continue;
                    double d = 0.0;
                    for (std::size_t i = 0; i < m; ++i) d += u(i, k) * v[i];
                    for (std::size_t i = 0; i < m; ++i) v[i] -= d * u(i, k);
                }
                // also against previously completed zero columns
                for (std::size_t k = 0; k < j; ++k) {
                    if (!is_zero[k]) continue;
                    double d = 0.0;
                    for (std::size_t i = 0; i < m; ++i) d += u(i, k) * v[i];
                    for (std::size_t i = 0; i < m; ++i) v[i] -= d * u(i, k);
                }
            }
            double nv = 0.0;
            for (double x : v) nv += x * x;
            nv = std::sqrt(nv);
            if (nv > 0.5) {
                for (std::size_t i = 0; i < m; ++i) u(i, j) = v[i] / nv;
                break;
            }
        }
    }
}

// One-sided Jacobi on a (m x n, m >= n) input. A = U S V^T.
SvdResult jacobi_svd_tall(const Matrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    Matrix wt = transpose(a);            // row j holds column j of the working matrix
    Matrix vt = Matrix::identity(n);     // row j holds v_j

    double fro2 = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) fro2 += a(i, j) * a(i, j);
    const double tol = kOffMassTol * fro2;

    // non-finite inputs never satisfy the convergence test and end at the
    // sweep limit
    if (fro2 != 0.0) {
        bool converged = false;
        std::size_t sweep = 0;
        for (; sweep < kJacobiSweepLimit; ++sweep) {
            double off2 = 0.0;
            for (std::size_t p = 0; p + 1 < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    const double app = row_dot(wt, p, p);
                    const double aqq = row_dot(wt, q, q);
                    const double apq = row_dot(wt, p, q);
                    off2 += apq * apq;
                    if (apq == 0.0) continue;
                    if (std::fabs(apq) <= 1e-18 * std::sqrt(app * aqq)) continue;
                    const double zeta = (aqq - app) / (2.0 * apq);
                    const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                     (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;
                    rotate_rows(wt, p, q, c, s);
                    rotate_rows(vt, p, q, c, s);
                }
            }
            if (std::sqrt(off2) <= tol) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw numerical_error("jacobi svd: no convergence within sweep limit", sweep);
    }

    std::vector<double> sigma(n);
    Matrix u(m, n);
    std::vector<bool> zero_col(n, false);
    for (std::size_t j = 0; j < n; ++j) {
        sigma[j] = std::sqrt(row_dot(wt, j, j));
        if (sigma[j] > 0.0) {
            for (std::size_t i = 0; i < m; ++i) u(i, j) = wt(j, i) / sigma[j];
        } else {
            zero_col[j] = true;
        }
    }
    complete_orthonormal(u, zero_col);

    // descending order, ties stable
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

    SvdResult out;
    out.sigma.resize(n);
    out.U = Matrix(m, n);
    out.Vt = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.sigma[j] = sigma[perm[j]];
        for (std::size_t i = 0; i < m; ++i) out.U(i, j) = u(i, perm[j]);
        for (std::size_t i = 0; i < n; ++i) out.Vt(j, i) = vt(perm[j], i);
    }
    return out;
}

} // namespace

QrResult householder_qr(const Matrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (m < n) throw std::invalid_argument("householder_qr: needs rows >= cols");
    Matrix r = a;
    std::vector<std::vector<double>> vs; // reflector vectors, length m-k each
    vs.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> x(m - k);
        for (std::size_t i = k; i < m; ++i) x[i - k] = r(i, k);
        double nx = 0.0;
        for (double t : x) nx += t * t;
        nx = std::sqrt(nx);
        std::vector<double> v = x;
        if (nx > 0.0) {
            const double alpha = (x[0] >= 0.0 ? -nx : nx);
            v[0] -= alpha;
            double nv = 0.0;
            for (double t : v) nv += t * t;
            nv = std::sqrt(nv);
            if (nv > 0.0) {
                for (double& t : v) t /= nv;
                for (std::size_t j = k; j < n; ++j) {
                    double d = 0.0;
                    for (std::size_t i = k; i < m; ++i) d += v[i - k] * r(i, j);
                    d *= 2.0;
                    for (std::size_t i = k; i < m; ++i) r(i, j) -= d * v[i - k];
                }
            } else {
                std::fill(v.begin(), v.end(), 0.0);
            }
        } else {
            std::fill(v.begin(), v.end(), 0.0);
        }
        vs.push_back(std::move(v));
    }
    // thin Q: apply reflectors to the leading columns of I in reverse
    Matrix q(m, n);
    for (std::size_t j = 0; j < n; ++j) q(j, j) = 1.0;
    for (std::size_t kk = n; kk-- > 0;) {
        const auto& v = vs[kk];
        for (std::size_t j = 0; j < n; ++j) {
            double d = 0.0;
            for (std::size_t i = kk; i < m; ++i) d += v[i - kk] * q(i, j);
            d *= 2.0;
            for (std::size_t i = kk; i < m; ++i) q(i, j) -= d * v[i - kk];
        }
    }
    QrResult out;
    out.Q = std::move(q);
    out.R = submatrix(r, 0, n, 0, n);
    return out;
}

SvdResult svd_small(const Matrix& a, std::size_t max_side) {
    if (!a.is_square()) throw std::invalid_argument("svd_small: matrix must be square");
    if (a.rows() == 0) throw std::invalid_argument("svd_small: empty matrix");
    if (a.rows() > max_side)
        throw std::invalid_argument("svd_small: side exceeds configured block-size limit");
    return jacobi_svd_tall(a);
}

SvdResult svd(const Matrix& a) {
    if (a.empty()) throw std::invalid_argument("svd: empty matrix");
    if (a.rows() < a.cols()) {
        SvdResult t = svd(transpose(a));
        SvdResult out;
        out.sigma = t.sigma;
        out.U = transpose(t.Vt);
        out.Vt = transpose(t.U);
        return out;
    }
    if (a.cols() <= kDefaultMaxBlockSize) return jacobi_svd_tall(a);
    // QR preconditioning keeps sweep counts low on larger inputs.
    QrResult qr = householder_qr(a);
    SvdResult inner = jacobi_svd_tall(qr.R);
    SvdResult out;
    out.sigma = std::move(inner.sigma);
    out.U = matmul(qr.Q, inner.U);
    out.Vt = std::move(inner.Vt);
    return out;
}

double sigma_max(const Matrix& a) {
    SvdResult s = svd(a);
    return s.sigma.empty() ? 0.0 : s.sigma.front();
}

double sigma_min(const Matrix& a) {
    if (!a.is_square()) throw std::invalid_argument("sigma_min: matrix must be square");
    SvdResult s = svd(a);
    return s.sigma.back();
}

double cond2(const Matrix& a) {
    if (!a.is_square()) throw std::invalid_argument("cond2: matrix must be square");
    SvdResult s = svd(a);
    const double smin = s.sigma.back();
    const double smax = s.sigma.front();
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return smax / smin;
}

std::vector<double> symmetric_eigenvalues(const Matrix& s_in) {
    if (!s_in.is_square()) throw std::invalid_argument("symmetric_eigenvalues: square input");
    const std::size_t n = s_in.rows();
    Matrix s = s_in;
    double fro2 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) fro2 += s(i, j) * s(i, j);
    const double tol = kOffMassTol * std::sqrt(fro2);

    if (fro2 != 0.0) {
        bool converged = false;
        std::size_t sweep = 0;
        for (; sweep < kJacobiSweepLimit; ++sweep) {
            double off = 0.0;
            for (std::size_t p = 0; p + 1 < n; ++p)
                for (std::size_t q = p + 1; q < n; ++q) off += s(p, q) * s(p, q);
            if (std::sqrt(off) <= tol) {
                converged = true;
                break;
            }
            for (std::size_t p = 0; p + 1 < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    const double apq = s(p, q);
                    if (apq == 0.0) continue;
                    const double zeta = (s(q, q) - s(p, p)) / (2.0 * apq);
                    const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                     (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double snx = t * c;
                    // S <- J^T S J on rows/cols p,q
                    for (std::size_t i = 0; i < n; ++i) {
                        const double sip = s(i, p);
                        const double siq = s(i, q);
                        s(i, p) = c * sip - snx * siq;
                        s(i, q) = snx * sip + c * siq;
                    }
                    for (std::size_t j = 0; j < n; ++j) {
                        const double spj = s(p, j);
                        const double sqj = s(q, j);
                        s(p, j) = c * spj - snx * sqj;
                        s(q, j) = snx * spj + c * sqj;
                    }
                }
            }
        }
        if (!converged)
            throw numerical_error("jacobi eigenvalues: no convergence within sweep limit", sweep);
    }

    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = s(i, i);
    std::stable_sort(ev.begin(), ev.end(), std::greater<double>());
    return ev;
}

} // namespace beamlu
