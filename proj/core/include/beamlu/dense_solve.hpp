#pragma once

#include <cstddef>
#include <vector>

#include "beamlu/matrix.hpp"

namespace beamlu {

/// Partial-pivoted dense LU in factored form. Used as the internal oracle
/// solver, for general diagonal-block inversions, and for the capacitance
/// matrix.
class PivotedLU {
public:
    explicit PivotedLU(const Matrix& a); // throws numerical_error on singular pivot

    std::vector<double> solve(const std::vector<double>& b) const;
    Matrix solve(const Matrix& b) const;

    std::size_t dim() const { return lu_.rows(); }

private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
};

/// X with A X = B via GEPP. Throws numerical_error carrying the failing
/// pivot index when A is singular to working precision.
Matrix solve_dense_lu(const Matrix& a, const Matrix& b);
std::vector<double> solve_dense_lu(const Matrix& a, const std::vector<double>& b);

Matrix inverse(const Matrix& a);

} // namespace beamlu
