#pragma once

#include <span>
#include <vector>

#include "finslab/jet.hpp"

namespace finslab {

// Dense row-major n x n helpers for desk-scale n (<= 16).

// Gaussian elimination pivots without row exchanges: positive definiteness is
// equivalent to every pivot (ratio of successive leading principal minors)
// being positive. Returns the pivot sequence; stops early on a zero pivot.
std::vector<double> leading_pivots(std::span<const double> a, int n);

// LU inverse with partial pivoting. Sets *singular on failure (result then
// holds whatever diagnostics survived).
std::vector<double> matrix_inverse(std::span<const double> a, int n, bool* singular);

double matrix_norm1(std::span<const double> a, int n);

// 1-norm condition estimate via explicit inverse; infinity when singular.
double condition_estimate(std::span<const double> a, int n);

// Gauss-Jordan inverse of a jet-valued matrix, pivoting on the magnitude of
// the constant terms. Throws DomainError("fundamental tensor singular").
std::vector<Jet> jet_matrix_inverse(std::span<const Jet> a, int n);

}  // namespace finslab
