#include "finslab/linalg.hpp"

#include <cmath>
#include <limits>

#include "finslab/errors.hpp"

namespace finslab {

std::vector<double> leading_pivots(std::span<const double> a, int n) {
  std::vector<double> m(a.begin(), a.end());
  std::vector<double> pivots;
  auto at = [&](int i, int j) -> double& { return m[static_cast<std::size_t>(i * n + j)]; };
  for (int k = 0; k < n; ++k) {
    double p = at(k, k);
    pivots.push_back(p);
    if (p == 0.0) break;
    for (int i = k + 1; i < n; ++i) {
      double f = at(i, k) / p;
      for (int j = k; j < n; ++j) at(i, j) -= f * at(k, j);
    }
  }
  return pivots;
}

std::vector<double> matrix_inverse(std::span<const double> a, int n, bool* singular) {
  std::vector<double> m(a.begin(), a.end());
  std::vector<double> inv(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i * n + i)] = 1.0;
  if (singular) *singular = false;

  auto at = [&](std::vector<double>& v, int i, int j) -> double& {
    return v[static_cast<std::size_t>(i * n + j)];
  };
  for (int k = 0; k < n; ++k) {
    int pivot_row = k;
    double best = std::abs(at(m, k, k));
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(at(m, i, k)) > best) {
        best = std::abs(at(m, i, k));
        pivot_row = i;
      }
    }
    if (best == 0.0) {
      if (singular) *singular = true;
      return inv;
    }
    if (pivot_row != k) {
      for (int j = 0; j < n; ++j) {
        std::swap(at(m, k, j), at(m, pivot_row, j));
        std::swap(at(inv, k, j), at(inv, pivot_row, j));
      }
    }
    double p = at(m, k, k);
    for (int j = 0; j < n; ++j) {
      at(m, k, j) /= p;
      at(inv, k, j) /= p;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      double f = at(m, i, k);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        at(m, i, j) -= f * at(m, k, j);
        at(inv, i, j) -= f * at(inv, k, j);
      }
    }
  }
  return inv;
}

double matrix_norm1(std::span<const double> a, int n) {
  double best = 0.0;
  for (int j = 0; j < n; ++j) {
    double col = 0.0;
    for (int i = 0; i < n; ++i) col += std::abs(a[static_cast<std::size_t>(i * n + j)]);
    best = std::max(best, col);
  }
  return best;
}

double condition_estimate(std::span<const double> a, int n) {
  bool singular = false;
  std::vector<double> inv = matrix_inverse(a, n, &singular);
  if (singular) return std::numeric_limits<double>::infinity();
  return matrix_norm1(a, n) * matrix_norm1(inv, n);
}

std::vector<Jet> jet_matrix_inverse(std::span<const Jet> a, int n) {
  std::vector<Jet> m(a.begin(), a.end());
  auto space = m[0].space();
  std::vector<Jet> inv(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      inv[static_cast<std::size_t>(i * n + j)] = Jet::constant(space, i == j ? 1.0 : 0.0);

  auto at = [n](std::vector<Jet>& v, int i, int j) -> Jet& {
    return v[static_cast<std::size_t>(i * n + j)];
  };
  for (int k = 0; k < n; ++k) {
    int pivot_row = k;
    double best = std::abs(at(m, k, k).value());
    for (int i = k + 1; i < n; ++i) {
      double cand = std::abs(at(m, i, k).value());
      if (cand > best) {
        best = cand;
        pivot_row = i;
      }
    }
    if (!(best > 0.0)) throw DomainError("fundamental tensor singular");
    if (pivot_row != k) {
      for (int j = 0; j < n; ++j) {
        std::swap(at(m, k, j), at(m, pivot_row, j));
        std::swap(at(inv, k, j), at(inv, pivot_row, j));
      }
    }
    Jet pivot_inv = 1.0 / at(m, k, k);
    for (int j = 0; j < n; ++j) {
      at(m, k, j) = at(m, k, j) * pivot_inv;
      at(inv, k, j) = at(inv, k, j) * pivot_inv;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      Jet f = at(m, i, k);
      if (f.value() == 0.0) {
        bool all_zero = true;
        for (std::size_t c = 0; c < space->size() && all_zero; ++c)
          all_zero = f.coefficient_rank(c) == 0.0;
        if (all_zero) continue;
      }
      for (int j = 0; j < n; ++j) {
        at(m, i, j) -= f * at(m, k, j);
        at(inv, i, j) -= f * at(inv, k, j);
      }
    }
  }
  return inv;
}

}  // namespace finslab
