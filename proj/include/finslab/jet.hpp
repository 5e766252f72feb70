#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "finslab/errors.hpp"

namespace finslab {

// Derivative orders, one entry per variable of the owning space.
using MultiIndex = std::vector<int>;

// A block of variables sharing one total-degree cap.
struct JetGroup {
  int vars = 1;
  int cap = 0;
};

// Immutable descriptor of a truncated multivariate Taylor algebra: the
// variable layout, the capped index set, and the precomputed product table.
// Spaces are interned, so two calls with equal groups return the same object
// and jets can compare spaces by pointer.
class JetSpace {
 public:
  static std::shared_ptr<const JetSpace> make(const std::vector<JetGroup>& groups);

  int var_count() const { return var_count_; }
  int group_count() const { return static_cast<int>(groups_.size()); }
  const JetGroup& group(int g) const { return groups_[static_cast<std::size_t>(g)]; }
  int group_of_var(int var) const { return group_of_var_[static_cast<std::size_t>(var)]; }

  // Number of tracked coefficients. Rank 0 is always the constant term.
  std::size_t size() const { return size_; }

  // Highest total degree any tracked index can reach (sum of group caps).
  int max_total_degree() const { return max_total_degree_; }

  // Orders of the index with the given rank; length var_count().
  std::span<const int> orders_of(std::size_t rank) const;

  // Rank of a multi-index; throws JetError("order not tracked") when outside caps.
  std::size_t rank_of(std::span<const int> orders) const;

  // Product of factorials of the orders at `rank` (converts Taylor
  // coefficients into true partial derivatives).
  double factorial_factor(std::size_t rank) const { return factorial_[rank]; }

  struct ProductTable {
    std::vector<std::uint32_t> lhs, rhs, out;  // structure-of-arrays triples
  };
  const ProductTable& product_table() const { return table_; }

 private:
  JetSpace() = default;

  std::vector<JetGroup> groups_;
  int var_count_ = 0;
  int max_total_degree_ = 0;
  std::size_t size_ = 0;
  std::vector<int> group_of_var_;
  std::vector<int> group_var_offset_;

  // Per-group enumeration of capped multi-indices (flattened), a packed-key
  // lookup, and the per-group admissible product pairs.
  struct GroupIndex {
    int vars = 0;
    std::size_t count = 0;
    std::vector<int> orders;           // count * vars
    std::vector<std::uint64_t> keys;   // sorted packed keys
    std::vector<std::uint32_t> ranks;  // rank for keys[i]
    std::vector<std::uint32_t> pair_lhs, pair_rhs, pair_out;
  };
  std::vector<GroupIndex> group_index_;
  std::vector<std::size_t> stride_;

  std::vector<int> orders_;  // size_ * var_count_, global enumeration
  std::vector<double> factorial_;
  ProductTable table_;

  std::size_t group_rank(int g, std::span<const int> sub_orders) const;
};

// A truncated Taylor expansion: coefficients over the space's index set.
// Coefficient(alpha) = partial^alpha f / alpha!. Value semantics throughout.
class Jet {
 public:
  Jet() = default;

  static Jet constant(std::shared_ptr<const JetSpace> space, double value);
  // Seeds variable `var` at `value`: coefficient 1 on the unit index.
  static Jet variable(std::shared_ptr<const JetSpace> space, int var, double value);

  bool valid() const { return space_ != nullptr; }
  const std::shared_ptr<const JetSpace>& space() const { return space_; }

  double value() const { return coeff_[0]; }
  double coefficient(std::span<const int> orders) const;
  // True mixed partial derivative: coefficient times the factorial product.
  double partial(std::span<const int> orders) const;
  double coefficient_rank(std::size_t rank) const { return coeff_[rank]; }

  // d/dx_var as a jet in the same space. Coefficients whose shifted index
  // would exceed the caps come out as zero (standard truncation semantics).
  Jet derivative(int var) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);

  friend Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
  friend Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }
  friend Jet operator*(const Jet& lhs, const Jet& rhs);
  friend Jet operator/(const Jet& lhs, const Jet& rhs);

  friend Jet operator+(Jet lhs, double rhs) { lhs.coeff_[0] += rhs; return lhs; }
  friend Jet operator+(double lhs, Jet rhs) { rhs.coeff_[0] += lhs; return rhs; }
  friend Jet operator-(Jet lhs, double rhs) { lhs.coeff_[0] -= rhs; return lhs; }
  friend Jet operator-(double lhs, const Jet& rhs);
  friend Jet operator*(Jet lhs, double rhs);
  friend Jet operator*(double lhs, Jet rhs) { return std::move(rhs) * lhs; }
  friend Jet operator/(Jet lhs, double rhs) { return std::move(lhs) * (1.0 / rhs); }
  friend Jet operator/(double lhs, const Jet& rhs);

  friend Jet sqrt(const Jet& a);
  friend Jet exp(const Jet& a);
  friend Jet log(const Jet& a);
  friend Jet pow_int(const Jet& a, int exponent);

 private:
  Jet(std::shared_ptr<const JetSpace> space, std::vector<double> coeff)
      : space_(std::move(space)), coeff_(std::move(coeff)) {}

  static void check_same_space(const Jet& a, const Jet& b);

  // Horner evaluation of sum_k series[k] * (a - a0)^k; the shifted jet is
  // nilpotent so max_total_degree() terms suffice.
  static Jet apply_series(const Jet& a, std::span<const double> series);

  Jet reciprocal() const;

  std::shared_ptr<const JetSpace> space_;
  std::vector<double> coeff_;
};

// The two concrete algebras used throughout: (r, s) jets for the profile-side
// closed forms and (x-block, y-block) jets for the metric-side oracles.
std::shared_ptr<const JetSpace> rs_space();
std::shared_ptr<const JetSpace> xy_space(int n, int x_cap, int y_cap);

inline constexpr int kRCap = 2;
inline constexpr int kSCap = 6;

}  // namespace finslab
