#include "finslab/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace finslab {

namespace {

constexpr int kMaxVars = 16;
constexpr int kMaxCap = 15;
constexpr std::size_t kMaxCoefficients = 4u << 20;

std::uint64_t pack_orders(std::span<const int> orders) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < orders.size(); ++i)
    key |= static_cast<std::uint64_t>(orders[i]) << (4 * i);
  return key;
}

void enumerate_compositions(int vars, int pos, int remaining, std::vector<int>& cur,
                            std::vector<int>& out) {
  if (pos == vars - 1) {
    cur[static_cast<std::size_t>(pos)] = remaining;
    out.insert(out.end(), cur.begin(), cur.end());
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    cur[static_cast<std::size_t>(pos)] = k;
    enumerate_compositions(vars, pos + 1, remaining - k, cur, out);
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::shared_ptr<const JetSpace> JetSpace::make(const std::vector<JetGroup>& groups) {
  static std::mutex registry_mutex;
  static std::map<std::vector<std::pair<int, int>>, std::shared_ptr<const JetSpace>> registry;

  std::vector<std::pair<int, int>> key;
  key.reserve(groups.size());
  int total_vars = 0;
  for (const auto& g : groups) {
    if (g.vars < 1 || g.cap < 0 || g.cap > kMaxCap)
      throw JetError("invalid jet group configuration");
    total_vars += g.vars;
    key.emplace_back(g.vars, g.cap);
  }
  if (groups.empty() || total_vars > kMaxVars)
    throw JetError("invalid jet group configuration");

  std::scoped_lock lock(registry_mutex);
  auto it = registry.find(key);
  if (it != registry.end()) return it->second;

  auto space = std::shared_ptr<JetSpace>(new JetSpace());
  space->groups_ = groups;
  space->var_count_ = total_vars;

  int var_offset = 0;
  std::size_t size = 1;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    space->group_var_offset_.push_back(var_offset);
    for (int v = 0; v < groups[g].vars; ++v)
      space->group_of_var_.push_back(static_cast<int>(g));
    var_offset += groups[g].vars;
    space->max_total_degree_ += groups[g].cap;

    GroupIndex gi;
    gi.vars = groups[g].vars;
    std::vector<int> cur(static_cast<std::size_t>(groups[g].vars));
    for (int deg = 0; deg <= groups[g].cap; ++deg)
      enumerate_compositions(groups[g].vars, 0, deg, cur, gi.orders);
    gi.count = gi.orders.size() / static_cast<std::size_t>(groups[g].vars);

    std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(gi.count);
    for (std::size_t i = 0; i < gi.count; ++i) {
      std::span<const int> o(gi.orders.data() + i * static_cast<std::size_t>(gi.vars),
                             static_cast<std::size_t>(gi.vars));
      keyed[i] = {pack_orders(o), static_cast<std::uint32_t>(i)};
    }
    std::sort(keyed.begin(), keyed.end());
    gi.keys.reserve(gi.count);
    gi.ranks.reserve(gi.count);
    for (const auto& [k, r] : keyed) {
      gi.keys.push_back(k);
      gi.ranks.push_back(r);
    }

    auto lookup = [&gi](std::uint64_t k) -> std::uint32_t {
      auto pos = std::lower_bound(gi.keys.begin(), gi.keys.end(), k);
      return gi.ranks[static_cast<std::size_t>(pos - gi.keys.begin())];
    };
    std::vector<int> total(gi.count);
    for (std::size_t i = 0; i < gi.count; ++i) {
      int t = 0;
      for (int v = 0; v < gi.vars; ++v)
        t += gi.orders[i * static_cast<std::size_t>(gi.vars) + static_cast<std::size_t>(v)];
      total[i] = t;
    }
    std::vector<int> sum(static_cast<std::size_t>(gi.vars));
    for (std::size_t a = 0; a < gi.count; ++a) {
      for (std::size_t b = 0; b < gi.count; ++b) {
        if (total[a] + total[b] > groups[g].cap) continue;
        for (int v = 0; v < gi.vars; ++v)
          sum[static_cast<std::size_t>(v)] =
              gi.orders[a * static_cast<std::size_t>(gi.vars) + static_cast<std::size_t>(v)] +
              gi.orders[b * static_cast<std::size_t>(gi.vars) + static_cast<std::size_t>(v)];
        gi.pair_lhs.push_back(static_cast<std::uint32_t>(a));
        gi.pair_rhs.push_back(static_cast<std::uint32_t>(b));
        gi.pair_out.push_back(lookup(pack_orders(sum)));
      }
    }
    space->group_index_.push_back(std::move(gi));
    space->stride_.push_back(size);
    size *= space->group_index_.back().count;
    if (size > kMaxCoefficients) throw JetError("jet space too large");
  }
  space->size_ = size;

  // Global enumeration, factorial factors.
  space->orders_.resize(size * static_cast<std::size_t>(total_vars));
  space->factorial_.resize(size);
  for (std::size_t rank = 0; rank < size; ++rank) {
    std::size_t rem = rank;
    double fact = 1.0;
    int* dst = space->orders_.data() + rank * static_cast<std::size_t>(total_vars);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto& gi = space->group_index_[g];
      std::size_t grank = rem % gi.count;
      rem /= gi.count;
      const int* src = gi.orders.data() + grank * static_cast<std::size_t>(gi.vars);
      for (int v = 0; v < gi.vars; ++v) {
        dst[space->group_var_offset_[g] + v] = src[v];
        fact *= factorial(src[v]);
      }
    }
    space->factorial_[rank] = fact;
  }

  // Full product table: cross product of the per-group pair lists.
  std::size_t triple_count = 1;
  for (const auto& gi : space->group_index_) triple_count *= gi.pair_lhs.size();
  auto& table = space->table_;
  table.lhs.reserve(triple_count);
  table.rhs.reserve(triple_count);
  table.out.reserve(triple_count);
  std::vector<std::size_t> odo(groups.size(), 0);
  for (std::size_t t = 0; t < triple_count; ++t) {
    std::size_t la = 0, lb = 0, lc = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto& gi = space->group_index_[g];
      la += gi.pair_lhs[odo[g]] * space->stride_[g];
      lb += gi.pair_rhs[odo[g]] * space->stride_[g];
      lc += gi.pair_out[odo[g]] * space->stride_[g];
    }
    table.lhs.push_back(static_cast<std::uint32_t>(la));
    table.rhs.push_back(static_cast<std::uint32_t>(lb));
    table.out.push_back(static_cast<std::uint32_t>(lc));
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (++odo[g] < space->group_index_[g].pair_lhs.size()) break;
      odo[g] = 0;
    }
  }

  auto result = std::shared_ptr<const JetSpace>(space);
  registry.emplace(std::move(key), result);
  return result;
}

std::span<const int> JetSpace::orders_of(std::size_t rank) const {
  return {orders_.data() + rank * static_cast<std::size_t>(var_count_),
          static_cast<std::size_t>(var_count_)};
}

std::size_t JetSpace::group_rank(int g, std::span<const int> sub_orders) const {
  const auto& gi = group_index_[static_cast<std::size_t>(g)];
  int total = 0;
  for (int o : sub_orders) {
    if (o < 0) throw JetError("order not tracked");
    total += o;
  }
  if (total > groups_[static_cast<std::size_t>(g)].cap) throw JetError("order not tracked");
  std::uint64_t key = pack_orders(sub_orders);
  auto pos = std::lower_bound(gi.keys.begin(), gi.keys.end(), key);
  if (pos == gi.keys.end() || *pos != key) throw JetError("order not tracked");
  return gi.ranks[static_cast<std::size_t>(pos - gi.keys.begin())];
}

std::size_t JetSpace::rank_of(std::span<const int> orders) const {
  if (orders.size() != static_cast<std::size_t>(var_count_))
    throw JetError("order not tracked");
  std::size_t rank = 0;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    std::span<const int> sub(orders.data() + group_var_offset_[g],
                             static_cast<std::size_t>(groups_[g].vars));
    rank += group_rank(static_cast<int>(g), sub) * stride_[g];
  }
  return rank;
}

Jet Jet::constant(std::shared_ptr<const JetSpace> space, double value) {
  std::vector<double> coeff(space->size(), 0.0);
  coeff[0] = value;
  return Jet(std::move(space), std::move(coeff));
}

Jet Jet::variable(std::shared_ptr<const JetSpace> space, int var, double value) {
  if (var < 0 || var >= space->var_count()) throw JetError("variable index out of range");
  if (space->group(space->group_of_var(var)).cap < 1)
    throw JetError("variable not differentiable under caps");
  std::vector<double> coeff(space->size(), 0.0);
  coeff[0] = value;
  MultiIndex unit(static_cast<std::size_t>(space->var_count()), 0);
  unit[static_cast<std::size_t>(var)] = 1;
  coeff[space->rank_of(unit)] = 1.0;
  return Jet(std::move(space), std::move(coeff));
}

void Jet::check_same_space(const Jet& a, const Jet& b) {
  if (!a.space_ || a.space_ != b.space_) throw JetError("jet space mismatch");
}

double Jet::coefficient(std::span<const int> orders) const {
  return coeff_[space_->rank_of(orders)];
}

double Jet::partial(std::span<const int> orders) const {
  std::size_t rank = space_->rank_of(orders);
  return coeff_[rank] * space_->factorial_factor(rank);
}

Jet Jet::derivative(int var) const {
  std::vector<double> out(space_->size(), 0.0);
  MultiIndex shifted(static_cast<std::size_t>(space_->var_count()));
  for (std::size_t rank = 0; rank < space_->size(); ++rank) {
    auto orders = space_->orders_of(rank);
    int ov = orders[static_cast<std::size_t>(var)];
    if (ov == 0) continue;
    shifted.assign(orders.begin(), orders.end());
    shifted[static_cast<std::size_t>(var)] = ov - 1;
    out[space_->rank_of(shifted)] = coeff_[rank] * ov;
  }
  return Jet(space_, std::move(out));
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (double& c : out.coeff_) c = -c;
  return out;
}

Jet& Jet::operator+=(const Jet& rhs) {
  check_same_space(*this, rhs);
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += rhs.coeff_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  check_same_space(*this, rhs);
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= rhs.coeff_[i];
  return *this;
}

Jet operator*(const Jet& lhs, const Jet& rhs) {
  Jet::check_same_space(lhs, rhs);
  std::vector<double> out(lhs.coeff_.size(), 0.0);
  const auto& t = lhs.space_->product_table();
  const double* a = lhs.coeff_.data();
  const double* b = rhs.coeff_.data();
  for (std::size_t i = 0; i < t.lhs.size(); ++i)
    out[t.out[i]] += a[t.lhs[i]] * b[t.rhs[i]];
  return Jet(lhs.space_, std::move(out));
}

Jet operator*(Jet lhs, double rhs) {
  for (double& c : lhs.coeff_) c *= rhs;
  return lhs;
}

Jet operator-(double lhs, const Jet& rhs) {
  Jet out = -rhs;
  out.coeff_[0] += lhs;
  return out;
}

Jet Jet::apply_series(const Jet& a, std::span<const double> series) {
  Jet w = a;
  w.coeff_[0] = 0.0;
  Jet acc = Jet::constant(a.space_, series.back());
  for (std::size_t k = series.size() - 1; k-- > 0;) {
    acc = acc * w;
    acc.coeff_[0] += series[k];
  }
  return acc;
}

Jet Jet::reciprocal() const {
  double b0 = value();
  if (!(std::abs(b0) > 0.0) || !std::isfinite(b0)) throw JetError("jet division singular");
  int terms = space_->max_total_degree() + 1;
  std::vector<double> series(static_cast<std::size_t>(terms));
  double c = 1.0 / b0;
  for (int k = 0; k < terms; ++k) {
    series[static_cast<std::size_t>(k)] = c;
    c = -c / b0;
  }
  return apply_series(*this, series);
}

Jet operator/(const Jet& lhs, const Jet& rhs) {
  Jet::check_same_space(lhs, rhs);
  return lhs * rhs.reciprocal();
}

Jet operator/(double lhs, const Jet& rhs) { return rhs.reciprocal() * lhs; }

Jet sqrt(const Jet& a) {
  double a0 = a.value();
  if (!(a0 > 0.0)) throw JetError("jet domain error: sqrt of non-positive value");
  int terms = a.space_->max_total_degree() + 1;
  std::vector<double> series(static_cast<std::size_t>(terms));
  double c = std::sqrt(a0);
  for (int k = 0; k < terms; ++k) {
    series[static_cast<std::size_t>(k)] = c;
    c *= (0.5 - k) / ((k + 1) * a0);
  }
  return Jet::apply_series(a, series);
}

Jet exp(const Jet& a) {
  int terms = a.space_->max_total_degree() + 1;
  std::vector<double> series(static_cast<std::size_t>(terms));
  double c = std::exp(a.value());
  for (int k = 0; k < terms; ++k) {
    series[static_cast<std::size_t>(k)] = c;
    c /= (k + 1);
  }
  return Jet::apply_series(a, series);
}

Jet log(const Jet& a) {
  double a0 = a.value();
  if (!(a0 > 0.0)) throw JetError("jet domain error: log of non-positive value");
  int terms = a.space_->max_total_degree() + 1;
  std::vector<double> series(static_cast<std::size_t>(terms));
  series[0] = std::log(a0);
  double c = 1.0 / a0;
  for (int k = 1; k < terms; ++k) {
    series[static_cast<std::size_t>(k)] = c / k;
    c = -c / a0;
  }
  return Jet::apply_series(a, series);
}

Jet pow_int(const Jet& a, int exponent) {
  if (exponent < 0) return pow_int(a, -exponent).reciprocal();
  Jet acc = Jet::constant(a.space(), 1.0);
  Jet base = a;
  int e = exponent;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return acc;
}

std::shared_ptr<const JetSpace> rs_space() {
  return JetSpace::make({{1, kRCap}, {1, kSCap}});
}

std::shared_ptr<const JetSpace> xy_space(int n, int x_cap, int y_cap) {
  return JetSpace::make({{n, x_cap}, {n, y_cap}});
}

}  // namespace finslab
