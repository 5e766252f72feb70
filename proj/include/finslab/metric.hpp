#pragma once

#include <memory>
#include <span>

#include "finslab/jet.hpp"
#include "finslab/point.hpp"
#include "finslab/psi.hpp"

namespace finslab {

// A Finsler metric presented through its squared norm on jets. The oracle
// operations only ever see this interface, keeping them independent of the
// spherically symmetric closed forms they are meant to check.
class MetricEvaluator {
 public:
  virtual ~MetricEvaluator() = default;

  virtual int dimension() const = 0;

  // F^2 at jets of the coordinates; x and y each hold dimension() jets from
  // one shared space.
  virtual Jet f_squared(std::span<const Jet> x, std::span<const Jet> y) const = 0;

  virtual Jet f(std::span<const Jet> x, std::span<const Jet> y) const {
    return sqrt(f_squared(x, y));
  }
};

// F = |y| psi(|x|, <x,y>/|y|).
class ProfileMetric : public MetricEvaluator {
 public:
  ProfileMetric(PsiProfile profile, int n) : profile_(std::move(profile)), n_(n) {}

  const PsiProfile& profile() const { return profile_; }
  int dimension() const override { return n_; }

  Jet f_squared(std::span<const Jet> x, std::span<const Jet> y) const override;
  Jet f(std::span<const Jet> x, std::span<const Jet> y) const override;

 private:
  Jet psi_jet(std::span<const Jet> x, std::span<const Jet> y, Jet* u_out) const;

  PsiProfile profile_;
  int n_;
};

struct SeededPoint {
  std::shared_ptr<const JetSpace> space;
  std::vector<Jet> x, y;
};

// Seeds the coordinates of `p` in xy_space(n, x_cap, y_cap). When seed_x is
// false the x entries are constants (the space still reserves the x block so
// extraction code is uniform across providers).
SeededPoint seed_xy(const EvaluationPoint& p, int x_cap, int y_cap, bool seed_x);

}  // namespace finslab
