#pragma once

// Embedded Runge-Kutta 5(4) of Dormand and Prince with PI step control and the
// method's native 4th-order continuous extension.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hamosc/errors.hpp"

namespace hamosc {

struct IntegratorOpts {
  double rtol = 1e-9;
  double atol = 1e-12;
  double h_init = 0.0;  // 0 selects the starting step automatically
  double h_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 20'000'000;
};

template <class Scalar>
using StateVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Interpolant over one accepted step [t0, t0 + h].
template <class Scalar>
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::array<StateVec<Scalar>, 5> r;

  double t1() const { return t0 + h; }

  StateVec<Scalar> eval(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    return r[0] + th * (r[1] + th1 * (r[2] + th * (r[3] + th1 * r[4])));
  }
};

/// Continuous solution assembled from consecutive step interpolants.
template <class Scalar>
class DenseSeries {
 public:
  void push(DenseSegment<Scalar> seg) { segments_.push_back(std::move(seg)); }

  bool empty() const { return segments_.empty(); }
  double t_begin() const { return segments_.front().t0; }
  double t_end() const { return segments_.back().t1(); }
  const std::vector<DenseSegment<Scalar>>& segments() const { return segments_; }

  /// Index of the segment containing t (clamped to the covered range).
  std::size_t locate(double t) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const DenseSegment<Scalar>& s) { return v < s.t0; });
    if (it == segments_.begin()) return 0;
    return static_cast<std::size_t>(std::distance(segments_.begin(), it) - 1);
  }

  /// Throws InterpolationGap outside [t_begin, t_end].
  StateVec<Scalar> eval(double t) const {
    if (segments_.empty() || t < t_begin() - 1e-12 * std::max(1.0, std::abs(t)) ||
        t > t_end() + 1e-12 * std::max(1.0, std::abs(t))) {
      throw InterpolationGap("dense output requested outside the integrated range");
    }
    return segments_[locate(t)].eval(t);
  }

 private:
  std::vector<DenseSegment<Scalar>> segments_;
};

namespace detail {

template <class Scalar>
double magnitude(const Scalar& v) {
  return std::abs(v);
}

}  // namespace detail

template <class Scalar>
class DormandPrince {
 public:
  using Vec = StateVec<Scalar>;
  using Rhs = std::function<void(double, const Vec&, Vec&)>;

  DormandPrince(Rhs f, IntegratorOpts opts, double t0, Vec y0)
      : f_(std::move(f)), opts_(opts), t_(t0), y_(std::move(y0)) {
    if (!(opts_.rtol > 0.0) || !(opts_.atol > 0.0)) {
      throw std::invalid_argument("integrator tolerances must be positive");
    }
    const auto n = y_.size();
    for (auto& k : k_) k.resize(n);
    ynew_.resize(n);
    ytmp_.resize(n);
    f_(t_, y_, k_[0]);
    ++evals_;
    h_ = opts_.h_init > 0.0 ? opts_.h_init : 0.0;
  }

  double t() const { return t_; }
  const Vec& y() const { return y_; }
  double last_h() const { return last_h_; }
  std::size_t rhs_evals() const { return evals_; }
  std::size_t steps() const { return steps_; }
  std::size_t rejected() const { return rejected_; }

  /// Multiplies the state by `factor` (positive). Valid only for linear homogeneous
  /// right-hand sides; atol is scaled along so the step sequence is unchanged.
  void rescale(double factor) {
    y_ *= factor;
    k_[0] *= factor;
    atol_scale_ *= factor;
  }

  /// Smallest admissible step at the current time.
  double h_min() const {
    return 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_));
  }

  /// Takes one accepted step, not passing t_end, and returns its interpolant.
  const DenseSegment<Scalar>& step(double t_end) {
    if (!(t_end > t_)) throw std::invalid_argument("t_end must exceed the current time");
    if (h_ <= 0.0) h_ = initial_step(t_end);
    bool last_rejected = false;
    for (;;) {
      if (steps_ + rejected_ >= opts_.max_steps) throw StepSizeUnderflow(t_, h_);
      double h = std::min({h_, opts_.h_max, t_end - t_});
      const bool hits_end = h >= t_end - t_;
      if (h < h_min() && !hits_end) throw StepSizeUnderflow(t_, h);
      const double err = attempt(h);
      if (err <= 1.0) {
        double fac = std::pow(err, kExpo1) / std::pow(facold_, kBeta);
        fac = std::clamp(fac / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
        double hnew = h / fac;
        if (last_rejected) hnew = std::min(hnew, h);
        facold_ = std::max(err, 1e-4);
        fill_dense(h);
        t_ = hits_end ? t_end : t_ + h;
        y_.swap(ynew_);
        k_[0].swap(k_[6]);
        last_h_ = h;
        h_ = hnew;
        ++steps_;
        return segment_;
      }
      ++rejected_;
      last_rejected = true;
      const double fac = std::min(1.0 / kFacMin, std::pow(err, kExpo1) / kSafe);
      h_ = h / fac;
      if (!std::isfinite(err)) h_ = 0.1 * h;
    }
  }

 private:
  static constexpr double kBeta = 0.04;
  static constexpr double kExpo1 = 0.2 - kBeta * 0.75;
  static constexpr double kSafe = 0.9;
  static constexpr double kFacMin = 0.2;   // max shrink 5x
  static constexpr double kFacMax = 10.0;  // max growth 10x

  double weight(Eigen::Index i, const Vec& a, const Vec& b) const {
    return opts_.atol * atol_scale_ +
           opts_.rtol * std::max(detail::magnitude(a(i)), detail::magnitude(b(i)));
  }

  double norm_scaled(const Vec& v, const Vec& ref) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double s = detail::magnitude(v(i)) / weight(i, ref, ref);
      acc += s * s;
    }
    return std::sqrt(acc / std::max<Eigen::Index>(1, v.size()));
  }

  double initial_step(double t_end) {
    const double span = t_end - t_;
    const double d0 = norm_scaled(y_, y_);
    const double d1 = norm_scaled(k_[0], y_);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    ytmp_ = y_ + h0 * k_[0];
    f_(t_ + h0, ytmp_, k_[1]);
    ++evals_;
    const double d2 = norm_scaled(k_[1] - k_[0], y_) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, span, opts_.h_max});
  }

  double attempt(double h) {
    auto& k1 = k_[0];
    auto& k2 = k_[1];
    auto& k3 = k_[2];
    auto& k4 = k_[3];
    auto& k5 = k_[4];
    auto& k6 = k_[5];
    auto& k7 = k_[6];
    ytmp_ = y_ + h * (a21 * k1);
    f_(t_ + c2 * h, ytmp_, k2);
    ytmp_ = y_ + h * (a31 * k1 + a32 * k2);
    f_(t_ + c3 * h, ytmp_, k3);
    ytmp_ = y_ + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f_(t_ + c4 * h, ytmp_, k4);
    ytmp_ = y_ + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f_(t_ + c5 * h, ytmp_, k5);
    ytmp_ = y_ + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f_(t_ + h, ytmp_, k6);
    ynew_ = y_ + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    f_(t_ + h, ynew_, k7);
    evals_ += 6;
    ytmp_ = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < ytmp_.size(); ++i) {
      const double s = detail::magnitude(ytmp_(i)) / weight(i, y_, ynew_);
      acc += s * s;
    }
    const double err = std::sqrt(acc / std::max<Eigen::Index>(1, ytmp_.size()));
    if (!ynew_.allFinite()) return std::numeric_limits<double>::infinity();
    return std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
  }

  void fill_dense(double h) {
    segment_.t0 = t_;
    segment_.h = h;
    segment_.r[0] = y_;
    segment_.r[1] = ynew_ - y_;
    segment_.r[2] = h * k_[0] - segment_.r[1];
    segment_.r[3] = segment_.r[1] - h * k_[6] - segment_.r[2];
    segment_.r[4] = h * (d1 * k_[0] + d3 * k_[2] + d4 * k_[3] + d5 * k_[4] + d6 * k_[5] +
                         d7 * k_[6]);
  }

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  Rhs f_;
  IntegratorOpts opts_;
  double t_;
  Vec y_;
  Vec ynew_;
  Vec ytmp_;
  std::array<Vec, 7> k_;
  DenseSegment<Scalar> segment_;
  double h_ = 0.0;
  double last_h_ = 0.0;
  double facold_ = 1e-4;
  double atol_scale_ = 1.0;
  std::size_t evals_ = 0;
  std::size_t steps_ = 0;
  std::size_t rejected_ = 0;
};

}  // namespace hamosc
