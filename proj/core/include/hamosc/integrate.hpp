#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hamosc/coeffs.hpp"
#include "hamosc/matlin.hpp"
#include "hamosc/ode.hpp"

namespace hamosc {

/// Integrator settings for the linear system; joint rescaling kicks in when
/// ||Phi||_F + ||Psi||_F exceeds `rescale_threshold`.
struct SystemIntegratorOpts : IntegratorOpts {
  double rescale_threshold = 1e8;
};

struct RescaleEvent {
  double t = 0.0;
  double factor = 1.0;
};

/// Solution (Phi, Psi) of the matrix system on an adaptive grid.
///
/// Stored states are scaled by the cumulative rescale factor `scale[k]`
/// (stored = true * scale[k]). `sigma_min_ratio` is sigma_min(Phi) / sigma_max([Phi; Psi]), which
/// vanishes exactly where det Phi does, and is invariant under the joint rescaling.
struct Trajectory {
  Eigen::Index n = 0;
  bool real_valued = true;
  std::vector<double> times;
  std::vector<CMatrix> Phi;
  std::vector<CMatrix> Psi;
  std::vector<double> sigma_min_ratio;
  std::vector<double> conjoined_defect;  // ||Phi* Psi - Psi* Phi||_F of stored states
  std::vector<double> scale;
  std::vector<RescaleEvent> rescale_log;
  DenseSeries<Complex> dense;  // segment k lives in scale[k]

  std::size_t size() const noexcept { return times.size(); }

  /// Interpolated (Phi, Psi) at t, in the scale of the containing segment.
  std::pair<CMatrix, CMatrix> state_at(double t) const;

  /// Conjoined defect at sample k in the original (unscaled) units.
  double unscaled_defect(std::size_t k) const { return conjoined_defect[k] / (scale[k] * scale[k]); }
};

struct ZeroRecord {
  enum class Kind { SignChange, Dip };
  double t_zero = 0.0;
  double sigma_ratio_min = 0.0;
  Kind kind = Kind::Dip;
};

struct NearMiss {
  double t = 0.0;
  double sigma_ratio = 0.0;
};

struct ZeroScan {
  std::vector<ZeroRecord> zeros;
  std::vector<NearMiss> near_misses;  // local minima in (zeta, 1e3 * zeta]
};

struct EscapeReport {
  bool escaped = false;
  std::optional<double> t_escape;
  double norm_at_escape = 0.0;
  /// Norm passed the escape threshold without step collapse; integration stopped early.
  bool large = false;
  double t_reached = 0.0;
};

inline constexpr double kEscapeThreshold = 1e10;
inline constexpr double kDefaultZeta = 1e-6;

// State helpers shared with the Riccati module.
CVector pack_state(const CMatrix& phi, const CMatrix& psi);
std::pair<CMatrix, CMatrix> unpack_state(const CVector& y, Eigen::Index n);
CVector pack_matrix(const CMatrix& m);
CMatrix unpack_matrix(const CVector& y, Eigen::Index n);

double sigma_ratio(const CMatrix& phi, const CMatrix& psi);
double conjoined_defect(const CMatrix& phi, const CMatrix& psi);
Complex det(const CMatrix& m);
/// Sum of log singular values of Phi, i.e. log|det Phi|.
double log_abs_det(const CMatrix& m);

/// Right-hand side of the linear system for use with DormandPrince<Complex>.
DormandPrince<Complex>::Rhs system_rhs(const SystemSpec& spec);

/// Integrates the system from (Phi0, Psi0) at spec.t0 to t_end.
/// Throws DomainError from coefficient evaluation or StepSizeUnderflow.
Trajectory integrate_system(const SystemSpec& spec, const CMatrix& phi0, const CMatrix& psi0,
                            double t_end, const SystemIntegratorOpts& opts = {});

/// Zeros of det Phi: refined dips of sigma_min_ratio below zeta and, for real systems,
/// sign changes of det Phi.
ZeroScan scan_det_zeros(const Trajectory& traj, double zeta = kDefaultZeta);
std::vector<ZeroRecord> detect_det_zeros(const Trajectory& traj, double zeta = kDefaultZeta);

struct ScalarTrajectory {
  std::vector<double> times;
  std::vector<double> phi;
  std::vector<double> psi;
  DenseSeries<double> dense;
  std::vector<double> zeros;  // sign changes of phi, refined by bisection
};

ScalarTrajectory integrate_scalar_system(const ScalarSystemSpec& s, double phi0, double psi0,
                                         double t_end, const IntegratorOpts& opts = {});

/// y' + a12 y^2 + E y - a21 = 0
struct ScalarRiccatiResult {
  std::vector<double> times;
  std::vector<double> y;
  DenseSeries<double> dense;
  EscapeReport escape;
};

ScalarRiccatiResult integrate_scalar_riccati(const ScalarSystemSpec& s, double y0, double t_end,
                                             const IntegratorOpts& opts = {});

/// Y' + p Y B Y + A* Y + Y (A + (p'/p - mu) I) - C / p = 0, the equation satisfied by
/// Y = Psi Phi^{-1} / p for solutions of the system.
struct MatrixRiccatiResult {
  Eigen::Index n = 0;
  std::vector<double> times;
  std::vector<CMatrix> Y;
  std::vector<double> hermitian_drift;  // ||Y - Y*||_F, filled when Y0 is Hermitian
  DenseSeries<Complex> dense;
  EscapeReport escape;

  CMatrix eval(double t) const { return unpack_matrix(dense.eval(t), n); }
};

DormandPrince<Complex>::Rhs matrix_riccati_rhs(const SystemSpec& spec);

MatrixRiccatiResult integrate_matrix_riccati(const SystemSpec& spec, const CMatrix& y0,
                                             double t_end, const IntegratorOpts& opts = {});

}  // namespace hamosc
