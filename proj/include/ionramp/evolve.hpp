#ifndef IONRAMP_EVOLVE_HPP
#define IONRAMP_EVOLVE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ionramp/fock.hpp"
#include "ionramp/model.hpp"
#include "ionramp/ramp.hpp"
#include "ionramp/types.hpp"

namespace ionramp {

// Spectral data of the final Hamiltonian H(tau) used by the eigenbasis propagator.
//
// With H(t) = H(tau) + g(t) W, W = sum_{ramped} n_i (n_i - 1), the amplitudes
// c_alpha on the eigenvectors |alpha> of H(tau) obey
//   i dc/dt = diag(E) c + g(t) M c,   M_{alpha beta} = <alpha| W |beta>.
// M does not depend on time and is built once.
template <typename Scalar = double>
struct EigenFrame {
  Vector<Scalar> energies;
  Matrix<Scalar> vectors;        // columns are |alpha> in the Fock basis
  Vector<Scalar> ramp_diagonal;  // W in the Fock basis
  Matrix<Scalar> coupling;       // M
  std::vector<int> ramped_sites;
};

template <typename Scalar = double>
EigenFrame<Scalar> eigenframe(const Hamiltonian<Scalar>& final_hamiltonian, const FockBasis& basis,
                              std::span<const int> ramped_sites) {
  if (final_hamiltonian.dimension() != static_cast<Eigen::Index>(basis.size())) {
    throw std::invalid_argument("eigenframe: Hamiltonian and basis dimensions differ");
  }
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(final_hamiltonian.dense());
  if (solver.info() != Eigen::Success) throw NumericalError("eigenframe: eigensolver failed");

  EigenFrame<Scalar> frame;
  frame.energies = solver.eigenvalues();
  frame.vectors = solver.eigenvectors();
  for (Eigen::Index c = 0; c < frame.vectors.cols(); ++c) {
    auto col = frame.vectors.col(c);
    detail::canonicalize_sign(col);
  }
  frame.ramp_diagonal = Vector<Scalar>::Zero(final_hamiltonian.dimension());
  for (int site : ramped_sites) frame.ramp_diagonal += interaction_diagonal<Scalar>(basis, site);
  frame.coupling.noalias() = frame.vectors.transpose() * frame.ramp_diagonal.asDiagonal() * frame.vectors;
  frame.coupling = (frame.coupling + frame.coupling.transpose().eval()) / Scalar(2);
  frame.ramped_sites.assign(ramped_sites.begin(), ramped_sites.end());
  return frame;
}

/// c0 = V^dag psi0.
template <typename Scalar = double, typename Derived>
ComplexVector<Scalar> project_initial(const Eigen::MatrixBase<Derived>& psi0, const EigenFrame<Scalar>& frame) {
  if (psi0.size() != frame.vectors.rows()) throw std::invalid_argument("project_initial: dimension mismatch");
  ComplexVector<Scalar> psi = psi0.template cast<std::complex<Scalar>>();
  ComplexVector<Scalar> c(psi.size());
  c.real() = frame.vectors.transpose() * psi.real();
  c.imag() = frame.vectors.transpose() * psi.imag();
  return c;
}

/// psi = V c.
template <typename Scalar = double>
ComplexVector<Scalar> to_fock(const EigenFrame<Scalar>& frame, const ComplexVector<Scalar>& c) {
  ComplexVector<Scalar> psi(c.size());
  psi.real() = frame.vectors * c.real();
  psi.imag() = frame.vectors * c.imag();
  return psi;
}

struct IntegratorOptions {
  double dt = 0;  // 0 selects default_time_step
  std::size_t samples = 512;
  double norm_drift_tol = 1e-9;
  bool halve_on_drift = true;
  int max_halvings = 8;
  std::vector<double> extra_times;
};

enum class AmplitudeFrame { Eigenbasis, Fock };

template <typename Scalar = double>
struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexVector<Scalar>> amplitudes;
  AmplitudeFrame frame = AmplitudeFrame::Fock;
  double dt = 0;
  double max_norm_drift = 0;
  std::size_t ramp_end = 0;  // index of t = tau

  std::size_t index_at(double t) const {
    const double scale = times.empty() ? 1.0 : std::max(1.0, times.back());
    auto it = std::lower_bound(times.begin(), times.end(), t - 1e-12 * scale);
    if (it == times.end() || std::abs(*it - t) > 1e-12 * scale) {
      throw std::out_of_range("trajectory has no sample at the requested time");
    }
    return static_cast<std::size_t>(it - times.begin());
  }
};

// min(0.005 / max(|U0|, |U1|), tau / 20000)
inline double default_time_step(const RampProtocol& protocol) {
  const double scale = std::max(std::abs(protocol.u_initial), std::abs(protocol.u_final));
  const double by_duration = protocol.duration / 20000.0;
  return scale > 0 ? std::min(0.005 / scale, by_duration) : by_duration;
}

// Uniform grid over [0, tau + hold] plus tau itself and any requested times.
inline std::vector<double> sample_times(const RampProtocol& protocol, const IntegratorOptions& options) {
  const double total = protocol.total_time();
  const std::size_t n = std::max<std::size_t>(options.samples, 2);
  std::vector<double> t;
  t.reserve(n + 1 + options.extra_times.size());
  for (std::size_t k = 0; k < n; ++k) t.push_back(total * static_cast<double>(k) / static_cast<double>(n - 1));
  t.back() = total;
  t.push_back(protocol.duration);
  for (double extra : options.extra_times) {
    if (!(extra >= 0) || extra > total * (1 + 1e-12)) {
      throw std::out_of_range("requested sample time outside [0, tau + hold]");
    }
    t.push_back(std::min(extra, total));
  }
  std::sort(t.begin(), t.end());
  const double eps = 1e-12 * std::max(1.0, total);
  t.erase(std::unique(t.begin(), t.end(), [eps](double a, double b) { return b - a <= eps; }), t.end());
  // Snap tau exactly so the clamped schedule is hit without round-off.
  for (double& x : t) {
    if (std::abs(x - protocol.duration) <= eps) x = protocol.duration;
  }
  return t;
}

// Complex amplitudes are propagated as a D x 2 real block (real, imaginary).
template <typename Scalar>
using SplitState = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

template <typename State>
struct Rk4Workspace {
  State k1, k2, k3, k4, probe;
};

/// One classical fourth-order Runge-Kutta step of dy/dt = rhs(t, y).
/// `rhs(t, y, out)` writes the derivative into `out`.
template <typename State, typename Rhs>
void integrate_step(Rhs&& rhs, double t, double dt, State& y, Rk4Workspace<State>& ws) {
  using S = typename State::Scalar;
  const S h = static_cast<S>(dt);
  if (ws.k1.rows() != y.rows() || ws.k1.cols() != y.cols()) {
    for (State* s : {&ws.k1, &ws.k2, &ws.k3, &ws.k4, &ws.probe}) s->resizeLike(y);
  }
  rhs(t, y, ws.k1);
  ws.probe = y + (h / 2) * ws.k1;
  rhs(t + dt / 2, ws.probe, ws.k2);
  ws.probe = y + (h / 2) * ws.k2;
  rhs(t + dt / 2, ws.probe, ws.k3);
  ws.probe = y + h * ws.k3;
  rhs(t + dt, ws.probe, ws.k4);
  y += (h / 6) * (ws.k1 + 2 * ws.k2 + 2 * ws.k3 + ws.k4);
}

namespace detail {

template <typename Scalar>
SplitState<Scalar> split(const ComplexVector<Scalar>& c) {
  SplitState<Scalar> y(c.size(), 2);
  y.col(0) = c.real();
  y.col(1) = c.imag();
  return y;
}

// e^{-i phase} (y_re + i y_im)
template <typename Scalar>
ComplexVector<Scalar> merge(const SplitState<Scalar>& y, double phase) {
  const std::complex<Scalar> rot = std::polar(Scalar(1), static_cast<Scalar>(-phase));
  ComplexVector<Scalar> c(y.rows());
  c.real() = y.col(0);
  c.imag() = y.col(1);
  return c * rot;
}

// Steps dy/dt = -i (A(t) - s) y across consecutive sample times, where
// rhs(t, y, out, s) evaluates the right-hand side for reference energy s.
//
// s is reset to <A> at the start of every sample interval. RK4 damps a
// component at energy E by roughly ((E - s) dt)^6 / 144 per step, so keeping
// s on the state's own energy keeps the norm error small even when the
// spectrum is wide. The discarded phase is exactly the integral of s, which
// is passed to `store(k, y, phase)`. Returns the largest norm drift seen, and
// stops early once it exceeds `abort_above`.
template <typename Scalar, typename Rhs, typename Store>
double march(Rhs&& rhs, SplitState<Scalar>& y, std::span<const double> times, std::size_t first, std::size_t last,
             double dt, double abort_above, Store&& store) {
  Rk4Workspace<SplitState<Scalar>> ws;
  SplitState<Scalar> probe(y.rows(), 2);
  const Scalar norm0 = y.norm();
  double drift = 0;
  double phase = 0;
  for (std::size_t k = first; k < last; ++k) {
    rhs(times[k], y, probe, Scalar(0));
    // out = -i A y in split form, so A y = (-out_im, out_re).
    const Scalar reference = (y.col(1).dot(probe.col(0)) - y.col(0).dot(probe.col(1))) / y.squaredNorm();
    auto shifted = [&](double t, const SplitState<Scalar>& in, SplitState<Scalar>& out) {
      rhs(t, in, out, reference);
    };
    const double span = times[k + 1] - times[k];
    const auto steps = static_cast<long>(std::max(1.0, std::ceil(span / dt - 1e-9)));
    const double h = span / static_cast<double>(steps);
    for (long s = 0; s < steps; ++s) {
      integrate_step(shifted, times[k] + static_cast<double>(s) * h, h, y, ws);
    }
    phase += static_cast<double>(reference) * span;
    drift = std::max(drift, static_cast<double>(std::abs(y.norm() - norm0)));
    if (drift > abort_above) return drift;
    store(k + 1, y, phase);
  }
  return drift;
}

template <typename Callback>
auto with_step_control(const RampProtocol& protocol, const IntegratorOptions& options, Callback&& attempt) {
  double dt = options.dt > 0 ? options.dt : default_time_step(protocol);
  for (int halvings = 0;; ++halvings) {
    auto result = attempt(dt);
    if (result.max_norm_drift <= options.norm_drift_tol) return result;
    if (!options.halve_on_drift || halvings >= options.max_halvings) {
      std::ostringstream msg;
      msg << "norm drift " << result.max_norm_drift << " exceeds tolerance " << options.norm_drift_tol
          << " at dt = " << dt << "; reduce the time step (--dt)";
      throw NumericalError(msg.str());
    }
    dt /= 2;
  }
}

}  // namespace detail

/// Propagates eigenbasis amplitudes through the ramp and the hold.
///
/// The ramp segment is integrated with fixed-step RK4. After tau the coupling vanishes and the hold is applied
/// analytically as c_alpha(t) = exp(-i E_alpha (t - tau)) c_alpha(tau).
template <typename Scalar = double>
Trajectory<Scalar> evolve_eigenbasis(const ComplexVector<Scalar>& c0, const EigenFrame<Scalar>& frame,
                                     const RampProtocol& protocol, const IntegratorOptions& options = {}) {
  if (c0.size() != frame.energies.size()) throw std::invalid_argument("evolve_eigenbasis: dimension mismatch");
  if (!std::is_permutation(protocol.ramped_sites.begin(), protocol.ramped_sites.end(), frame.ramped_sites.begin(),
                           frame.ramped_sites.end())) {
    throw std::invalid_argument("evolve_eigenbasis: protocol and frame ramp different sites");
  }

  const auto times = sample_times(protocol, options);
  const std::size_t ramp_end = static_cast<std::size_t>(
      std::find(times.begin(), times.end(), protocol.duration) - times.begin());

  return detail::with_step_control(protocol, options, [&](double dt) {
    Trajectory<Scalar> traj;
    traj.frame = AmplitudeFrame::Eigenbasis;
    traj.dt = dt;
    traj.times = times;
    traj.ramp_end = ramp_end;
    traj.amplitudes.resize(times.size());
    traj.amplitudes[0] = c0;

    SplitState<Scalar> work(c0.size(), 2);
    auto rhs = [&](double t, const SplitState<Scalar>& y, SplitState<Scalar>& out, Scalar reference) {
      const auto g = static_cast<Scalar>(residual_weight(protocol, t));
      work.noalias() = frame.coupling * y;
      work *= g;
      work.noalias() += (frame.energies.array() - reference).matrix().asDiagonal() * y;
      out.col(0) = work.col(1);
      out.col(1) = -work.col(0);
    };
    SplitState<Scalar> y = detail::split(c0);
    traj.max_norm_drift = detail::march<Scalar>(
        rhs, y, times, 0, ramp_end, dt, options.norm_drift_tol,
        [&](std::size_t k, const auto& s, double phase) { traj.amplitudes[k] = detail::merge<Scalar>(s, phase); });
    if (traj.max_norm_drift > options.norm_drift_tol) return traj;

    const ComplexVector<Scalar>& at_tau = traj.amplitudes[ramp_end];
    for (std::size_t k = ramp_end + 1; k < times.size(); ++k) {
      const double elapsed = times[k] - protocol.duration;
      ComplexVector<Scalar> c(at_tau.size());
      for (Eigen::Index a = 0; a < c.size(); ++a) {
        c(a) = at_tau(a) * std::polar(Scalar(1), static_cast<Scalar>(-frame.energies(a) * elapsed));
      }
      traj.amplitudes[k] = std::move(c);
    }
    return traj;
  });
}

/// Integrates i dpsi/dt = H(t) psi directly in the Fock basis.
///
/// H(t) is rebuilt at every stage from the sparse hopping and the schedule's
/// per-site interaction; the whole window [0, tau + hold] is integrated
/// numerically. `model` supplies L, N and J; its interaction vector is ignored.
template <typename Scalar = double, typename Derived>
Trajectory<Scalar> evolve_direct(const Eigen::MatrixBase<Derived>& psi0, const FockBasis& basis,
                                 const ModelParams<Scalar>& model, const RampProtocol& protocol,
                                 const IntegratorOptions& options = {}) {
  if (psi0.size() != static_cast<Eigen::Index>(basis.size())) {
    throw std::invalid_argument("evolve_direct: dimension mismatch");
  }
  if (model.sites != basis.sites() || protocol.sites != basis.sites()) {
    throw std::invalid_argument("evolve_direct: model, protocol and basis disagree on L");
  }

  const auto times = sample_times(protocol, options);
  const std::size_t ramp_end = static_cast<std::size_t>(
      std::find(times.begin(), times.end(), protocol.duration) - times.begin());

  const SparseMatrix<Scalar> hopping = build_hopping<Scalar>(basis, model.hopping);
  Matrix<Scalar> site_terms(static_cast<Eigen::Index>(basis.size()), basis.sites());
  for (int i = 0; i < basis.sites(); ++i) site_terms.col(i) = interaction_diagonal<Scalar>(basis, i);

  const ComplexVector<Scalar> start = psi0.template cast<std::complex<Scalar>>();

  return detail::with_step_control(protocol, options, [&](double dt) {
    Trajectory<Scalar> traj;
    traj.frame = AmplitudeFrame::Fock;
    traj.dt = dt;
    traj.times = times;
    traj.ramp_end = ramp_end;
    traj.amplitudes.resize(times.size());
    traj.amplitudes[0] = start;

    SplitState<Scalar> work(start.size(), 2);
    Vector<Scalar> diagonal(start.size());
    auto rhs = [&](double t, const SplitState<Scalar>& y, SplitState<Scalar>& out, Scalar reference) {
      diagonal.noalias() = site_terms * interaction_at(protocol, t).template cast<Scalar>();
      diagonal.array() -= reference;
      work.noalias() = hopping * y;
      work.noalias() += diagonal.asDiagonal() * y;
      out.col(0) = work.col(1);
      out.col(1) = -work.col(0);
    };
    SplitState<Scalar> y = detail::split(start);
    traj.max_norm_drift = detail::march<Scalar>(
        rhs, y, times, 0, times.size() - 1, dt, options.norm_drift_tol,
        [&](std::size_t k, const auto& s, double phase) { traj.amplitudes[k] = detail::merge<Scalar>(s, phase); });
    return traj;
  });
}

/// Fock-basis amplitudes of every sample, regardless of the trajectory's frame.
template <typename Scalar = double>
std::vector<ComplexVector<Scalar>> fock_amplitudes(const Trajectory<Scalar>& traj,
                                                   const EigenFrame<Scalar>* frame = nullptr) {
  if (traj.frame == AmplitudeFrame::Fock) return traj.amplitudes;
  if (frame == nullptr) throw std::invalid_argument("eigenbasis trajectory needs its frame to map to Fock space");
  std::vector<ComplexVector<Scalar>> out;
  out.reserve(traj.amplitudes.size());
  for (const auto& c : traj.amplitudes) out.push_back(to_fock(*frame, c));
  return out;
}

}  // namespace ionramp

#endif  // IONRAMP_EVOLVE_HPP
