#include "spinnav/dynamics.hpp"

#include <algorithm>
#include <boost/numeric/odeint/stepper/controlled_runge_kutta.hpp>
#include <boost/numeric/odeint/stepper/generation.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "spinnav/errors.hpp"

namespace spinnav {

namespace {

namespace ode = boost::numeric::odeint;
using cdouble = std::complex<double>;
using OdeState = std::vector<cdouble>;

constexpr cdouble kImag{0.0, 1.0};

// One output/event instant. Rotations attached to a mark are applied before
// the state is recorded there.
struct Mark {
  double t;
  std::vector<int> rotations;
};

std::vector<Mark> build_marks(std::pair<double, double> window, double sample_dt,
                              const std::vector<Rotation>& rotations) {
  const auto [t0, t1] = window;
  const double span = t1 - t0;
  long n = std::lround(std::ceil(span / sample_dt));
  n = std::clamp(n, 1L, 1000000L);
  std::vector<Mark> marks;
  marks.reserve(n + 1 + rotations.size());
  for (long i = 0; i <= n; ++i) marks.push_back({t0 + span * i / n, {}});
  marks.back().t = t1;  // exact endpoint

  const double eps = 1e-12 * std::max(1.0, std::fabs(t0) + std::fabs(t1));
  for (std::size_t r = 0; r < rotations.size(); ++r) {
    const double tr = rotations[r].t;
    if (tr < t0 - eps || tr > t1 + eps)
      throw std::invalid_argument("rotation time outside the integration window");
    auto it = std::lower_bound(marks.begin(), marks.end(), tr - eps,
                               [](const Mark& m, double v) { return m.t < v; });
    if (it != marks.end() && std::fabs(it->t - tr) <= eps) {
      it->rotations.push_back(static_cast<int>(r));
    } else {
      marks.insert(it, Mark{tr, {static_cast<int>(r)}});
    }
  }
  return marks;
}

void apply_rotation(const Rotation& rot, OdeState& psi) {
  const double c = std::cos(0.5 * rot.angle);
  const double s = std::sin(0.5 * rot.angle);
  const cdouble va = psi[rot.a];
  const cdouble vb = psi[rot.b];
  psi[rot.a] = c * va - s * vb;
  psi[rot.b] = s * va + c * vb;
}

void check_rotation_indices(const std::vector<Rotation>& rotations, int dim) {
  for (const auto& r : rotations) {
    r.validate();
    if (r.a >= dim || r.b >= dim)
      throw std::invalid_argument("rotation subspace index outside the state space");
  }
}

double auto_sample_dt(const Schedule& s, std::pair<double, double> window) {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& p : s.pulses) w = std::min(w, p.feature_width());
  if (!std::isfinite(w)) return (window.second - window.first) / 200.0;
  return w / 10.0;
}

struct Recorder {
  SimulationResult result;
  int dim;
  long row = 0;

  Recorder(int dim_, std::size_t n_marks) : dim(dim_) {
    result.times.reserve(n_marks);
    result.amplitudes.resize(static_cast<Eigen::Index>(n_marks), dim);
    result.populations.resize(static_cast<Eigen::Index>(n_marks), dim);
  }

  void record(double t, const OdeState& psi) {
    result.times.push_back(t);
    double norm2 = 0.0;
    for (int n = 0; n < dim; ++n) {
      result.amplitudes(row, n) = psi[n];
      const double pop = std::norm(psi[n]);
      result.populations(row, n) = pop;
      norm2 += pop;
    }
    result.norm_drift = std::max(result.norm_drift, std::fabs(norm2 - 1.0));
    ++row;
  }

  void finish(const OdeState& psi, std::pair<double, double> window, double tol) {
    result.final_state.resize(dim);
    for (int n = 0; n < dim; ++n) result.final_state(n) = psi[n];
    result.window = window;
    result.error_estimate =
        std::max(result.norm_drift, tol * static_cast<double>(std::max(1L, result.steps_accepted)));
  }
};

}  // namespace

StateVector basis_state(const SystemParams& p, int n) {
  check_state_index(p, n);
  StateVector v = StateVector::Zero(p.dim());
  v(n) = 1.0;
  return v;
}

void check_unit_norm(const StateVector& psi, double tol) {
  const double n2 = psi.squaredNorm();
  if (!std::isfinite(n2) || std::fabs(n2 - 1.0) > tol)
    throw std::invalid_argument("state vector is not unit norm (||psi||^2 = " +
                                std::to_string(n2) + ")");
}

std::pair<double, double> default_window(const SystemParams& p, const Schedule& s) {
  p.validate();
  const double tau = p.xi / p.A;
  double lo = -(p.N - 1) * tau;
  double hi = +(p.N - 1) * tau;
  if (p.N == 1) lo = hi = 0.0;  // single crossing at the field zero
  double pad = 0.0;
  for (const auto& pulse : s.pulses) {
    lo = std::min(lo, pulse.t0);
    hi = std::max(hi, pulse.t0);
    pad = std::max(pad, pulse.feature_width());
  }
  for (const auto& r : s.rotations) {
    lo = std::min(lo, r.t);
    hi = std::max(hi, r.t);
  }
  if (pad == 0.0) pad = tau / 5.0;
  return {lo - 8.0 * pad, hi + 8.0 * pad};
}

SimulationResult propagate_tridiagonal(const TridiagonalFn& ham, int dim,
                                       const std::vector<Rotation>& rotations,
                                       std::pair<double, double> window,
                                       const StateVector& psi0, const PropagationOptions& opts) {
  if (dim < 1) throw std::invalid_argument("propagate: dimension must be >= 1");
  if (psi0.size() != dim) throw std::invalid_argument("propagate: psi0 has wrong dimension");
  check_unit_norm(psi0);
  check_rotation_indices(rotations, dim);
  const auto [t0, t1] = window;
  if (!(t0 < t1)) throw std::invalid_argument("propagate: window must satisfy t_start < t_end");
  const double span = t1 - t0;

  double sample_dt = opts.sample_dt;
  if (sample_dt <= 0.0) sample_dt = span / 200.0;
  const auto marks = build_marks(window, sample_dt, rotations);

  Eigen::VectorXd diag(dim);
  Eigen::VectorXcd upper(std::max(0, dim - 1));
  auto rhs = [&](const OdeState& x, OdeState& dxdt, double t) {
    ham(t, diag, upper);
    for (int n = 0; n < dim; ++n) {
      cdouble acc = diag(n) * x[n];
      if (n + 1 < dim) acc += upper(n) * x[n + 1];
      if (n > 0) acc += std::conj(upper(n - 1)) * x[n - 1];
      dxdt[n] = -kImag * acc;
    }
  };

  OdeState psi(psi0.data(), psi0.data() + dim);
  Recorder rec(dim, marks.size());

  // the controller runs well below the requested tolerance so that the
  // error accumulated over a full window stays near tol itself
  const double ctol = 0.01 * opts.tol;
  auto stepper = ode::make_controlled(ctol, ctol, ode::runge_kutta_fehlberg78<OdeState>());
  const double min_dt = 1e-14 * std::max(1.0, span);
  double dt = std::min(sample_dt, span / 1000.0);
  double t = t0;
  rec.result.min_step = span;

  for (const auto& mark : marks) {
    while (t < mark.t) {
      // clip to the mark without letting the boundary sliver feed back into
      // the running step size
      const bool clipped = dt >= mark.t - t;
      double dt_try = clipped ? mark.t - t : dt;
      const auto outcome = stepper.try_step(rhs, psi, t, dt_try);
      if (outcome == ode::success) {
        ++rec.result.steps_accepted;
        rec.result.min_step = std::min(rec.result.min_step, dt_try);
        double n2 = 0.0;
        for (const auto& c : psi) n2 += std::norm(c);
        if (!std::isfinite(n2))
          throw NumericalError("propagate: non-finite amplitude (numerical blow-up)", t);
        if (!clipped) dt = dt_try;  // controller suggestion for the next step
      } else {
        ++rec.result.steps_rejected;
        dt = dt_try;  // reduced by the controller
        if (dt < min_dt) throw NumericalError("propagate: step size underflow", t);
      }
    }
    for (int ri : mark.rotations) apply_rotation(rotations[ri], psi);
    rec.record(mark.t, psi);
  }
  rec.finish(psi, window, opts.tol);
  return rec.result;
}

namespace {

// Hamiltonian source for H(t) = xi Jz^2 - A t Jz + omega(t) Jx
struct DriftPlusPulses {
  Eigen::VectorXd m_sq_xi;  // m^2 xi
  Eigen::VectorXd m_A;      // m A
  Eigen::VectorXd half_f;   // Jx band
  const Schedule* schedule;

  DriftPlusPulses(const SystemParams& p, const Schedule& s) : schedule(&s) {
    m_sq_xi.resize(p.dim());
    m_A.resize(p.dim());
    for (int n = 0; n <= p.N; ++n) {
      const double m = -p.J() + n;
      m_sq_xi(n) = m * m * p.xi;
      m_A(n) = m * p.A;
    }
    half_f = jx_upper(p);
  }

  void operator()(double t, Eigen::VectorXd& diag, Eigen::VectorXcd& upper) const {
    const double om = amplitude(*schedule, t);
    diag = m_sq_xi - m_A * t;
    for (Eigen::Index n = 0; n < half_f.size(); ++n) upper(n) = om * half_f(n);
  }
};

std::pair<double, double> resolve_window(const SystemParams& p, const Schedule& s,
                                         const PropagationOptions& opts) {
  if (opts.window) return *opts.window;
  if (s.window) return *s.window;
  return default_window(p, s);
}

double resolve_sample_dt(const Schedule& s, std::pair<double, double> window,
                         const PropagationOptions& opts) {
  if (opts.sample_dt > 0.0) return opts.sample_dt;
  return auto_sample_dt(s, window);
}

}  // namespace

SimulationResult propagate(const SystemParams& p, const Schedule& s, const StateVector& psi0,
                           const PropagationOptions& opts) {
  p.validate();
  s.validate();
  if (psi0.size() != p.dim())
    throw std::invalid_argument("propagate: psi0 dimension does not match N+1");
  const auto window = resolve_window(p, s, opts);
  PropagationOptions local = opts;
  local.sample_dt = resolve_sample_dt(s, window, opts);
  const DriftPlusPulses ham(p, s);
  return propagate_tridiagonal(ham, p.dim(), s.rotations, window, psi0, local);
}

SimulationResult propagate_reference(const SystemParams& p, const Schedule& s,
                                     const StateVector& psi0, double dt,
                                     const PropagationOptions& opts) {
  p.validate();
  s.validate();
  if (psi0.size() != p.dim())
    throw std::invalid_argument("propagate_reference: psi0 dimension does not match N+1");
  check_unit_norm(psi0);
  check_rotation_indices(s.rotations, p.dim());
  const auto window = resolve_window(p, s, opts);
  const auto [t0, t1] = window;
  const double span = t1 - t0;
  if (!(dt > 0.0)) throw std::invalid_argument("propagate_reference: dt must be > 0");
  if (dt > span) throw std::invalid_argument("propagate_reference: dt larger than the window");

  const double sample_dt = resolve_sample_dt(s, window, opts);
  const auto marks = build_marks(window, sample_dt, s.rotations);

  const int dim = p.dim();
  const Eigen::VectorXd half_f = jx_upper(p);
  Eigen::VectorXd m_sq_xi(dim), m_A(dim);
  for (int n = 0; n < dim; ++n) {
    const double m = -p.J() + n;
    m_sq_xi(n) = m * m * p.xi;
    m_A(n) = m * p.A;
  }

  OdeState psi(psi0.data(), psi0.data() + dim);
  Recorder rec(dim, marks.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  Eigen::VectorXcd v(dim), w(dim);
  Eigen::VectorXd diag(dim), sub(std::max(0, dim - 1));

  double t = t0;
  rec.result.min_step = span;
  for (const auto& mark : marks) {
    const double seg = mark.t - t;
    if (seg > 0.0) {
      const long nsub = std::max(1L, std::lround(std::ceil(seg / dt)));
      const double h = seg / nsub;
      for (int n = 0; n < dim; ++n) v(n) = psi[static_cast<std::size_t>(n)];
      for (long k = 0; k < nsub; ++k) {
        const double tm = t + (k + 0.5) * h;
        const double om = amplitude(s, tm);
        diag = m_sq_xi - m_A * tm;
        sub = om * half_f;
        if (dim == 1) {
          v(0) *= std::exp(-kImag * diag(0) * h);
        } else {
          solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
          w.noalias() = solver.eigenvectors().transpose() * v;
          for (int n = 0; n < dim; ++n) w(n) *= std::exp(-kImag * solver.eigenvalues()(n) * h);
          v.noalias() = solver.eigenvectors() * w;
        }
        ++rec.result.steps_accepted;
      }
      rec.result.min_step = std::min(rec.result.min_step, h);
      for (int n = 0; n < dim; ++n) psi[static_cast<std::size_t>(n)] = v(n);
      t = mark.t;
    }
    for (int ri : mark.rotations) apply_rotation(s.rotations[ri], psi);
    rec.record(mark.t, psi);
  }
  rec.finish(psi, window, 0.0);
  return rec.result;
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("fidelity: dimension mismatch");
  check_unit_norm(a, 1e-6);
  check_unit_norm(b, 1e-6);
  return std::norm(a.dot(b));
}

double fidelity_phase_optimized(const StateVector& a, const StateVector& b, int i, int j) {
  if (a.size() != b.size()) throw std::invalid_argument("fidelity: dimension mismatch");
  if (i == j || i < 0 || j < 0 || i >= a.size() || j >= a.size())
    throw std::invalid_argument("fidelity_phase_optimized: bad component pair");
  check_unit_norm(a, 1e-6);
  check_unit_norm(b, 1e-6);
  cdouble rest = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k)
    if (k != j) rest += std::conj(a(k)) * b(k);
  const cdouble tj = std::conj(a(j)) * b(j);
  const double r = std::abs(rest) + std::abs(tj);
  return r * r;
}

GhzScore score_ghz(const SystemParams& p, const StateVector& psi) {
  p.validate();
  if (psi.size() != p.dim()) throw std::invalid_argument("score_ghz: dimension mismatch");
  const cdouble c0 = psi(0);
  const cdouble cN = psi(p.N);
  GhzScore score;
  score.raw = 0.5 * std::norm(c0 + cN);
  const double r = std::abs(c0) + std::abs(cN);
  score.optimized = 0.5 * r * r;
  score.relative_phase =
      (std::abs(c0) > 0.0 && std::abs(cN) > 0.0) ? std::arg(cN) - std::arg(c0) : 0.0;
  if (score.relative_phase > M_PI) score.relative_phase -= 2.0 * M_PI;
  if (score.relative_phase <= -M_PI) score.relative_phase += 2.0 * M_PI;
  return score;
}

}  // namespace spinnav
