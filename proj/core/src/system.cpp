#include "spinnav/system.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spinnav {

void SystemParams::validate() const {
  if (N < 1) throw std::invalid_argument("SystemParams: N must be >= 1, got " + std::to_string(N));
  if (!(xi > 0.0) || !std::isfinite(xi))
    throw std::invalid_argument("SystemParams: xi must be positive and finite");
  if (!(A > 0.0) || !std::isfinite(A))
    throw std::invalid_argument("SystemParams: A must be positive and finite");
}

void check_state_index(const SystemParams& p, int n) {
  if (n < 0 || n > p.N)
    throw std::invalid_argument("state index n = " + std::to_string(n) + " outside 0.." +
                                std::to_string(p.N));
}

double projection_m(const SystemParams& p, int n) {
  check_state_index(p, n);
  return -p.J() + n;
}

double energy(const SystemParams& p, int n, double t) {
  const double m = projection_m(p, n);
  return m * m * p.xi - m * p.A * t;
}

double crossing_time(const SystemParams& p, int n, int k) {
  check_state_index(p, n);
  check_state_index(p, k);
  if (n == k) throw std::invalid_argument("crossing_time: n == k, no crossing defined");
  return (n + k - p.N) * p.xi / p.A;
}

double coupling_factor(const SystemParams& p, int n) {
  check_state_index(p, n);
  if (n == p.N)
    throw std::invalid_argument("coupling_factor: n = N has no upper neighbor");
  const double J = p.J();
  const double m = -J + n;
  return std::sqrt(J * (J + 1.0) - m * (m + 1.0));
}

Eigen::MatrixXcd TridiagonalHamiltonian::dense() const {
  const Eigen::Index d = diag.size();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) h(i, i) = diag(i);
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    h(i, i + 1) = upper(i);
    h(i + 1, i) = upper(i);
  }
  return h;
}

TridiagonalHamiltonian build_hamiltonian(const SystemParams& p, double omega, double t) {
  p.validate();
  if (!std::isfinite(omega) || !std::isfinite(t))
    throw std::invalid_argument("build_hamiltonian: omega and t must be finite");
  TridiagonalHamiltonian h;
  h.diag.resize(p.dim());
  h.upper.resize(p.N);
  for (int n = 0; n <= p.N; ++n) h.diag(n) = energy(p, n, t);
  for (int n = 0; n < p.N; ++n) h.upper(n) = 0.5 * omega * coupling_factor(p, n);
  return h;
}

Eigen::VectorXd jz_diagonal(const SystemParams& p) {
  Eigen::VectorXd d(p.dim());
  for (int n = 0; n <= p.N; ++n) d(n) = -p.J() + n;
  return d;
}

Eigen::VectorXd jx_upper(const SystemParams& p) {
  Eigen::VectorXd u(p.N);
  for (int n = 0; n < p.N; ++n) u(n) = 0.5 * coupling_factor(p, n);
  return u;
}

Eigen::VectorXcd named_state(const SystemParams& p, TargetState which) {
  p.validate();
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(p.dim());
  switch (which) {
    case TargetState::product_down: v(0) = 1.0; break;
    case TargetState::product_up: v(p.N) = 1.0; break;
    case TargetState::w_low: v(1) = 1.0; break;
    case TargetState::w_high: v(p.N - 1) = 1.0; break;
    case TargetState::ghz: {
      const double r = 1.0 / std::sqrt(2.0);
      v(0) = r;
      v(p.N) = r;
      break;
    }
  }
  return v;
}

}  // namespace spinnav
