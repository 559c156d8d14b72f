#pragma once

#include <Eigen/Dense>
#include <complex>

namespace spinnav {

// Collective system of N spin-1/2 particles restricted to the maximum-J
// symmetric sector (J = N/2). The drift Hamiltonian is
//
//   H0(t) = xi Jz^2 - A t Jz
//
// and a transverse field omega(t) couples adjacent symmetric states through
// Jx. All quantities use the pulse-width time unit T: xi in 1/T, A in 1/T^2,
// energies in 1/T.
struct SystemParams {
  int N = 1;         // particle count
  double xi = 1.0;   // nonlinear coupling [1/T]
  double A = 1.0;    // sweep rate [1/T^2], real and positive

  double J() const { return 0.5 * N; }
  int dim() const { return N + 1; }

  // throws std::invalid_argument unless N >= 1, xi > 0, A > 0
  void validate() const;
};

// Symmetric states are labeled by the excitation number n = 0..N; the
// angular-momentum projection is m = -J + n.
void check_state_index(const SystemParams& p, int n);
double projection_m(const SystemParams& p, int n);

// Diabatic energy E_n(t) = m^2 xi - m A t.
double energy(const SystemParams& p, int n, double t);

// Time at which the diabatic energies of |n> and |k> coincide,
// t_nk = (n + k - N) xi / A. Symmetric in (n, k); n == k is an error.
double crossing_time(const SystemParams& p, int n, int k);

// Rabi-frequency factor sqrt(J(J+1) - m(m+1)) of the direct coupling between
// |n> and |n+1>; the full coupling is this factor times omega(t). The matrix
// element of omega Jx is half of it.
double coupling_factor(const SystemParams& p, int n);

// Hermitian tridiagonal operator in the symmetric basis. The drift part is
// real, so the off-diagonal band is stored real; complex-banded Hamiltonians
// (rotating transverse phases) are handled by the dynamics module directly.
struct TridiagonalHamiltonian {
  Eigen::VectorXd diag;   // (N+1) entries
  Eigen::VectorXd upper;  // N entries, <n|H|n+1>

  Eigen::MatrixXcd dense() const;
};

// H(t) = xi Jz^2 - A t Jz + omega Jx with the exact Jx matrix elements
// (half the coupling_factor on the off-diagonal band).
TridiagonalHamiltonian build_hamiltonian(const SystemParams& p, double omega, double t);

// Jz is diagonal with entries m; Jx has zero diagonal and a real symmetric
// band, returned as its superdiagonal.
Eigen::VectorXd jz_diagonal(const SystemParams& p);
Eigen::VectorXd jx_upper(const SystemParams& p);

enum class TargetState { product_down, product_up, w_low, w_high, ghz };

// Unit-norm amplitude vectors of the named targets:
//   product_down = e_0, product_up = e_N, w_low = e_1, w_high = e_{N-1},
//   ghz = (e_0 + e_N)/sqrt(2).
Eigen::VectorXcd named_state(const SystemParams& p, TargetState which);

}  // namespace spinnav
