#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "spinnav/system.hpp"

using namespace spinnav;

TEST_SUITE("system") {

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((SystemParams{0, 1.0, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((SystemParams{4, -1.0, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((SystemParams{4, 1.0, 0.0}).validate(), std::invalid_argument);
  CHECK_NOTHROW((SystemParams{1, 0.5, 2.0}).validate());
}

TEST_CASE("diabatic energies") {
  const SystemParams p{4, 20.0, 5.0};
  // m = 0 level is flat
  CHECK(energy(p, 2, 0.0) == 0.0);
  CHECK(energy(p, 2, 17.3) == 0.0);
  // m = -2 at t = 0: m^2 xi = 4 * 20
  CHECK(energy(p, 0, 0.0) == doctest::Approx(80.0).epsilon(1e-14));
  // the m <-> -m partner is degenerate at t = 0
  CHECK(energy(p, 4, 0.0) == doctest::Approx(80.0).epsilon(1e-14));
  CHECK_THROWS_AS(energy(p, 5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(energy(p, -1, 0.0), std::invalid_argument);
}

TEST_CASE("crossing times") {
  const SystemParams p{4, 20.0, 5.0};
  CHECK(crossing_time(p, 0, 4) == 0.0);                                // field zero
  CHECK(crossing_time(p, 0, 1) == doctest::Approx(-12.0));             // -(N-1) xi/A
  CHECK(crossing_time(p, 1, 4) == doctest::Approx(4.0));               // xi/A, N-independent
  CHECK(crossing_time(p, 1, 4) == crossing_time(p, 4, 1));             // symmetric
  CHECK_THROWS_AS(crossing_time(p, 2, 2), std::invalid_argument);

  // t_1N = xi/A for any N
  for (int N : {2, 3, 7, 11}) {
    const SystemParams q{N, 20.0, 5.0};
    CHECK(crossing_time(q, 1, N) == doctest::Approx(4.0));
  }
}

TEST_CASE("coupling factors") {
  const SystemParams p{4, 20.0, 5.0};
  CHECK(coupling_factor(p, 0) == doctest::Approx(2.0).epsilon(1e-14));  // sqrt(6 - 2)
  const SystemParams two_level{1, 1.0, 1.0};
  CHECK(coupling_factor(two_level, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(coupling_factor(p, 4), std::invalid_argument);

  // m <-> -(m+1) symmetry: factor(n) = factor(N-1-n)
  for (int N : {2, 4, 5, 9}) {
    const SystemParams q{N, 3.0, 1.0};
    for (int n = 0; n < N; ++n) CHECK(coupling_factor(q, n) == coupling_factor(q, N - 1 - n));
  }
}

TEST_CASE("hamiltonian structure") {
  const SystemParams p{4, 20.0, 5.0};

  SUBCASE("zero transverse field is diagonal") {
    const auto h = build_hamiltonian(p, 0.0, 1.3);
    CHECK(h.upper.cwiseAbs().maxCoeff() == 0.0);
    for (int n = 0; n <= 4; ++n) CHECK(h.diag(n) == energy(p, n, 1.3));
  }

  SUBCASE("two-level closed form") {
    const SystemParams q{1, 3.2, 1.7};
    const double omega = 2.3, t = 0.9;
    const auto h = build_hamiltonian(q, omega, t);
    CHECK(h.diag(0) == doctest::Approx(3.2 / 4 + 1.7 * t / 2).epsilon(1e-14));
    CHECK(h.diag(1) == doctest::Approx(3.2 / 4 - 1.7 * t / 2).epsilon(1e-14));
    CHECK(h.upper(0) == doctest::Approx(omega / 2).epsilon(1e-14));
  }

  SUBCASE("diagonal at t = 0 with the scan parameters") {
    const auto h = build_hamiltonian(p, 0.0, 0.0);
    const double expected[] = {80.0, 20.0, 0.0, 20.0, 80.0};
    for (int n = 0; n <= 4; ++n) CHECK(h.diag(n) == doctest::Approx(expected[n]));
  }

  SUBCASE("dense form is Hermitian and tridiagonal") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.1, 50.0);
    std::uniform_real_distribution<double> v(-30.0, 30.0);
    for (int trial = 0; trial < 20; ++trial) {
      const SystemParams q{1 + static_cast<int>(rng() % 9), u(rng), u(rng)};
      const auto h = build_hamiltonian(q, v(rng), v(rng));
      const Eigen::MatrixXcd d = h.dense();
      CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() == 0.0);
      for (int r = 0; r < d.rows(); ++r)
        for (int col = 0; col < d.cols(); ++col)
          if (std::abs(r - col) > 1) CHECK(std::abs(d(r, col)) == 0.0);
    }
  }
}

TEST_CASE("degeneracy at every crossing") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.1, 100.0);
  for (int N = 1; N <= 10; ++N) {
    const SystemParams p{N, u(rng), u(rng)};
    for (int n = 0; n <= N; ++n) {
      for (int k = n + 1; k <= N; ++k) {
        const double t = crossing_time(p, n, k);
        const double en = energy(p, n, t);
        const double ek = energy(p, k, t);
        const double scale = std::max({1.0, std::fabs(en), std::fabs(ek)});
        CHECK(std::fabs(en - ek) <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("crossings are equidistant") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(0.1, 100.0);
  for (int N = 1; N <= 10; ++N) {
    const SystemParams p{N, u(rng), u(rng)};
    const double tau = p.xi / p.A;
    std::vector<double> times;
    for (int n = 0; n <= N; ++n)
      for (int k = n + 1; k <= N; ++k) times.push_back(crossing_time(p, n, k));
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end(),
                            [&](double a, double b) { return std::fabs(a - b) < 1e-9 * tau; }),
                times.end());
    CHECK(times.size() == static_cast<std::size_t>(2 * N - 1));
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
      CHECK(times[i + 1] - times[i] == doctest::Approx(tau).epsilon(1e-12));
    // pairs with the same n + k cross at the same time
    if (N >= 3) CHECK(crossing_time(p, 0, 3) == crossing_time(p, 1, 2));
  }
}

TEST_CASE("mirror symmetry n -> N-n, t -> -t") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.1, 40.0);
  std::uniform_real_distribution<double> v(-20.0, 20.0);
  for (int trial = 0; trial < 30; ++trial) {
    const SystemParams p{1 + static_cast<int>(rng() % 10), u(rng), u(rng)};
    const double t = v(rng);
    for (int n = 0; n <= p.N; ++n) CHECK(energy(p, n, t) == energy(p, p.N - n, -t));
    const auto jx = jx_upper(p);
    for (int n = 0; n < p.N; ++n) CHECK(jx(n) == jx(p.N - 1 - n));
  }
}

TEST_CASE("angular momentum operators") {
  const SystemParams p{4, 1.0, 1.0};
  const auto jz = jz_diagonal(p);
  for (int n = 0; n <= 4; ++n) CHECK(jz(n) == doctest::Approx(-2.0 + n));
  const auto jx = jx_upper(p);
  for (int n = 0; n < 4; ++n)
    CHECK(jx(n) == doctest::Approx(0.5 * coupling_factor(p, n)).epsilon(1e-14));
}

TEST_CASE("named states") {
  const SystemParams p{4, 20.0, 5.0};
  const auto down = named_state(p, TargetState::product_down);
  CHECK(down(0) == std::complex<double>(1.0, 0.0));
  CHECK(down.tail(4).cwiseAbs().maxCoeff() == 0.0);

  const auto ghz = named_state(p, TargetState::ghz);
  CHECK(ghz(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(ghz(4).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(ghz.squaredNorm() == doctest::Approx(1.0).epsilon(1e-15));

  const SystemParams three{3, 1.0, 1.0};
  const auto w = named_state(three, TargetState::w_low);
  CHECK(w(1) == std::complex<double>(1.0, 0.0));
  CHECK(std::abs(w(0)) + std::abs(w(2)) + std::abs(w(3)) == 0.0);

  const auto up = named_state(p, TargetState::product_up);
  CHECK(up(4) == std::complex<double>(1.0, 0.0));
  const auto wh = named_state(p, TargetState::w_high);
  CHECK(wh(3) == std::complex<double>(1.0, 0.0));
}

}  // TEST_SUITE
