#include <doctest.h>

#include <cmath>

#include "spinnav/physmap.hpp"

using namespace spinnav;

TEST_SUITE("physmap") {

TEST_CASE("ion trap nonlinearity") {
  SUBCASE("nu = 2 delta closed form") {
    // 2 eta^2 omega^2 (2 delta) / (3 delta^2) = 4 eta^2 omega^2 / (3 delta)
    IonTrapParams p{0.1, 5.0, 6.0, 3.0};
    const auto m = ion_trap_xi(p);
    CHECK(m.xi == doctest::Approx(4.0 * 0.01 * 25.0 / 9.0).epsilon(1e-14));
    CHECK_FALSE(m.negative_xi);
  }

  SUBCASE("no motional coupling, no nonlinearity") {
    IonTrapParams p{0.0, 5.0, 6.0, 3.0};
    CHECK(ion_trap_xi(p).xi == 0.0);
  }

  SUBCASE("xi is quadratic in the Lamb-Dicke parameter") {
    IonTrapParams p{0.2, 5.0, 6.0, 3.0};
    IonTrapParams q = p;
    q.eta = p.eta / std::sqrt(2.0);
    CHECK(ion_trap_xi(q).xi == doctest::Approx(0.5 * ion_trap_xi(p).xi).epsilon(1e-14));
  }

  SUBCASE("pole and sign flip at delta = nu") {
    IonTrapParams p{0.1, 5.0, 6.0, 6.0};
    CHECK_THROWS_AS(ion_trap_xi(p), std::invalid_argument);
    p.delta = 6.0 - 1e-6;
    CHECK(ion_trap_xi(p).xi > 0.0);
    p.delta = 6.0 + 1e-6;
    const auto m = ion_trap_xi(p);
    CHECK(m.xi < 0.0);
    CHECK(m.negative_xi);
  }

  SUBCASE("weak detuning raises a warning") {
    IonTrapParams p{0.1, 5.0, 6.0, 3.0};
    CHECK(ion_trap_xi(p).weak_detuning_warning);  // delta <= omega_laser
    p.delta = 50.0;
    p.nu = 60.0;
    CHECK_FALSE(ion_trap_xi(p).weak_detuning_warning);
  }

  SUBCASE("invalid inputs") {
    CHECK_THROWS_AS(ion_trap_xi(IonTrapParams{0.1, 5.0, 0.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(ion_trap_xi(IonTrapParams{0.1, 5.0, 6.0, -1.0}), std::invalid_argument);
  }
}

TEST_CASE("BEC effective parameters") {
  SUBCASE("the scan-parameter value") {
    BecParams p{3.0, 1.0, 25.0, 25.0, 10.0};
    const auto eff = bec_effective_params(p);
    CHECK(eff.xi == doctest::Approx(20.0).epsilon(1e-14));  // U - U_ab/2
    CHECK(eff.alpha == doctest::Approx(2.0).epsilon(1e-14));
  }

  SUBCASE("U = U_ab/2 kills the nonlinearity") {
    BecParams p{0.0, 0.0, 5.0, 5.0, 10.0};
    CHECK(bec_effective_params(p).xi == 0.0);
  }

  SUBCASE("equal mode energies give no linear term") {
    BecParams p{2.0, 2.0, 25.0, 25.0, 10.0};
    CHECK(bec_effective_params(p).alpha == 0.0);
  }

  SUBCASE("unequal scattering lengths are refused") {
    BecParams p{0.0, 0.0, 25.0, 24.0, 10.0};
    CHECK_THROWS_AS(bec_effective_params(p), std::domain_error);
  }
}

TEST_CASE("chirp design") {
  const Chirp none = design_chirp(0.0, 0.0);
  CHECK(none.phase(3.7) == 0.0);

  const Chirp c = design_chirp(2.5, 5.0);
  CHECK(c.rate(0.0) == doctest::Approx(2.5));           // rate starts at alpha
  CHECK(design_chirp(0.0, 5.0).phase(2.0) == doctest::Approx(10.0));

  // alpha - rate(t) = -A t identically
  for (double t = -10.0; t <= 10.0; t += 0.25)
    CHECK(std::fabs((c.alpha - c.rate(t)) - (-5.0 * t)) <= 1e-12 * std::max(1.0, 5.0 * std::fabs(t)));
}

TEST_CASE("lab frame and rotating frame agree") {
  const BecParams bec{3.0, 1.0, 25.0, 25.0, 10.0};  // xi = 20, alpha = 2

  SUBCASE("no coupling: frames agree trivially") {
    Schedule s;
    s.window = {{-2.0, 2.0}};
    const SystemParams p{2, 20.0, 5.0};
    const auto psi0 = basis_state(p, 0);
    CHECK(bec_lab_frame_check(bec, 2, 5.0, s, psi0, 1e-10) <= 1e-10);
  }

  SUBCASE("driven two-particle dynamics") {
    Schedule s;
    s.pulses.push_back(Pulse::make_gaussian(25.0, 0.0, 0.5));
    const SystemParams p{2, 20.0, 5.0};
    const double dev = bec_lab_frame_check(bec, 2, 5.0, s, basis_state(p, 0), 1e-9);
    CHECK(dev <= 1e-6);
  }

  SUBCASE("frame equivalence holds up to four particles") {
    Schedule s;
    s.pulses.push_back(Pulse::make_gaussian(30.0, 0.0, 0.4));
    for (int N = 1; N <= 4; ++N) {
      const SystemParams p{N, 20.0, 5.0};
      CHECK(bec_lab_frame_check(bec, N, 5.0, s, basis_state(p, 0), 1e-9) <= 1e-6);
    }
  }

  SUBCASE("a common offset on both mode energies changes nothing") {
    Schedule s;
    s.pulses.push_back(Pulse::make_gaussian(25.0, 0.0, 0.5));
    const SystemParams p{2, 20.0, 5.0};
    const double base = bec_lab_frame_check(bec, 2, 5.0, s, basis_state(p, 0), 1e-9);
    BecParams lifted = bec;
    lifted.E_a += 7.0;
    lifted.E_b += 7.0;
    const double shifted = bec_lab_frame_check(lifted, 2, 5.0, s, basis_state(p, 0), 1e-9);
    CHECK(shifted == base);  // alpha unchanged, bit-identical runs
  }

  SUBCASE("refusals") {
    Schedule s;
    s.window = {{-1.0, 1.0}};
    const SystemParams p{2, 20.0, 5.0};
    BecParams uneven = bec;
    uneven.U_bb = 24.0;
    CHECK_THROWS_AS(bec_lab_frame_check(uneven, 2, 5.0, s, basis_state(p, 0), 1e-9),
                    std::domain_error);
    BecParams flat = bec;
    flat.U_aa = flat.U_bb = 5.0;  // xi = 0
    CHECK_THROWS_AS(bec_lab_frame_check(flat, 2, 5.0, s, basis_state(p, 0), 1e-9),
                    std::domain_error);
    Schedule with_rot = s;
    Rotation r;
    r.t = 0.0;
    r.a = 0;
    r.b = 1;
    r.angle = M_PI / 2;
    with_rot.rotations.push_back(r);
    CHECK_THROWS_AS(bec_lab_frame_check(bec, 2, 5.0, with_rot, basis_state(p, 0), 1e-9),
                    std::invalid_argument);
  }
}

}  // TEST_SUITE
