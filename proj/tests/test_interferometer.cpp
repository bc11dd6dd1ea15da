#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include <mzsup/interferometer.hpp>

using namespace mzsup;
using Complex = std::complex<double>;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

PhotonState<> random_state(std::mt19937_64& gen) {
  std::normal_distribution<double> n;
  PhotonState<> s;
  s.amps << Complex(n(gen), n(gen)), Complex(n(gen), n(gen)), Complex(std::abs(n(gen)), 0);
  s.amps /= std::sqrt(s.total_probability());
  return s;
}

}  // namespace

TEST_CASE("beam splitter splits |1> and |2> evenly with i on the reflected part") {
  auto s1 = apply_beam_splitter(photon_in(Mode::kRightward));
  CHECK(std::abs(s1[Mode::kRightward] - Complex(kInvSqrt2, 0)) < 1e-15);
  CHECK(std::abs(s1[Mode::kUpward] - Complex(0, kInvSqrt2)) < 1e-15);
  CHECK(s1[Mode::kAbsorbed] == Complex(0, 0));

  auto s2 = apply_beam_splitter(photon_in(Mode::kUpward));
  CHECK(std::abs(s2[Mode::kRightward] - Complex(0, kInvSqrt2)) < 1e-15);
  CHECK(std::abs(s2[Mode::kUpward] - Complex(kInvSqrt2, 0)) < 1e-15);
}

TEST_CASE("beam splitter applied twice sends |1> to i|2>") {
  auto s = apply_beam_splitter(apply_beam_splitter(photon_in(Mode::kRightward)));
  CHECK(s[Mode::kRightward] == Complex(0, 0));  // exact cancellation
  CHECK(std::abs(s[Mode::kUpward] - Complex(0, 1)) < 1e-15);
}

TEST_CASE("beam splitter and mirrors preserve the norm of arbitrary states") {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 200; ++i) {
    auto s = random_state(gen);
    CHECK(apply_beam_splitter(s).total_probability() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(apply_mirrors(s).total_probability() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("norm preservation holds for float states at float tolerance") {
  PhotonState<float> s;
  s.amps << std::complex<float>(0.6f, 0.0f), std::complex<float>(0.0f, 0.8f),
      std::complex<float>(0.0f, 0.0f);
  CHECK(apply_beam_splitter(s).total_probability() == doctest::Approx(1.0f).epsilon(1e-6));
}

TEST_CASE("mirrors swap the propagating modes with a factor i") {
  auto s1 = apply_mirrors(photon_in(Mode::kRightward));
  CHECK(s1[Mode::kUpward] == Complex(0, 1));
  CHECK(s1[Mode::kRightward] == Complex(0, 0));

  auto s2 = apply_mirrors(photon_in(Mode::kUpward));
  CHECK(s2[Mode::kRightward] == Complex(0, 1));

  auto twice = apply_mirrors(apply_mirrors(photon_in(Mode::kRightward)));
  CHECK(std::abs(twice[Mode::kRightward] - Complex(-1, 0)) < 1e-15);
}

TEST_CASE("phase kick rotates one mode and leaves magnitudes alone") {
  auto s = apply_beam_splitter(photon_in(Mode::kRightward));
  auto kicked = apply_phase(s, Mode::kUpward, M_PI / 3);
  CHECK(std::abs(kicked[Mode::kRightward] - s[Mode::kRightward]) == 0.0);
  CHECK(std::abs(std::abs(kicked[Mode::kUpward]) - std::abs(s[Mode::kUpward])) < 1e-15);
  CHECK(std::abs(kicked[Mode::kUpward] - s[Mode::kUpward] * std::polar(1.0, M_PI / 3)) < 1e-15);
}

TEST_CASE("partial absorber: transparent at |t|=1, a full block at t=0") {
  auto s = apply_beam_splitter(photon_in(Mode::kRightward));

  auto open = apply_partial_absorber(s, kUpperArm, Complex(1, 0));
  CHECK(open == s);

  auto blocked = apply_partial_absorber(s, Mode::kRightward, Complex(0, 0));
  CHECK(blocked[Mode::kRightward] == Complex(0, 0));
  CHECK(detection_probability(blocked, Mode::kAbsorbed) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(blocked[Mode::kUpward] == s[Mode::kUpward]);
}

TEST_CASE("partial absorber conserves norm for any transmission") {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    auto s = random_state(gen);
    Complex t = std::polar(u(gen), 2 * M_PI * u(gen));
    auto out = apply_partial_absorber(s, Mode::kUpward, t);
    CHECK(out.total_probability() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("absorber with a definite blocked arm moves that amplitude to the absorbed channel") {
  PhotonState<> s;
  s.amps << Complex(-kInvSqrt2, 0), Complex(0, kInvSqrt2), Complex(0, 0);

  auto out = apply_absorber(s, Mode::kRightward, 0.0);
  CHECK(out[Mode::kRightward] == Complex(0, 0));
  CHECK(std::abs(out[Mode::kUpward] - Complex(0, kInvSqrt2)) < 1e-15);
  CHECK(detection_probability(out, Mode::kAbsorbed) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("absorbed amplitude accumulates in quadrature") {
  PhotonState<> s;
  s.amps << Complex(0.6, 0), Complex(0, 0), Complex(0.8, 0);
  auto out = apply_absorber(s, Mode::kRightward, 0.0);
  CHECK(detection_probability(out, Mode::kAbsorbed) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("open absorber puts a common phase on the propagating subspace") {
  auto id = apply_absorber(photon_in(Mode::kRightward), std::nullopt, 0.0);
  CHECK(id == photon_in(Mode::kRightward));

  auto flipped = apply_absorber(photon_in(Mode::kUpward), std::nullopt, M_PI);
  CHECK(std::abs(flipped[Mode::kUpward] - Complex(-1, 0)) < 1e-15);
  CHECK(flipped[Mode::kRightward] == Complex(0, 0));
}

TEST_CASE("both arms open: the device maps |1> to -|1> and port D stays dark") {
  auto s = evolve_device(photon_in(Mode::kRightward), std::nullopt, 0.0);
  CHECK(std::abs(s[Mode::kRightward] - Complex(-1, 0)) < 1e-15);
  CHECK(detection_probability(s, kDetectorD) < 1e-24);
  CHECK(s.total_probability() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("upper arm blocked: quarter at each detector, half absorbed") {
  auto s = evolve_device(photon_in(Mode::kRightward), kUpperArm, 0.0);
  CHECK(detection_probability(s, kDetectorD) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(detection_probability(s, kDetectorC) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(detection_probability(s, Mode::kAbsorbed) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.total_probability() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("survivor phase never changes blocked-arm detection probabilities") {
  for (double phase : {0.0, 0.4, 1.9, M_PI, 5.5}) {
    auto s = evolve_device(photon_in(Mode::kRightward), kUpperArm, phase);
    CHECK(detection_probability(s, kDetectorD) == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("detection probabilities over all channels sum to one") {
  std::mt19937_64 gen(99);
  for (int i = 0; i < 100; ++i) {
    auto s = evolve_device(random_state(gen), kUpperArm, 1.3);
    double total = detection_probability(s, Mode::kRightward) +
                   detection_probability(s, Mode::kUpward) +
                   detection_probability(s, Mode::kAbsorbed);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("joint state with all weight in one branch reproduces the single-branch run") {
  auto geometry = main_device_geometry();

  auto all_a = evolve_joint(make_joint(1.0, 0.0), geometry, 0.0, 0.0);
  CHECK(all_a.photon_a == evolve_device(photon_in(Mode::kRightward), geometry.blocked_in_pos_a, 0.0));
  CHECK(detection_probability(all_a, kDetectorD) == 0.0);

  auto all_b = evolve_joint(make_joint(0.0, 1.0), geometry, 0.0, 0.0);
  CHECK(all_b.photon_b == evolve_device(photon_in(Mode::kRightward), geometry.blocked_in_pos_b, 0.0));
  CHECK(detection_probability(all_b, kDetectorD) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("joint evolution conserves total probability and keeps weights") {
  auto j = make_joint(0.5, 0.5, 0.3, 1.7);
  auto out = evolve_joint(j, main_device_geometry(), 0.9, 2.4);
  CHECK(out.weight_a == j.weight_a);
  CHECK(out.weight_b == j.weight_b);
  CHECK(out.total_probability() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("branch phases drop out of every joint detection probability") {
  auto ref = evolve_joint(make_joint(0.5, 0.5), main_device_geometry(), 1.1, 0.0);
  auto rot = evolve_joint(make_joint(0.5, 0.5, 2.2, 4.4), main_device_geometry(), 1.1, 0.0);
  for (Mode m : {Mode::kRightward, Mode::kUpward, Mode::kAbsorbed}) {
    CHECK(detection_probability(ref, m) == doctest::Approx(detection_probability(rot, m)).epsilon(1e-14));
  }
}
