#pragma once

// Single-photon state propagation through a balanced Mach-Zehnder device:
// two 50/50 beam splitters, two mirrors, and an absorber that may sit in one
// arm, be absent, or be held in a superposition of both placements.
//
// Basis conventions used throughout:
//   index 0  |1>  photon travelling rightward
//   index 1  |2>  photon travelling upward
//   index 2  the absorbed (gone) channel
// Reflections multiply the amplitude by i. The source enters in |1>, and with
// both arms open the device maps |1> to -|1>, so the upward output port after
// the second beam splitter is the dark port. Detector D watches that port,
// detector C the rightward one.
//
// Between the mirrors and the second beam splitter the arm that was reflected
// at the first beam splitter travels rightward along the top of the device, so
// at the absorber plane the upper arm carries |1> and the lower arm carries |2>.

#include <cassert>
#include <cmath>
#include <complex>
#include <optional>

#include <Eigen/Dense>

namespace mzsup {

enum class Mode : int {
  kRightward = 0,  // |1>
  kUpward = 1,     // |2>
  kAbsorbed = 2,
};

// Arm labels at the absorber plane (see the geometry note above).
inline constexpr Mode kUpperArm = Mode::kRightward;
inline constexpr Mode kLowerArm = Mode::kUpward;

// Output ports after the second beam splitter.
inline constexpr Mode kDetectorC = Mode::kRightward;
inline constexpr Mode kDetectorD = Mode::kUpward;  // dark port when both arms are open

template <typename Scalar = double>
struct PhotonState {
  using Complex = std::complex<Scalar>;
  using Vector = Eigen::Matrix<Complex, 3, 1>;

  Vector amps = Vector::Zero();

  Complex& operator[](Mode m) { return amps[static_cast<int>(m)]; }
  const Complex& operator[](Mode m) const { return amps[static_cast<int>(m)]; }

  Scalar total_probability() const { return amps.squaredNorm(); }

  bool operator==(const PhotonState&) const = default;
};

template <typename Scalar = double>
PhotonState<Scalar> photon_in(Mode m) {
  PhotonState<Scalar> s;
  s[m] = typename PhotonState<Scalar>::Complex(1, 0);
  return s;
}

// Which arms the absorber blocks in each of its two placements. "nullopt"
// means the placement leaves both arms open (the absorber is parked clear of
// the light).
struct DeviceGeometry {
  std::optional<Mode> blocked_in_pos_a;
  std::optional<Mode> blocked_in_pos_b;

  bool operator==(const DeviceGeometry&) const = default;
};

// Absorber parked clear in position A, blocking the upper arm in position B.
inline DeviceGeometry main_device_geometry() { return {std::nullopt, kUpperArm}; }

// Variant with no clear placement: A blocks the upper arm, B the lower one.
inline DeviceGeometry blocked_both_geometry() { return {kUpperArm, kLowerArm}; }

// Unitary on the propagating modes: |1> -> (|1> + i|2>)/sqrt(2) and
// |2> -> (|2> + i|1>)/sqrt(2). The absorbed channel is untouched.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 3, 3> beam_splitter_matrix() {
  using C = std::complex<Scalar>;
  const Scalar c = Scalar(1) / std::sqrt(Scalar(2));
  Eigen::Matrix<C, 3, 3> m = Eigen::Matrix<C, 3, 3>::Zero();
  m(0, 0) = C(c, 0);
  m(0, 1) = C(0, c);
  m(1, 0) = C(0, c);
  m(1, 1) = C(c, 0);
  m(2, 2) = C(1, 0);
  return m;
}

// Both mirrors at once: |1> -> i|2>, |2> -> i|1>.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 3, 3> mirror_matrix() {
  using C = std::complex<Scalar>;
  Eigen::Matrix<C, 3, 3> m = Eigen::Matrix<C, 3, 3>::Zero();
  m(0, 1) = C(0, 1);
  m(1, 0) = C(0, 1);
  m(2, 2) = C(1, 0);
  return m;
}

template <typename Scalar>
PhotonState<Scalar> apply_beam_splitter(const PhotonState<Scalar>& s) {
  return {beam_splitter_matrix<Scalar>() * s.amps};
}

template <typename Scalar>
PhotonState<Scalar> apply_mirrors(const PhotonState<Scalar>& s) {
  return {mirror_matrix<Scalar>() * s.amps};
}

// Phase kick e^{i radians} on a single propagating mode.
template <typename Scalar>
PhotonState<Scalar> apply_phase(const PhotonState<Scalar>& s, Mode mode, Scalar radians) {
  assert(mode != Mode::kAbsorbed);
  PhotonState<Scalar> out = s;
  out[mode] *= std::polar(Scalar(1), radians);
  return out;
}

// Partially transmitting element on one mode: the mode's amplitude is scaled
// by `transmission` (|transmission| <= 1) and the lost probability joins the
// absorbed channel. The absorbed amplitude accumulates in quadrature; only its
// magnitude is observable. Norm is conserved. This is the action of an
// absorber held in superposition on the arm that crosses it: the surviving
// fraction carries the crossing phase inside `transmission`.
template <typename Scalar>
PhotonState<Scalar> apply_partial_absorber(const PhotonState<Scalar>& s, Mode mode,
                                           std::complex<Scalar> transmission) {
  assert(mode != Mode::kAbsorbed);
  assert(std::norm(transmission) <= Scalar(1) + Scalar(1e-9));
  PhotonState<Scalar> out = s;
  const Scalar lost = (Scalar(1) - std::norm(transmission)) * std::norm(s[mode]);
  out[Mode::kAbsorbed] = std::sqrt(std::norm(s[Mode::kAbsorbed]) + lost);
  out[mode] *= transmission;
  return out;
}

// Absorber with a definite placement. With `blocked` set, that mode's whole
// amplitude moves to the absorbed channel (in quadrature) and the surviving
// propagating mode picks up e^{i survivor_phase}. With `blocked` empty the
// element is transparent and the phase rides on both propagating modes, i.e.
// a common phase on the propagating subspace.
template <typename Scalar>
PhotonState<Scalar> apply_absorber(const PhotonState<Scalar>& s, std::optional<Mode> blocked,
                                   Scalar survivor_phase) {
  if (!blocked.has_value()) {
    PhotonState<Scalar> out = s;
    const auto rot = std::polar(Scalar(1), survivor_phase);
    out[Mode::kRightward] *= rot;
    out[Mode::kUpward] *= rot;
    return out;
  }
  assert(*blocked != Mode::kAbsorbed);
  const Mode survivor = (*blocked == Mode::kRightward) ? Mode::kUpward : Mode::kRightward;
  PhotonState<Scalar> out = s;
  out[Mode::kAbsorbed] =
      std::sqrt(std::norm(s[Mode::kAbsorbed]) + std::norm(s[*blocked]));
  out[*blocked] = typename PhotonState<Scalar>::Complex(0, 0);
  out[survivor] *= std::polar(Scalar(1), survivor_phase);
  return out;
}

// Full pass through the device: first beam splitter, mirrors, absorber stage,
// second beam splitter.
template <typename Scalar>
PhotonState<Scalar> evolve_device(const PhotonState<Scalar>& s, std::optional<Mode> blocked,
                                  Scalar survivor_phase) {
  return apply_beam_splitter(
      apply_absorber(apply_mirrors(apply_beam_splitter(s)), blocked, survivor_phase));
}

template <typename Scalar>
Scalar detection_probability(const PhotonState<Scalar>& s, Mode mode) {
  return std::norm(s[mode]);
}

// Photon amplitudes conditioned on the absorber's placement branch. The two
// branches are tagged by orthogonal absorber states and never interfere;
// weight_a and weight_b carry the branch amplitudes (including any branch
// phases, which drop out of every probability).
template <typename Scalar = double>
struct JointState {
  using Complex = std::complex<Scalar>;

  Complex weight_a{0, 0};
  Complex weight_b{0, 0};
  PhotonState<Scalar> photon_a;
  PhotonState<Scalar> photon_b;

  Scalar total_probability() const {
    return std::norm(weight_a) * photon_a.total_probability() +
           std::norm(weight_b) * photon_b.total_probability();
  }

  bool operator==(const JointState&) const = default;
};

// Joint state of one photon entering in |1> against an absorber superposed
// over its two placements with probabilities weight_a2 and weight_b2.
template <typename Scalar = double>
JointState<Scalar> make_joint(Scalar weight_a2, Scalar weight_b2, Scalar branch_phase_a = 0,
                              Scalar branch_phase_b = 0) {
  JointState<Scalar> j;
  j.weight_a = std::polar(std::sqrt(weight_a2), branch_phase_a);
  j.weight_b = std::polar(std::sqrt(weight_b2), branch_phase_b);
  j.photon_a = photon_in<Scalar>(Mode::kRightward);
  j.photon_b = photon_in<Scalar>(Mode::kRightward);
  return j;
}

// Branch-wise pass through the device; branch weights are untouched. phase_a
// and phase_b are the survivor phases handed to the absorber stage of the
// respective branch.
template <typename Scalar>
JointState<Scalar> evolve_joint(const JointState<Scalar>& j, const DeviceGeometry& geometry,
                                Scalar phase_a, Scalar phase_b) {
  JointState<Scalar> out = j;
  out.photon_a = evolve_device(j.photon_a, geometry.blocked_in_pos_a, phase_a);
  out.photon_b = evolve_device(j.photon_b, geometry.blocked_in_pos_b, phase_b);
  return out;
}

// Incoherent sum over the absorber branches.
template <typename Scalar>
Scalar detection_probability(const JointState<Scalar>& j, Mode mode) {
  return std::norm(j.weight_a) * detection_probability(j.photon_a, mode) +
         std::norm(j.weight_b) * detection_probability(j.photon_b, mode);
}

}  // namespace mzsup
