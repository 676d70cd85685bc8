// Copyright 2026 The ringpair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Single transverse mode shared by every waveguide in the structure:
// first-order dispersion around a reference frequency plus a
// frequency-independent power attenuation xi, i.e. k~(w) = k(w) + i xi/2.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "ringpair/constants.hpp"

namespace ringpair {

// How the round-trip amplitude a is built from xi. kFieldAttenuation makes
// 1 - a^2 the round-trip power loss implied by k~ = k + i xi/2.
// kLiteralExponent reproduces a = exp(-xi L) for comparison runs.
enum class LossConvention { kFieldAttenuation, kLiteralExponent };

template <typename Scalar>
struct WaveguideModel {
  Scalar omega0{};   // rad/s
  Scalar n_eff{};
  Scalar v_g{};      // m/s
  Scalar beta2{0};   // s^2/m
  Scalar xi{0};      // 1/m, power
  LossConvention loss_convention = LossConvention::kFieldAttenuation;

  Scalar k0() const { return n_eff * omega0 / Scalar(kSpeedOfLight); }

  void validate() const {
    if (!(omega0 > 0)) throw std::invalid_argument("waveguide: omega0 must be positive");
    if (!(n_eff > 0)) throw std::invalid_argument("waveguide: n_eff must be positive");
    if (!(v_g > 0) || !std::isfinite(v_g)) throw std::invalid_argument("waveguide: v_g must be positive and finite");
    if (!(xi >= 0)) throw std::invalid_argument("waveguide: xi must be non-negative");
    if (!std::isfinite(beta2)) throw std::invalid_argument("waveguide: beta2 must be finite");
  }
};

using Waveguide = WaveguideModel<double>;

// Builds a model from a reference wavelength and the group index.
template <typename Scalar = double>
WaveguideModel<Scalar> waveguide_from_wavelength(Scalar lambda0, Scalar n_eff, Scalar n_group,
                                                 Scalar xi = 0, Scalar beta2 = 0) {
  WaveguideModel<Scalar> m;
  m.omega0 = Scalar(wavelength_to_omega(lambda0));
  m.n_eff = n_eff;
  m.v_g = Scalar(kSpeedOfLight) / n_group;
  m.xi = xi;
  m.beta2 = beta2;
  m.validate();
  return m;
}

template <typename Scalar>
Scalar k_real(const WaveguideModel<Scalar>& model, Scalar omega) {
  if (!(omega > 0)) throw std::domain_error("k_real: omega must be positive");
  const Scalar d = omega - model.omega0;
  return model.k0() + d / model.v_g + Scalar(0.5) * model.beta2 * d * d;
}

// d k / d omega, used to bracket resonances when beta2 != 0.
template <typename Scalar>
Scalar k_slope(const WaveguideModel<Scalar>& model, Scalar omega) {
  return Scalar(1) / model.v_g + model.beta2 * (omega - model.omega0);
}

template <typename Scalar>
std::complex<Scalar> propagate(const WaveguideModel<Scalar>& model, std::complex<Scalar> amplitude,
                               Scalar length, Scalar omega) {
  if (!(length >= 0)) throw std::domain_error("propagate: length must be non-negative");
  const Scalar phase = k_real(model, omega) * length;
  return amplitude * std::polar(std::exp(-model.xi * length / Scalar(2)), phase);
}

template <typename Scalar>
Scalar round_trip_amplitude(const WaveguideModel<Scalar>& model, Scalar ring_length) {
  if (!(ring_length > 0)) throw std::domain_error("round_trip_amplitude: ring length must be positive");
  const Scalar exponent = model.loss_convention == LossConvention::kFieldAttenuation
                              ? model.xi * ring_length / Scalar(2)
                              : model.xi * ring_length;
  return std::exp(-exponent);
}

}  // namespace ringpair
