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

#include <cmath>
#include <random>

#include "ringpair/constants.hpp"
#include "ringpair/network.hpp"
#include "ringpair/overlap.hpp"
#include "ringpair/pulsed.hpp"
#include "ringpair/rates.hpp"

namespace ringpair::testing {

inline double relative_error(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

inline double relative_error(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

inline Waveguide silicon_wire(double xi = 0.0, double beta2 = 0.0) {
  return waveguide_from_wavelength(1550e-9, 2.4, 4.0, xi, beta2);
}

// Single ring, double DC racetrack and 50:50 MZI racetrack with the pair
// resonator aligned to the pump; perfect uncoupling for the couplers.
inline StructureSpec high_finesse(StructureKind kind, double radius = 20e-6) {
  StructureSpec s;
  s.waveguide = silicon_wire(20.0);
  s.geometry_split = 0.0;
  const double lc = kPi * radius;
  if (kind == StructureKind::kRing) {
    s.kind = SingleRing{2 * kPi * radius, 0.99, 0.0};
  } else {
    DoubleRacetrack d;
    d.L1 = 4 * kPi * radius;
    d.L2 = 4 * kPi * radius * 1.03;
    d.sigma_bus1 = 0.99;
    d.sigma_bus2 = 0.995;
    if (kind == StructureKind::kDirectionalCoupler)
      d.coupler = DirectionalCoupler{2 * kPi / lc, lc};
    else
      d.coupler = MachZehnder{std::sqrt(0.5), std::sqrt(0.5), kPi, lc};
    s.kind = d;
  }
  s.validate();
  if (!s.is_ring()) {
    const double wp = nearest_resonance(s, 1, s.waveguide.omega0).omega_m;
    set_phase_offset(s, 2, phase_offset_for_resonance(s, 2, wp));
  }
  return s;
}

inline void pin(StructureSpec& s, int resonator, double lambda) {
  set_phase_offset(s, resonator, 0.0);
  set_phase_offset(s, resonator, phase_offset_for_resonance(s, resonator, wavelength_to_omega(lambda)));
}

// Two racetracks (641 um and 432 um) point-coupled with X12 = -i 0.00161.
inline StructureSpec weakly_coupled_pair() {
  StructureSpec s;
  s.waveguide = silicon_wire(23.0);
  DoubleRacetrack d;
  d.L1 = 641e-6;
  d.L2 = 432e-6;
  d.sigma_bus1 = 0.933;
  d.sigma_bus2 = 0.993;
  d.coupler = symmetric_cross_coupler(0.00161);
  s.kind = d;
  s.validate();
  pin(s, 1, 1550.07e-9);
  pin(s, 2, 1550.75e-9);
  return s;
}

inline StructureSpec dc_pair(double kappa, double length = 98.2e-6) {
  StructureSpec s = weakly_coupled_pair();
  std::get<DoubleRacetrack>(s.kind).coupler = DirectionalCoupler{kappa, length};
  s.validate();
  pin(s, 1, 1550.07e-9);
  pin(s, 2, 1550.75e-9);
  return s;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace ringpair::testing
