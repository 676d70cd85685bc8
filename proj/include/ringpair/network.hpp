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

// Steady-state linear response of two bus-coupled racetracks joined by a
// coupler (or a single bus-coupled ring).
//
// Each racetrack i is traversed as: coupler (length L_cp) -> arc of length
// (1 - split)(L_i - L_cp) -> bus point coupler -> arc of length
// split (L_i - L_cp) -> back to the coupler entrance. The circulating
// amplitudes c_i = f^{(i)}_- are taken at the coupler entrance. Bus couplers
// use [[s, i k], [i k, s]] with (bus, ring) ordering of inputs and outputs.

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ringpair/coupler.hpp"
#include "ringpair/waveguide.hpp"

namespace ringpair {

struct DoubleRacetrack {
  double L1{};  // m
  double L2{};  // m
  double sigma_bus1{};
  double sigma_bus2{};
  CouplerSpec coupler = DirectionalCoupler{};
  // Lumped extra round-trip phase per resonator (rad); shifts its comb.
  double phase_offset1 = 0;
  double phase_offset2 = 0;
};

struct SingleRing {
  double L{};
  double sigma_bus{};
  double phase_offset = 0;
};

struct StructureSpec {
  std::variant<DoubleRacetrack, SingleRing> kind;
  Waveguide waveguide;
  double geometry_split = 0.5;

  bool is_ring() const { return std::holds_alternative<SingleRing>(kind); }
  void validate() const;
};

enum class Port { kIn, kAdd };
enum class OutputPort { kThrough, kDrop };

struct PortResponse {
  std::complex<double> through;  // bus 1 output
  std::complex<double> drop;     // bus 2 output
  std::complex<double> circ1;    // resonator 1, coupler entrance
  std::complex<double> circ2;    // resonator 2, coupler entrance
};

struct ResonanceInfo {
  int resonator_index = 1;  // 1 or 2
  long mode_index = 0;      // absolute m in k L + phase = 2 pi m
  double omega_m = 0;       // rad/s
  double gamma_m = 0;       // rad/s, FWHM
  double fe_max_sq = 0;
  double finesse = 0;
  double fsr = 0;           // v_g / L_i, 1/s
  double q_loaded = 0;
  double q_coupling = 0;
  double sigma = 0;         // bus self-coupling
  double a = 0;             // round-trip amplitude
  double length = 0;        // L_i
};

double resonator_length(const StructureSpec& spec, int resonator);
double bus_sigma(const StructureSpec& spec, int resonator);
double phase_offset(const StructureSpec& spec, int resonator);
void set_phase_offset(StructureSpec& spec, int resonator, double value);
Matrix2c<double> coupler_matrix(const StructureSpec& spec);  // [[1,0],[0,0]] for a ring
double coupler_length(const StructureSpec& spec);            // 0 for a ring

PortResponse solve_linear(const StructureSpec& spec, double omega, Port input);

Eigen::ArrayXd linspace(double lo, double hi, Eigen::Index n);

// |T|^2 from input to output port at each grid frequency.
Eigen::ArrayXd spectrum(const StructureSpec& spec, const Eigen::ArrayXd& grid, Port input, OutputPort output,
                        unsigned threads = 1);

// |c_i|^2 for unit input on resonator i's own bus (In for 1, Add for 2).
Eigen::ArrayXd intensity_enhancement(const StructureSpec& spec, const Eigen::ArrayXd& grid, int resonator,
                                     unsigned threads = 1);

// Isolated-resonance description: Lorentzian peak, linewidth, finesse, Q, Q_C.
ResonanceInfo resonance_info(const StructureSpec& spec, int resonator, long mode_index);

std::vector<ResonanceInfo> find_resonances(const StructureSpec& spec, int resonator, double omega_lo,
                                           double omega_hi);
// Both resonators, sorted by frequency.
std::vector<ResonanceInfo> find_resonances(const StructureSpec& spec, double omega_lo, double omega_hi);

ResonanceInfo nearest_resonance(const StructureSpec& spec, int resonator, double omega);

// Phase offset that puts a resonance of `resonator` exactly at omega.
double phase_offset_for_resonance(const StructureSpec& spec, int resonator, double omega);

// Same-resonator over cross-resonator circulating power on resonance, in dB.
// +infinity when no light crosses.
double isolation_db(const StructureSpec& spec, const ResonanceInfo& resonance);

// Analytic peak/linewidth against a Lorentzian fit of the simulated
// enhancement over +-half_span_gammas linewidths.
struct LineshapeCheck {
  double analytic_fwhm = 0;
  double fitted_fwhm = 0;
  double analytic_peak = 0;
  double fitted_peak = 0;
  double fitted_center = 0;
  double fwhm_mismatch = 0;  // relative
  double peak_mismatch = 0;  // relative
  std::vector<std::string> warnings;
};

LineshapeCheck check_lineshape(const StructureSpec& spec, const ResonanceInfo& resonance,
                               double half_span_gammas = 3.0, int points = 401);

}  // namespace ringpair
