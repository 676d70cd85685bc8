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

// Pulsed-pump pair generation: pairs per pulse and the biphoton
// wavefunction (joint spectral amplitude).

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ringpair/rates.hpp"

namespace ringpair {

struct PulsedPump {
  double omega_center = 0;  // rad/s
  double alpha_sq = 0;      // mean pump photons per pulse
  double fwhm = 0;          // FWHM of |phi_P|^2, rad/s
  double support_lo = 0, support_hi = 0;
  std::function<std::complex<double>(double)> amplitude;  // zero outside the support
  std::vector<double> knots;  // quadrature breakpoints inside the support
  std::string shape;

  // |phi_P|^2 is a normalized Gaussian with the given FWHM.
  static PulsedPump gaussian(double omega_center, double fwhm, double alpha_sq);
  // Linear interpolation of tabulated phi_P on a strictly increasing grid.
  static PulsedPump from_samples(std::vector<double> omega, std::vector<std::complex<double>> phi, double alpha_sq);

  std::complex<double> operator()(double omega) const;
  double norm() const;  // int |phi_P|^2
  // Throws std::invalid_argument unless alpha_sq > 0 and the norm is 1 within 1e-6.
  void validate() const;
  // 2 pi / int |g|^2, g the autoconvolution of phi_P. sqrt(pi)/s for a
  // Gaussian whose |phi_P|^2 has standard deviation s.
  double effective_duration() const;
  double peak_power() const;  // hbar w alpha^2 / effective duration
};

double alpha_sq_for_power(double power, double omega_center, double duration);

struct PulsedOptions {
  FieldModel fields = FieldModel::kLorentzian;
  double window_gammas = 12.0;       // signal/idler windows
  double pump_window_gammas = 12.0;  // pump-resonance window for w3
  double target_change = 0.01;
  int max_refinements = 4;
  unsigned threads = 1;
};

struct PairsPerPulse {
  double beta_sq = 0;
  double relative_change = 0;  // between the last two grids
  int refinements = 0;
  std::array<long, 3> points{};  // w1, w1 + w2, w3
  std::vector<std::string> warnings;
};

PairsPerPulse pairs_per_pulse(const StructureSpec& spec, const ResonanceTriple& triple, const PulsedPump& pump,
                              const NonlinearSpec& nl, const PulsedOptions& options = {});

// Union of uniform segments [c - half, c + half], sorted, overlaps merged.
Eigen::ArrayXd segmented_axis(std::span<const double> centers, double half_width, int points_per_segment);

struct BiphotonResult {
  Eigen::ArrayXd omega1, omega2;
  Eigen::MatrixXcd phi;  // rows: omega1, columns: omega2; normalized
  double pre_norm_integral = 0;
  double norm_residual = 0;
  double marginal_fwhm_signal = 0;  // of int |phi|^2 dw2 around w_S
  double marginal_fwhm_idler = 0;   // of int |phi|^2 dw1 around w_I
  std::vector<std::string> warnings;
};

// Trapezoid weights on each axis; a step more than four times both of its
// neighbours is a gap between segments and is not integrated across.
BiphotonResult biphoton_wavefunction(const StructureSpec& spec, const ResonanceTriple& triple,
                                     const PulsedPump& pump, const NonlinearSpec& nl, const Eigen::ArrayXd& omega1,
                                     const Eigen::ArrayXd& omega2, const PulsedOptions& options = {});

}  // namespace ringpair
