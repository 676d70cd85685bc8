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

// Continuous-wave photon-pair generation rates.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ringpair/network.hpp"
#include "ringpair/overlap.hpp"

namespace ringpair {

struct CwPump {
  double power = 0;    // W
  double omega_p = 0;  // rad/s
  void validate() const;
};

struct NonlinearSpec {
  double gamma_nl = 0;           // 1/(W m)
  std::optional<double> s_perp;  // J^2 s^2, evaluated at (w_S, w_I, w_P, w_P)
  void validate() const;
};

// hbar^2 gamma / (4 pi^2) sqrt(w1 w2 w3 w4) / w_P
double s_perp_from_gamma(double gamma_nl, double w1, double w2, double w3, double w4, double omega_p);
// Rejects a supplied S_perp that differs from the gamma-derived value by more than 1e-6 (relative).
void check_s_perp(const NonlinearSpec& nl, double omega_s, double omega_i, double omega_p);

struct ResonanceTriple {
  ResonanceInfo pump;    // resonator 1
  ResonanceInfo signal;  // resonator 2
  ResonanceInfo idler;   // resonator 2

  double energy_mismatch() const { return 2 * pump.omega_m - signal.omega_m - idler.omega_m; }
  double min_linewidth() const;
  // |2 w_P - w_S - w_I| <= fraction * min(Gamma); throws std::invalid_argument.
  void validate(double fraction = 0.1) const;
};

// Signal/idler pair of modes +-order around the resonator-2 mode nearest the
// pump (for a ring, the pump mode itself). Resonator indices follow the
// structure: pump in 1, pair in 2 (both 1 for a ring).
ResonanceTriple triple_around_pump(const StructureSpec& spec, double omega_p, long order);

// Closed form of int w1 (2 w_P - w1) L(w1, 2 w_P - w1) dw1.
double lorentzian_pair_integral(double gamma_s, double gamma_i, double omega_s, double omega_i);
// The same integral by adaptive quadrature over +-window Gamma_max around
// both resonances.
double lorentzian_pair_integral_numeric(double gamma_s, double gamma_i, double omega_s, double omega_i,
                                        double omega_p, double window_gammas = 12.0);

enum class RateMethod { kAnalytic, kQuadrature };
enum class FieldModel { kLorentzian, kSolved };

const char* to_string(RateMethod m);
const char* to_string(FieldModel m);

struct RateOptions {
  RateMethod method = RateMethod::kAnalytic;
  FieldModel fields = FieldModel::kLorentzian;
  double window_gammas = 12.0;
  double rel_tol = 1e-8;
};

struct SfwmResult {
  double rate_pairs_per_s = 0;
  std::complex<double> j_spatial;
  double fe_product = 0;  // FE_S^2 FE_I^2 FE_P^4
  RateMethod method = RateMethod::kAnalytic;
  std::optional<double> ratio_to_ring;
};

// Complex Lorentzian field-enhancement amplitude of one resonance.
std::complex<double> lorentzian_amplitude(const ResonanceInfo& r, double omega);

SfwmResult pair_rate_cw(const StructureSpec& spec, const ResonanceTriple& triple, const CwPump& pump,
                        const NonlinearSpec& nl, const RateOptions& options = {});

// Flat parameter set shared by the closed-form rate expressions.
struct FormInputs {
  double gamma_nl = 0, power = 0;
  double omega_p = 0, omega_s = 0, omega_i = 0;
  double gamma_s = 0, gamma_i = 0;
  double fe_p = 0, fe_s = 0, fe_i = 0;  // |FE_max|^2
  double q_p = 0, q_s = 0, q_i = 0;
  double qc_p = 0, qc_s = 0, qc_i = 0;
  double finesse_p = 0, finesse_s = 0, finesse_i = 0;
  double v_g = 0;
  double length_pump = 0;  // L1 (L for a ring)
  double length_pair = 0;  // L2 (L for a ring)
};

FormInputs form_inputs(const ResonanceTriple& triple, const CwPump& pump, const NonlinearSpec& nl, double v_g);

// (1/4pi) (gamma P / w_P)^2 |F_max|^2 pi G_S G_I/(G_S + G_I) w_S w_I |J|^2
double rate_fe_form(const FormInputs& in, std::complex<double> j_spatial);
// Per-structure forms in field enhancement, quality factors and finesse.
double rate_fe_form(const FormInputs& in, const OverlapGeometry& geometry);
double rate_q_form(const FormInputs& in, const OverlapGeometry& geometry);
double rate_finesse_form(const FormInputs& in, const OverlapGeometry& geometry);

// Ring limits with equal Q and frequency.
double ring_rate_lossless(double gamma_nl, double power, double v_g, double q, double omega, double length);
double ring_rate_critical(double gamma_nl, double power, double v_g, double q, double omega, double length);

// DC: (L L_DC / (4 L1 L2))^2, MZI: (L L_MZI / (2 L1 L2))^2.
double ratio_to_ring(StructureKind kind, double l1, double l2, double l_coupler, double l_ring);

}  // namespace ringpair
