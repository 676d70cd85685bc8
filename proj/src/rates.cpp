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

#include "ringpair/rates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

#include "ringpair/constants.hpp"
#include "ringpair/errors.hpp"
#include "ringpair/numerics.hpp"

namespace ringpair {

namespace {

using cd = std::complex<double>;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

double lorentzian(double gamma, double detuning) {
  const double h = 0.25 * gamma * gamma;
  return h / (h + detuning * detuning);
}

// Sorted, merged [center - half, center + half] windows.
std::vector<std::pair<double, double>> windows(std::vector<double> centers, double half) {
  std::sort(centers.begin(), centers.end());
  std::vector<std::pair<double, double>> out;
  for (double c : centers) {
    if (!out.empty() && c - half <= out.back().second)
      out.back().second = c + half;
    else
      out.emplace_back(c - half, c + half);
  }
  return out;
}

template <typename F>
double integrate_windows(F&& f, const std::vector<double>& centers, double half, double rel_tol) {
  numerics::QuadratureOptions opt;
  opt.rel_tol = rel_tol;
  opt.max_subdivisions = 20000;
  double total = 0;
  for (const auto& [lo, hi] : windows(centers, half)) {
    std::vector<double> breaks{lo};
    for (double c : centers)
      if (c > lo && c < hi) breaks.push_back(c);
    breaks.push_back(hi);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    total += numerics::integrate_piecewise(f, breaks, opt).value;
  }
  return total;
}

int pair_resonator(const StructureSpec& spec) { return spec.is_ring() ? 1 : 2; }


}  // namespace

void CwPump::validate() const {
  if (!(power > 0)) throw std::invalid_argument("pump: power must be positive");
  if (!(omega_p > 0)) throw std::invalid_argument("pump: frequency must be positive");
}

void NonlinearSpec::validate() const {
  if (!(gamma_nl >= 0) || !std::isfinite(gamma_nl)) throw std::invalid_argument("nonlinear: gamma_nl must be >= 0");
  if (s_perp && !(*s_perp >= 0)) throw std::invalid_argument("nonlinear: s_perp must be >= 0");
}

double s_perp_from_gamma(double gamma_nl, double w1, double w2, double w3, double w4, double omega_p) {
  return kHbar * kHbar * gamma_nl / (4.0 * kPi * kPi) * std::sqrt(w1 * w2 * w3 * w4) / omega_p;
}

void check_s_perp(const NonlinearSpec& nl, double omega_s, double omega_i, double omega_p) {
  if (!nl.s_perp) return;
  const double expected = s_perp_from_gamma(nl.gamma_nl, omega_s, omega_i, omega_p, omega_p, omega_p);
  const double scale = std::max(std::abs(expected), std::abs(*nl.s_perp));
  if (scale == 0.0) return;
  const double rel = std::abs(*nl.s_perp - expected) / scale;
  if (rel > 1e-6)
    throw std::invalid_argument(fmt::format(
        "nonlinear: s_perp = {:.9e} is inconsistent with gamma_nl (expected {:.9e}, relative difference {:.2e})",
        *nl.s_perp, expected, rel));
}

double ResonanceTriple::min_linewidth() const {
  return std::min({pump.gamma_m, signal.gamma_m, idler.gamma_m});
}

void ResonanceTriple::validate(double fraction) const {
  const double tol = fraction * min_linewidth();
  const double miss = energy_mismatch();
  if (!(std::abs(miss) <= tol))
    throw std::invalid_argument(fmt::format(
        "resonance triple violates energy conservation: |2 w_P - w_S - w_I| = {:.6e} rad/s exceeds {:.6e} rad/s",
        std::abs(miss), tol));
}

ResonanceTriple triple_around_pump(const StructureSpec& spec, double omega_p, long order) {
  if (order < 1) throw std::invalid_argument("signal order must be >= 1");
  ResonanceTriple t;
  t.pump = nearest_resonance(spec, 1, omega_p);
  const int r2 = pair_resonator(spec);
  const long centre = nearest_resonance(spec, r2, t.pump.omega_m).mode_index;
  t.signal = resonance_info(spec, r2, centre + order);
  t.idler = resonance_info(spec, r2, centre - order);
  return t;
}

double lorentzian_pair_integral(double gamma_s, double gamma_i, double omega_s, double omega_i) {
  return kPi * gamma_s * gamma_i / (gamma_s + gamma_i) * omega_s * omega_i;
}

double lorentzian_pair_integral_numeric(double gamma_s, double gamma_i, double omega_s, double omega_i,
                                        double omega_p, double window_gammas) {
  auto f = [&](double w1) {
    const double shape = lorentzian(gamma_s, w1 - omega_s) * lorentzian(gamma_i, w1 - omega_s) +
                         lorentzian(gamma_s, w1 - omega_i) * lorentzian(gamma_i, w1 - omega_i);
    return w1 * (2.0 * omega_p - w1) * shape;
  };
  return integrate_windows(f, {omega_s, omega_i}, window_gammas * std::max(gamma_s, gamma_i), 1e-10);
}

const char* to_string(RateMethod m) { return m == RateMethod::kAnalytic ? "analytic" : "quadrature"; }
const char* to_string(FieldModel m) { return m == FieldModel::kLorentzian ? "lorentzian" : "solved"; }

cd lorentzian_amplitude(const ResonanceInfo& r, double omega) {
  const double half = 0.5 * r.gamma_m;
  return std::sqrt(r.fe_max_sq) * half / cd(half, -(omega - r.omega_m));
}

FormInputs form_inputs(const ResonanceTriple& t, const CwPump& pump, const NonlinearSpec& nl, double v_g) {
  FormInputs in;
  in.gamma_nl = nl.gamma_nl;
  in.power = pump.power;
  in.omega_p = pump.omega_p;
  in.omega_s = t.signal.omega_m;
  in.omega_i = t.idler.omega_m;
  in.gamma_s = t.signal.gamma_m;
  in.gamma_i = t.idler.gamma_m;
  in.fe_p = t.pump.fe_max_sq;
  in.fe_s = t.signal.fe_max_sq;
  in.fe_i = t.idler.fe_max_sq;
  in.q_p = t.pump.q_loaded;
  in.q_s = t.signal.q_loaded;
  in.q_i = t.idler.q_loaded;
  in.qc_p = t.pump.q_coupling;
  in.qc_s = t.signal.q_coupling;
  in.qc_i = t.idler.q_coupling;
  in.finesse_p = t.pump.finesse;
  in.finesse_s = t.signal.finesse;
  in.finesse_i = t.idler.finesse;
  in.v_g = v_g;
  in.length_pump = t.pump.length;
  in.length_pair = t.signal.length;
  return in;
}

double rate_fe_form(const FormInputs& in, cd j_spatial) {
  const double g = in.gamma_nl * in.power / in.omega_p;
  const double fe = in.fe_s * in.fe_i * in.fe_p * in.fe_p;
  return g * g / (4.0 * kPi) * fe * lorentzian_pair_integral(in.gamma_s, in.gamma_i, in.omega_s, in.omega_i) *
         std::norm(j_spatial);
}

double rate_fe_form(const FormInputs& in, const OverlapGeometry& geometry) {
  const double g = in.gamma_nl * in.power / in.omega_p;
  const double fe = in.fe_s * in.fe_i * in.fe_p * in.fe_p;
  return g * g * fe * in.gamma_s * in.gamma_i / (in.gamma_s + in.gamma_i) * in.omega_s * in.omega_i *
         std::norm(j_spatial_analytic(geometry, 0.0)) / 4.0;
}

double rate_q_form(const FormInputs& in, const OverlapGeometry& geometry) {
  const double v4 = std::pow(in.v_g, 4);
  const double common = in.gamma_nl * in.gamma_nl * in.power * in.power * v4 * in.omega_s * in.omega_i /
                        (std::pow(in.omega_p, 4) * (in.omega_s * in.q_i + in.omega_i * in.q_s)) *
                        std::pow(in.q_p, 4) * in.q_s * in.q_s * in.q_i * in.q_i /
                        (in.qc_p * in.qc_p * in.qc_s * in.qc_i);
  const double l1l2 = in.length_pump * in.length_pair;
  if (const auto* ring = std::get_if<RingGeometry>(&geometry))
    return common * 64.0 / (ring->length * ring->length);
  if (const auto* dc = std::get_if<DirectionalCoupler>(&geometry)) {
    const double r = dc->length / l1l2, s = 1.0 - sinc(4.0 * dc->kappa * dc->length);
    return common * 4.0 * r * r * s * s;
  }
  const double r = std::get<MachZehnder>(geometry).length / l1l2;
  return common * 16.0 * r * r;
}

double rate_finesse_form(const FormInputs& in, const OverlapGeometry& geometry) {
  const double g = in.gamma_nl * in.power / in.omega_p;
  const double fp = in.finesse_p / kPi;
  const double f = in.finesse_s / kPi * in.finesse_i / kPi * fp * fp;
  const double l = interaction_length(geometry);
  double geom = 0;
  switch (kind_of(geometry)) {
    case StructureKind::kRing: geom = l * l / 4.0; break;
    case StructureKind::kDirectionalCoupler: geom = l * l / 64.0; break;
    case StructureKind::kMachZehnder: geom = l * l / 16.0; break;
  }
  return g * g * f * in.gamma_s * in.gamma_i / (in.gamma_s + in.gamma_i) * in.omega_s * in.omega_i * geom;
}

double ring_rate_lossless(double gamma_nl, double power, double v_g, double q, double omega, double length) {
  const double gp = gamma_nl * power;
  return gp * gp * 32.0 * std::pow(v_g, 4) / std::pow(omega, 3) * std::pow(q, 3) / (length * length);
}

double ring_rate_critical(double gamma_nl, double power, double v_g, double q, double omega, double length) {
  return ring_rate_lossless(gamma_nl, power, v_g, q, omega, length) / 16.0;
}

double ratio_to_ring(StructureKind kind, double l1, double l2, double l_coupler, double l_ring) {
  if (!(l1 > 0) || !(l2 > 0) || !(l_coupler >= 0) || !(l_ring > 0))
    throw std::invalid_argument("ratio_to_ring: lengths must be positive");
  double r = 0;
  switch (kind) {
    case StructureKind::kDirectionalCoupler: r = l_ring * l_coupler / (4.0 * l1 * l2); break;
    case StructureKind::kMachZehnder: r = l_ring * l_coupler / (2.0 * l1 * l2); break;
    case StructureKind::kRing: throw std::invalid_argument("ratio_to_ring: needs a DC or MZI structure");
  }
  return r * r;
}

SfwmResult pair_rate_cw(const StructureSpec& spec, const ResonanceTriple& triple, const CwPump& pump,
                        const NonlinearSpec& nl, const RateOptions& options) {
  pump.validate();
  nl.validate();
  triple.validate();
  if (!(std::abs(pump.omega_p - triple.pump.omega_m) <= 0.1 * triple.pump.gamma_m))
    throw std::invalid_argument(fmt::format(
        "pump frequency is {:.6e} rad/s away from the pump resonance (linewidth {:.6e} rad/s)",
        std::abs(pump.omega_p - triple.pump.omega_m), triple.pump.gamma_m));
  check_s_perp(nl, triple.signal.omega_m, triple.idler.omega_m, pump.omega_p);

  const OverlapGeometry geometry = overlap_geometry(spec);
  SfwmResult out;
  out.method = options.method;
  out.fe_product = triple.signal.fe_max_sq * triple.idler.fe_max_sq * triple.pump.fe_max_sq * triple.pump.fe_max_sq;
  out.j_spatial = j_spatial_analytic(geometry, 0.0);
  const FormInputs in = form_inputs(triple, pump, nl, spec.waveguide.v_g);
  if (options.method == RateMethod::kAnalytic) {
    out.rate_pairs_per_s = rate_fe_form(in, out.j_spatial);
    return out;
  }

  const double wp = pump.omega_p;
  const StructureKind kind = kind_of(geometry);
  numerics::QuadratureOptions inner;
  inner.rel_tol = 1e-11;
  const cd pump_amp = lorentzian_amplitude(triple.pump, wp);
  auto integrand = [&](double w1) {
    const double w2 = 2.0 * wp - w1;
    BoundaryAmplitudes amps;
    if (options.fields == FieldModel::kLorentzian) {
      auto pair_amp = [&](double w) {
        return lorentzian_amplitude(triple.signal, w) + lorentzian_amplitude(triple.idler, w);
      };
      amps = ideal_amplitudes(kind, pair_amp(w1), pair_amp(w2), pump_amp, pump_amp);
    } else {
      amps = solved_amplitudes(spec, w1, w2, wp, wp);
    }
    const cd j = j_total(geometry, amps, phase_mismatch(spec.waveguide, w1, w2, wp, wp), inner);
    return w1 * w2 * std::norm(j);
  };
  const double half = options.window_gammas * std::max(triple.signal.gamma_m, triple.idler.gamma_m);
  const double integral =
      integrate_windows(integrand, {triple.signal.omega_m, triple.idler.omega_m}, half, options.rel_tol);
  const double g = nl.gamma_nl * pump.power / wp;
  out.rate_pairs_per_s = g * g / (4.0 * kPi) * integral;
  return out;
}

}  // namespace ringpair
