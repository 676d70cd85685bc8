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

#include "ringpair/network.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "ringpair/errors.hpp"
#include "ringpair/numerics.hpp"
#include "ringpair/parallel.hpp"

namespace ringpair {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

void check_resonator(const StructureSpec& spec, int resonator) {
  if (resonator != 1 && resonator != 2) throw std::invalid_argument("resonator index must be 1 or 2");
  if (resonator == 2 && spec.is_ring()) throw std::invalid_argument("a single ring has no resonator 2");
}

cd unit_propagation(const Waveguide& wg, double length, double omega) {
  return propagate(wg, cd{1.0, 0.0}, length, omega);
}

// Round-trip phase of resonator i excluding the propagation term.
double static_phase(const StructureSpec& spec, int resonator) {
  double phase = phase_offset(spec, resonator);
  if (!spec.is_ring()) {
    const cd x_ii = coupler_matrix(spec)(resonator - 1, resonator - 1);
    if (std::abs(x_ii) < 1e-12)
      throw UnsupportedError(fmt::format("resonator {} has no self-return path through the coupler", resonator));
    phase += std::arg(x_ii);
  }
  return phase;
}

double round_trip_phase(const StructureSpec& spec, int resonator, double omega) {
  return k_real(spec.waveguide, omega) * resonator_length(spec, resonator) + static_phase(spec, resonator);
}

double resonance_frequency(const StructureSpec& spec, int resonator, long m) {
  const Waveguide& wg = spec.waveguide;
  const double L = resonator_length(spec, resonator);
  const double k_target = (2.0 * kPi * static_cast<double>(m) - static_phase(spec, resonator)) / L;
  const double linear = wg.omega0 + wg.v_g * (k_target - wg.k0());
  if (wg.beta2 == 0.0) return linear;
  auto g = [&](double w) { return k_real(wg, w) - k_target; };
  double half = kPi * wg.v_g / L;
  for (int attempt = 0; attempt < 8; ++attempt, half *= 2) {
    const double lo = std::max(linear - half, 1e-3 * linear), hi = linear + half;
    if (std::signbit(g(lo)) != std::signbit(g(hi)))
      return numerics::find_root_bracketed(g, lo, hi, 1e-12 * linear).root;
  }
  throw NumericError(fmt::format("no resonance bracket found for resonator {} mode {}", resonator, m));
}

}  // namespace

void StructureSpec::validate() const {
  waveguide.validate();
  if (!(geometry_split >= 0 && geometry_split <= 1))
    throw std::invalid_argument("structure: geometry_split must lie in [0, 1]");
  auto sigma_ok = [](double s) { return s >= 0 && s <= 1; };
  if (const auto* ring = std::get_if<SingleRing>(&kind)) {
    if (!(ring->L > 0)) throw std::invalid_argument("ring: length must be positive");
    if (!sigma_ok(ring->sigma_bus)) throw std::invalid_argument("ring: sigma_bus must lie in [0, 1]");
    return;
  }
  const auto& dr = std::get<DoubleRacetrack>(kind);
  ringpair::validate(dr.coupler);
  const double lcp = ringpair::coupler_length(dr.coupler);
  if (!(dr.L1 > lcp) || !(dr.L2 > lcp))
    throw std::invalid_argument("racetrack: each length must exceed the coupler length");
  if (!sigma_ok(dr.sigma_bus1) || !sigma_ok(dr.sigma_bus2))
    throw std::invalid_argument("racetrack: bus self-couplings must lie in [0, 1]");
}

double resonator_length(const StructureSpec& spec, int resonator) {
  check_resonator(spec, resonator);
  if (const auto* ring = std::get_if<SingleRing>(&spec.kind)) return ring->L;
  const auto& dr = std::get<DoubleRacetrack>(spec.kind);
  return resonator == 1 ? dr.L1 : dr.L2;
}

double bus_sigma(const StructureSpec& spec, int resonator) {
  check_resonator(spec, resonator);
  if (const auto* ring = std::get_if<SingleRing>(&spec.kind)) return ring->sigma_bus;
  const auto& dr = std::get<DoubleRacetrack>(spec.kind);
  return resonator == 1 ? dr.sigma_bus1 : dr.sigma_bus2;
}

double phase_offset(const StructureSpec& spec, int resonator) {
  check_resonator(spec, resonator);
  if (const auto* ring = std::get_if<SingleRing>(&spec.kind)) return ring->phase_offset;
  const auto& dr = std::get<DoubleRacetrack>(spec.kind);
  return resonator == 1 ? dr.phase_offset1 : dr.phase_offset2;
}

void set_phase_offset(StructureSpec& spec, int resonator, double value) {
  check_resonator(spec, resonator);
  if (auto* ring = std::get_if<SingleRing>(&spec.kind)) {
    ring->phase_offset = value;
    return;
  }
  auto& dr = std::get<DoubleRacetrack>(spec.kind);
  (resonator == 1 ? dr.phase_offset1 : dr.phase_offset2) = value;
}

Matrix2c<double> coupler_matrix(const StructureSpec& spec) {
  if (spec.is_ring()) {
    Matrix2c<double> m = Matrix2c<double>::Zero();
    m(0, 0) = 1.0;
    return m;
  }
  return transfer_matrix(std::get<DoubleRacetrack>(spec.kind).coupler);
}

double coupler_length(const StructureSpec& spec) {
  if (spec.is_ring()) return 0.0;
  return ringpair::coupler_length(std::get<DoubleRacetrack>(spec.kind).coupler);
}

PortResponse solve_linear(const StructureSpec& spec, double omega, Port input) {
  const Waveguide& wg = spec.waveguide;
  const double g = spec.geometry_split;

  if (const auto* ring = std::get_if<SingleRing>(&spec.kind)) {
    if (input != Port::kIn) throw std::invalid_argument("a single ring has only the In port");
    const double s = ring->sigma_bus, k = cross_from_self(s);
    const cd before = unit_propagation(wg, g * ring->L, omega) * std::polar(1.0, ring->phase_offset);
    const cd after = unit_propagation(wg, (1.0 - g) * ring->L, omega);
    const cd den = 1.0 - s * after * before;
    if (std::abs(den) < 1e-15) throw DegenerateStructureError("single ring: lossless, uncoupled and on resonance");
    const cd c = before * kI * k / den;
    const cd ring_in = after * c;
    return {s + kI * k * ring_in, cd{}, c, cd{}};
  }

  const auto& dr = std::get<DoubleRacetrack>(spec.kind);
  const Matrix2c<double> x = transfer_matrix(dr.coupler);
  const double lcp = ringpair::coupler_length(dr.coupler);
  const std::array<double, 2> L{dr.L1, dr.L2}, sigma{dr.sigma_bus1, dr.sigma_bus2},
      offset{dr.phase_offset1, dr.phase_offset2};

  const cd through_coupler = unit_propagation(wg, lcp, omega);
  Vector2c<double> after, before, kappa_i, bus;
  for (int i = 0; i < 2; ++i) {
    const double arcs = L[i] - lcp;
    after(i) = unit_propagation(wg, (1.0 - g) * arcs, omega);
    before(i) = unit_propagation(wg, g * arcs, omega) * std::polar(1.0, offset[i]);
    kappa_i(i) = kI * cross_from_self(sigma[i]);
  }
  bus << (input == Port::kIn ? 1.0 : 0.0), (input == Port::kAdd ? 1.0 : 0.0);

  // c = B (i k b + s A P X c)  =>  (I - diag(B s A) P X) c = B i k b
  Matrix2c<double> m = Matrix2c<double>::Identity();
  for (int i = 0; i < 2; ++i) m.row(i) -= before(i) * sigma[i] * after(i) * through_coupler * x.row(i);
  const Vector2c<double> rhs = before.cwiseProduct(kappa_i).cwiseProduct(bus);
  const cd det = m.determinant();
  if (std::abs(det) < 1e-15) throw DegenerateStructureError("double racetrack: steady-state system is singular");
  Matrix2c<double> inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  const Vector2c<double> c = inv * rhs / det;
  const Vector2c<double> ring_in = after.cwiseProduct(through_coupler * (x * c));
  return {sigma[0] * bus(0) + kappa_i(0) * ring_in(0), sigma[1] * bus(1) + kappa_i(1) * ring_in(1), c(0), c(1)};
}

Eigen::ArrayXd linspace(double lo, double hi, Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("linspace: need at least one point");
  if (n == 1) return Eigen::ArrayXd::Constant(1, lo);
  return Eigen::ArrayXd::LinSpaced(n, lo, hi);
}

namespace {

void check_grid(const Eigen::ArrayXd& grid) {
  for (Eigen::Index i = 1; i < grid.size(); ++i)
    if (!(grid(i) > grid(i - 1))) throw std::invalid_argument("frequency grid must be strictly increasing");
}

}  // namespace

Eigen::ArrayXd spectrum(const StructureSpec& spec, const Eigen::ArrayXd& grid, Port input, OutputPort output,
                        unsigned threads) {
  check_grid(grid);
  Eigen::ArrayXd out(grid.size());
  detail::parallel_for(static_cast<std::size_t>(grid.size()), threads, [&](std::size_t i) {
    const auto idx = static_cast<Eigen::Index>(i);
    const PortResponse r = solve_linear(spec, grid(idx), input);
    out(idx) = std::norm(output == OutputPort::kThrough ? r.through : r.drop);
  });
  return out;
}

Eigen::ArrayXd intensity_enhancement(const StructureSpec& spec, const Eigen::ArrayXd& grid, int resonator,
                                     unsigned threads) {
  check_resonator(spec, resonator);
  check_grid(grid);
  const Port port = resonator == 1 ? Port::kIn : Port::kAdd;
  Eigen::ArrayXd out(grid.size());
  detail::parallel_for(static_cast<std::size_t>(grid.size()), threads, [&](std::size_t i) {
    const auto idx = static_cast<Eigen::Index>(i);
    const PortResponse r = solve_linear(spec, grid(idx), port);
    out(idx) = std::norm(resonator == 1 ? r.circ1 : r.circ2);
  });
  return out;
}

ResonanceInfo resonance_info(const StructureSpec& spec, int resonator, long mode_index) {
  check_resonator(spec, resonator);
  ResonanceInfo info;
  info.resonator_index = resonator;
  info.mode_index = mode_index;
  info.omega_m = resonance_frequency(spec, resonator, mode_index);
  info.length = resonator_length(spec, resonator);
  info.sigma = bus_sigma(spec, resonator);
  info.a = round_trip_amplitude(spec.waveguide, info.length);
  const double sa = info.sigma * info.a;
  if (!(sa > 0)) throw std::invalid_argument("resonance_info: sigma * a must be positive");
  if (!(sa < 1)) throw DegenerateStructureError("resonance_info: sigma * a = 1 gives zero linewidth");
  const double v_g = 1.0 / k_slope(spec.waveguide, info.omega_m);
  info.fsr = v_g / info.length;
  info.fe_max_sq = (1.0 - info.sigma * info.sigma) / ((1.0 - sa) * (1.0 - sa));
  info.gamma_m = info.fsr * 2.0 * (1.0 - sa) / std::sqrt(sa);
  info.finesse = 2.0 * kPi * info.fsr / info.gamma_m;
  info.q_loaded = info.omega_m / info.gamma_m;
  info.q_coupling = info.fe_max_sq > 0
                        ? 4.0 * v_g / (info.length * info.omega_m) * info.q_loaded * info.q_loaded / info.fe_max_sq
                        : std::numeric_limits<double>::infinity();
  return info;
}

std::vector<ResonanceInfo> find_resonances(const StructureSpec& spec, int resonator, double omega_lo,
                                           double omega_hi) {
  check_resonator(spec, resonator);
  std::vector<ResonanceInfo> out;
  if (!(omega_hi > omega_lo)) return out;
  if (!(omega_lo > 0)) throw std::domain_error("find_resonances: band must be at positive frequencies");
  if (!(k_slope(spec.waveguide, omega_lo) > 0) || !(k_slope(spec.waveguide, omega_hi) > 0))
    throw std::domain_error("find_resonances: band outside the region where k(omega) increases");
  const double two_pi = 2.0 * kPi;
  const long m_lo = static_cast<long>(std::ceil(round_trip_phase(spec, resonator, omega_lo) / two_pi));
  const long m_hi = static_cast<long>(std::floor(round_trip_phase(spec, resonator, omega_hi) / two_pi));
  for (long m = m_lo; m <= m_hi; ++m) {
    ResonanceInfo r = resonance_info(spec, resonator, m);
    if (r.omega_m >= omega_lo && r.omega_m <= omega_hi) out.push_back(r);
  }
  return out;
}

std::vector<ResonanceInfo> find_resonances(const StructureSpec& spec, double omega_lo, double omega_hi) {
  auto out = find_resonances(spec, 1, omega_lo, omega_hi);
  if (!spec.is_ring()) {
    auto second = find_resonances(spec, 2, omega_lo, omega_hi);
    out.insert(out.end(), second.begin(), second.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.omega_m < b.omega_m; });
  }
  return out;
}

ResonanceInfo nearest_resonance(const StructureSpec& spec, int resonator, double omega) {
  const long m = std::lround(round_trip_phase(spec, resonator, omega) / (2.0 * kPi));
  return resonance_info(spec, resonator, m);
}

double phase_offset_for_resonance(const StructureSpec& spec, int resonator, double omega) {
  const double current = round_trip_phase(spec, resonator, omega) - phase_offset(spec, resonator);
  const double two_pi = 2.0 * kPi;
  double offset = std::fmod(-current, two_pi);
  if (offset < 0) offset += two_pi;
  return offset;
}

double isolation_db(const StructureSpec& spec, const ResonanceInfo& resonance) {
  if (spec.is_ring()) throw std::invalid_argument("isolation_db: needs two resonators");
  const int r = resonance.resonator_index;
  check_resonator(spec, r);
  const PortResponse resp = solve_linear(spec, resonance.omega_m, r == 1 ? Port::kIn : Port::kAdd);
  const double same = std::norm(r == 1 ? resp.circ1 : resp.circ2);
  const double cross = std::norm(r == 1 ? resp.circ2 : resp.circ1);
  if (cross == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(same / cross);
}

LineshapeCheck check_lineshape(const StructureSpec& spec, const ResonanceInfo& resonance, double half_span_gammas,
                               int points) {
  const double half = half_span_gammas * resonance.gamma_m;
  const Eigen::ArrayXd grid = linspace(resonance.omega_m - half, resonance.omega_m + half, points);
  const Eigen::ArrayXd fe = intensity_enhancement(spec, grid, resonance.resonator_index);
  const auto fit = numerics::fit_lorentzian(std::span<const double>(grid.data(), static_cast<std::size_t>(grid.size())),
                                            std::span<const double>(fe.data(), static_cast<std::size_t>(fe.size())));
  LineshapeCheck check;
  check.analytic_fwhm = resonance.gamma_m;
  check.analytic_peak = resonance.fe_max_sq;
  check.fitted_fwhm = fit.fwhm;
  check.fitted_peak = fit.peak;
  check.fitted_center = fit.center;
  check.fwhm_mismatch = std::abs(fit.fwhm - resonance.gamma_m) / resonance.gamma_m;
  check.peak_mismatch = std::abs(fit.peak - resonance.fe_max_sq) / resonance.fe_max_sq;
  if (check.fwhm_mismatch > 0.02)
    check.warnings.push_back(fmt::format("resonator {} mode {}: fitted FWHM differs from the analytic linewidth by {:.2f}%",
                                         resonance.resonator_index, resonance.mode_index, 100 * check.fwhm_mismatch));
  if (check.peak_mismatch > 0.02)
    check.warnings.push_back(fmt::format("resonator {} mode {}: fitted peak differs from FE_max^2 by {:.2f}%",
                                         resonance.resonator_index, resonance.mode_index, 100 * check.peak_mismatch));
  return check;
}

}  // namespace ringpair
