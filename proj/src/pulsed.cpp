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

#include "ringpair/pulsed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "ringpair/constants.hpp"
#include "ringpair/errors.hpp"
#include "ringpair/numerics.hpp"
#include "ringpair/parallel.hpp"

namespace ringpair {

namespace {

using cd = std::complex<double>;
using Vec2 = Vector2c<double>;

const double kFwhmPerSigma = 2.0 * std::sqrt(2.0 * std::numbers::ln2);

struct Axis {
  std::vector<double> x, w;  // nodes and trapezoid weights
};

Axis uniform_axis(double lo, double hi, double step) {
  Axis a;
  if (!(hi > lo)) return a;
  const long n = std::max<long>(9, static_cast<long>(std::ceil((hi - lo) / step)) + 1);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  a.x.resize(static_cast<std::size_t>(n));
  a.w.assign(static_cast<std::size_t>(n), h);
  for (long i = 0; i < n; ++i) a.x[static_cast<std::size_t>(i)] = lo + h * static_cast<double>(i);
  a.w.front() = a.w.back() = 0.5 * h;
  return a;
}

void append(Axis& a, const Axis& b) {
  a.x.insert(a.x.end(), b.x.begin(), b.x.end());
  a.w.insert(a.w.end(), b.w.begin(), b.w.end());
}

// Steps more than four times both neighbouring steps are gaps between
// segments and carry no weight.
std::vector<double> trapezoid_weights(const Eigen::ArrayXd& x) {
  const auto n = static_cast<std::size_t>(x.size());
  std::vector<double> h(n > 0 ? n - 1 : 0), w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i)
    h[i] = x(static_cast<Eigen::Index>(i + 1)) - x(static_cast<Eigen::Index>(i));
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double left = i > 0 ? h[i - 1] : h[i], right = i + 1 < h.size() ? h[i + 1] : h[i];
    const bool gap = (i > 0 || i + 1 < h.size()) && h[i] > 4.0 * left && h[i] > 4.0 * right;
    if (gap) continue;
    w[i] += 0.5 * h[i];
    w[i + 1] += 0.5 * h[i];
  }
  return w;
}

struct Ranges {
  double lo3 = 0, hi3 = 0;       // w3
  double lo_sum = 0, hi_sum = 0; // w1 + w2
  std::vector<std::pair<double, double>> pair_windows;
  bool empty() const { return !(hi3 > lo3) || !(hi_sum > lo_sum); }
};

Ranges ranges(const ResonanceTriple& t, const PulsedPump& pump, const PulsedOptions& o) {
  Ranges r;
  const double gp = t.pump.gamma_m;
  r.lo3 = std::max(pump.support_lo, t.pump.omega_m - o.pump_window_gammas * gp);
  r.hi3 = std::min(pump.support_hi, t.pump.omega_m + o.pump_window_gammas * gp);
  const double sum = t.signal.omega_m + t.idler.omega_m;
  const double spread = o.window_gammas * (t.signal.gamma_m + t.idler.gamma_m);
  r.lo_sum = std::max(2.0 * r.lo3, sum - spread);
  r.hi_sum = std::min(2.0 * r.hi3, sum + spread);
  const double half = o.window_gammas * std::max(t.signal.gamma_m, t.idler.gamma_m);
  std::vector<double> centres{t.signal.omega_m, t.idler.omega_m};
  std::sort(centres.begin(), centres.end());
  for (double c : centres) {
    if (!r.pair_windows.empty() && c - half <= r.pair_windows.back().second)
      r.pair_windows.back().second = c + half;
    else
      r.pair_windows.emplace_back(c - half, c + half);
  }
  return r;
}

// Evaluates the pump integral
//   I(w1, w2) = int dw3 phi(w3) phi(w4) sqrt(w3 w4) J(w1, w2, w3, w4)
// on a fixed trapezoid grid in w3.
class PumpIntegral {
 public:
  PumpIntegral(const StructureSpec& spec, const ResonanceTriple& triple, const PulsedPump& pump, FieldModel fields,
               double lo3, double hi3, double step3)
      : spec_(spec), triple_(triple), pump_(pump), fields_(fields), geometry_(overlap_geometry(spec)),
        kind_(kind_of(geometry_)), dispersive_(spec.waveguide.beta2 != 0.0) {
    if (dispersive_ && fields == FieldModel::kSolved)
      throw UnsupportedError("pulsed pump with beta2 != 0 supports the Lorentzian field model only");
    axis_ = uniform_axis(lo3, hi3, step3);
    phi3_.resize(axis_.x.size());
    amp3_.resize(axis_.x.size());
    for (std::size_t k = 0; k < axis_.x.size(); ++k) {
      phi3_[k] = pump_(axis_.x[k]);
      amp3_[k] = pump_amp(axis_.x[k]);
    }
    if (!dispersive_) tensor_ = OverlapKernel(geometry_, 0.0).tensor();
  }

  std::size_t points() const { return axis_.x.size(); }
  bool dispersive() const { return dispersive_; }

  Vec2 pump_amp(double w) const {
    if (fields_ == FieldModel::kSolved) {
      const PortResponse r = solve_linear(spec_, w, Port::kIn);
      return Vec2(r.circ1, r.circ2);
    }
    return Vec2(lorentzian_amplitude(triple_.pump, w), 0.0);
  }

  Vec2 pair_amp(double w) const {
    if (fields_ == FieldModel::kSolved) {
      const PortResponse r = solve_linear(spec_, w, spec_.is_ring() ? Port::kIn : Port::kAdd);
      return Vec2(r.circ1, r.circ2);
    }
    const cd a = lorentzian_amplitude(triple_.signal, w) + lorentzian_amplitude(triple_.idler, w);
    return kind_ == StructureKind::kRing ? Vec2(a, 0.0) : Vec2(0.0, a);
  }

  // M(a, b) = sum_cd T_abcd K_cd(sum) with K the pump-weighted outer
  // product of the w3, w4 amplitudes. Non-dispersive case only.
  Eigen::Matrix2cd pair_matrix(double omega_sum) const {
    Eigen::Matrix2cd k = Eigen::Matrix2cd::Zero();
    for (std::size_t i = 0; i < axis_.x.size(); ++i) {
      const double w3 = axis_.x[i], w4 = omega_sum - w3;
      if (!(w4 > 0)) continue;
      const cd p4 = pump_(w4);
      if (p4 == 0.0 || phi3_[i] == 0.0) continue;
      const cd weight = axis_.w[i] * phi3_[i] * p4 * std::sqrt(w3 * w4);
      k.noalias() += weight * amp3_[i] * pump_amp(w4).transpose();
    }
    Eigen::Matrix2cd m;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        cd s = 0.0;
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d) s += tensor_(8 * a + 4 * b + 2 * c + d) * k(c, d);
        m(a, b) = s;
      }
    return m;
  }

  static cd contract(const Vec2& u1, const Vec2& u2, const Eigen::Matrix2cd& m) {
    return (u1.conjugate().transpose() * m * u2.conjugate())(0, 0);
  }

  cd integral(double w1, double w2) const {
    if (!dispersive_) return contract(pair_amp(w1), pair_amp(w2), pair_matrix(w1 + w2));
    const cd pair = std::conj(pair_amp(w1).sum()) * std::conj(pair_amp(w2).sum());
    numerics::CompensatedSum<cd> acc;
    for (std::size_t i = 0; i < axis_.x.size(); ++i) {
      const double w3 = axis_.x[i], w4 = w1 + w2 - w3;
      if (!(w4 > 0)) continue;
      const cd p4 = pump_(w4);
      if (p4 == 0.0 || phi3_[i] == 0.0) continue;
      const double dk = phase_mismatch(spec_.waveguide, w1, w2, w3, w4);
      acc.add(axis_.w[i] * phi3_[i] * p4 * std::sqrt(w3 * w4) * amp3_[i].sum() * pump_amp(w4).sum() *
              ideal_overlap(geometry_, dk));
    }
    return pair * acc.value();
  }

 private:
  const StructureSpec& spec_;
  const ResonanceTriple& triple_;
  const PulsedPump& pump_;
  FieldModel fields_;
  OverlapGeometry geometry_;
  StructureKind kind_;
  bool dispersive_;
  Axis axis_;
  std::vector<cd> phi3_;
  std::vector<Vec2> amp3_;
  Eigen::Matrix<cd, 16, 1> tensor_ = Eigen::Matrix<cd, 16, 1>::Zero();
};

double pump_sigma(const PulsedPump& pump) { return pump.fwhm / kFwhmPerSigma; }

void check_inputs(const StructureSpec& spec, const ResonanceTriple& triple, const PulsedPump& pump,
                  const NonlinearSpec& nl) {
  spec.validate();
  pump.validate();
  nl.validate();
  triple.validate();
  check_s_perp(nl, triple.signal.omega_m, triple.idler.omega_m, pump.omega_center);
}

struct LevelResult {
  double beta_sq;
  std::array<long, 3> points;
};

LevelResult beta_sq_on_grid(const StructureSpec& spec, const ResonanceTriple& t, const PulsedPump& pump,
                            const NonlinearSpec& nl, const PulsedOptions& o, const Ranges& r, double scale) {
  const double gs = t.signal.gamma_m, gi = t.idler.gamma_m, gp = t.pump.gamma_m, s = pump_sigma(pump);
  const double h1 = 0.5 * std::min(gs, gi) * scale;
  const double h_sum = 0.5 * std::min({s, gs, gi, gp}) * scale;
  const double h3 = 0.5 * std::min(s, gp) * scale;

  Axis a1;
  for (const auto& [lo, hi] : r.pair_windows) append(a1, uniform_axis(lo, hi, h1));
  const Axis a_sum = uniform_axis(r.lo_sum, r.hi_sum, h_sum);
  const PumpIntegral pi(spec, t, pump, o.fields, r.lo3, r.hi3, h3);

  std::vector<Eigen::Matrix2cd> m;
  if (!pi.dispersive()) {
    m.resize(a_sum.x.size());
    detail::parallel_for(a_sum.x.size(), o.threads, [&](std::size_t j) { m[j] = pi.pair_matrix(a_sum.x[j]); });
  }

  std::vector<double> rows(a1.x.size(), 0.0);
  detail::parallel_for(a1.x.size(), o.threads, [&](std::size_t i) {
    const double w1 = a1.x[i];
    const Vec2 u1 = pi.pair_amp(w1);
    numerics::CompensatedSum<double> row;
    for (std::size_t j = 0; j < a_sum.x.size(); ++j) {
      const double w2 = a_sum.x[j] - w1;
      if (!(w2 > 0)) continue;
      const cd integral = pi.dispersive() ? pi.integral(w1, w2) : PumpIntegral::contract(u1, pi.pair_amp(w2), m[j]);
      row.add(a_sum.w[j] * w1 * w2 * std::norm(integral));
    }
    rows[i] = row.value();
  });
  numerics::CompensatedSum<double> total;
  for (std::size_t i = 0; i < rows.size(); ++i) total.add(a1.w[i] * rows[i]);

  const double prefactor = kHbar * kHbar * pump.alpha_sq * pump.alpha_sq / (8.0 * kPi * kPi) * nl.gamma_nl *
                           nl.gamma_nl / (pump.omega_center * pump.omega_center);
  return {prefactor * total.value(),
          {static_cast<long>(a1.x.size()), static_cast<long>(a_sum.x.size()), static_cast<long>(pi.points())}};
}

}  // namespace

PulsedPump PulsedPump::gaussian(double omega_center, double fwhm, double alpha_sq) {
  if (!(omega_center > 0)) throw std::invalid_argument("pulsed pump: centre frequency must be positive");
  if (!(fwhm > 0)) throw std::invalid_argument("pulsed pump: bandwidth must be positive");
  PulsedPump p;
  p.omega_center = omega_center;
  p.alpha_sq = alpha_sq;
  p.fwhm = fwhm;
  p.shape = "gaussian";
  const double s = fwhm / kFwhmPerSigma;
  p.support_lo = omega_center - 10.0 * s;
  p.support_hi = omega_center + 10.0 * s;
  p.knots = {p.support_lo, omega_center, p.support_hi};
  const double norm = std::pow(2.0 * kPi * s * s, -0.25);
  const double lo = p.support_lo, hi = p.support_hi;
  p.amplitude = [=](double w) -> cd {
    if (w < lo || w > hi) return 0.0;
    const double x = w - omega_center;
    return norm * std::exp(-x * x / (4.0 * s * s));
  };
  return p;
}

PulsedPump PulsedPump::from_samples(std::vector<double> omega, std::vector<cd> phi, double alpha_sq) {
  if (omega.size() != phi.size() || omega.size() < 3)
    throw std::invalid_argument("pulsed pump: need at least 3 samples with matching lengths");
  for (std::size_t i = 1; i < omega.size(); ++i)
    if (!(omega[i] > omega[i - 1])) throw std::invalid_argument("pulsed pump: sample grid must be strictly increasing");
  if (!(omega.front() > 0)) throw std::invalid_argument("pulsed pump: frequencies must be positive");
  PulsedPump p;
  p.alpha_sq = alpha_sq;
  p.shape = "samples";
  p.support_lo = omega.front();
  p.support_hi = omega.back();
  p.knots = omega;
  std::vector<double> intensity(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) intensity[i] = std::norm(phi[i]);
  p.fwhm = numerics::fwhm_from_samples(omega, intensity);
  numerics::CompensatedSum<double> m0, m1;
  for (std::size_t i = 0; i + 1 < omega.size(); ++i) {
    const double h = omega[i + 1] - omega[i];
    m0.add(0.5 * h * (intensity[i] + intensity[i + 1]));
    m1.add(0.5 * h * (omega[i] * intensity[i] + omega[i + 1] * intensity[i + 1]));
  }
  if (!(m0.value() > 0)) throw std::invalid_argument("pulsed pump: samples carry no power");
  p.omega_center = m1.value() / m0.value();
  p.amplitude = [omega = std::move(omega), phi = std::move(phi)](double w) -> cd {
    if (w < omega.front() || w > omega.back()) return 0.0;
    auto it = std::upper_bound(omega.begin(), omega.end(), w);
    if (it == omega.end()) return phi.back();
    const auto j = static_cast<std::size_t>(it - omega.begin());
    const double t = (w - omega[j - 1]) / (omega[j] - omega[j - 1]);
    return (1.0 - t) * phi[j - 1] + t * phi[j];
  };
  return p;
}

cd PulsedPump::operator()(double omega) const { return amplitude ? amplitude(omega) : cd{}; }

double PulsedPump::norm() const {
  numerics::QuadratureOptions opt;
  opt.rel_tol = 1e-12;
  return numerics::integrate_piecewise([this](double w) { return std::norm((*this)(w)); }, knots, opt).value;
}

void PulsedPump::validate() const {
  if (!(alpha_sq > 0)) throw std::invalid_argument("pulsed pump: alpha_sq must be positive");
  if (!amplitude || knots.size() < 2) throw std::invalid_argument("pulsed pump: no spectral profile");
  const double n = norm();
  if (!(std::abs(n - 1.0) <= 1e-6))
    throw std::invalid_argument(fmt::format("pulsed pump: int |phi_P|^2 = {:.9f}, expected 1 within 1e-6", n));
}

double PulsedPump::effective_duration() const {
  const double lo = support_lo, hi = support_hi;
  numerics::QuadratureOptions inner_opt, outer_opt;
  inner_opt.rel_tol = 1e-11;
  outer_opt.rel_tol = 1e-9;
  auto autoconv = [&](double sum) {
    const double a = std::max(lo, sum - hi), b = std::min(hi, sum - lo);
    if (!(b > a)) return 0.0;
    std::vector<double> breaks{a};
    for (double k : knots) {
      if (k > a && k < b) breaks.push_back(k);
      if (sum - k > a && sum - k < b) breaks.push_back(sum - k);
    }
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    const cd g = numerics::integrate_piecewise([&](double w) { return (*this)(w) * (*this)(sum - w); }, breaks,
                                               inner_opt)
                     .value;
    return std::norm(g);
  };
  std::vector<double> outer{2 * lo, 2 * omega_center, 2 * hi};
  const double g2 = numerics::integrate_piecewise(autoconv, outer, outer_opt).value;
  if (!(g2 > 0)) throw NumericError("pulsed pump: autoconvolution vanishes");
  return 2.0 * kPi / g2;
}

double PulsedPump::peak_power() const { return kHbar * omega_center * alpha_sq / effective_duration(); }

double alpha_sq_for_power(double power, double omega_center, double duration) {
  return power * duration / (kHbar * omega_center);
}

PairsPerPulse pairs_per_pulse(const StructureSpec& spec, const ResonanceTriple& triple, const PulsedPump& pump,
                              const NonlinearSpec& nl, const PulsedOptions& options) {
  check_inputs(spec, triple, pump, nl);
  PairsPerPulse out;
  const Ranges r = ranges(triple, pump, options);
  if (r.empty()) {
    out.warnings.push_back("pump spectrum does not overlap the pump and pair resonances; |beta|^2 = 0");
    return out;
  }
  LevelResult prev = beta_sq_on_grid(spec, triple, pump, nl, options, r, 1.0);
  double scale = 1.0;
  for (int level = 1; level <= options.max_refinements; ++level) {
    scale *= 0.5;
    const LevelResult cur = beta_sq_on_grid(spec, triple, pump, nl, options, r, scale);
    const double change = cur.beta_sq == prev.beta_sq ? 0.0 : std::abs(cur.beta_sq - prev.beta_sq) / std::abs(cur.beta_sq);
    out.beta_sq = cur.beta_sq;
    out.relative_change = change;
    out.refinements = level;
    out.points = cur.points;
    if (change < options.target_change) {
      if (out.beta_sq > 0.1)
        out.warnings.push_back(fmt::format("|beta|^2 = {:.3e} exceeds 0.1; the low-gain model is unreliable",
                                           out.beta_sq));
      return out;
    }
    prev = cur;
  }
  throw NumericError(fmt::format("pairs_per_pulse: grid too coarse, estimated discretization error {:.2f}% after {} "
                                 "refinements exceeds {:.2f}%",
                                 100 * out.relative_change, options.max_refinements, 100 * options.target_change));
}

Eigen::ArrayXd segmented_axis(std::span<const double> centers, double half_width, int points_per_segment) {
  if (centers.empty()) throw std::invalid_argument("segmented_axis: no centres");
  if (!(half_width > 0) || points_per_segment < 2)
    throw std::invalid_argument("segmented_axis: need a positive half width and >= 2 points per segment");
  std::vector<double> c(centers.begin(), centers.end());
  std::sort(c.begin(), c.end());
  const double step = 2.0 * half_width / (points_per_segment - 1);
  std::vector<std::pair<double, double>> segs;
  for (double x : c) {
    if (!segs.empty() && x - half_width <= segs.back().second)
      segs.back().second = x + half_width;
    else
      segs.emplace_back(x - half_width, x + half_width);
  }
  std::vector<double> pts;
  for (const auto& [lo, hi] : segs) {
    const long n = std::lround((hi - lo) / step) + 1;
    for (long i = 0; i < n; ++i) pts.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return Eigen::Map<const Eigen::ArrayXd>(pts.data(), static_cast<Eigen::Index>(pts.size()));
}

BiphotonResult biphoton_wavefunction(const StructureSpec& spec, const ResonanceTriple& triple,
                                     const PulsedPump& pump, const NonlinearSpec& nl, const Eigen::ArrayXd& omega1,
                                     const Eigen::ArrayXd& omega2, const PulsedOptions& options) {
  check_inputs(spec, triple, pump, nl);
  for (const auto* axis : {&omega1, &omega2}) {
    if (axis->size() < 3) throw std::invalid_argument("biphoton: each axis needs at least 3 points");
    for (Eigen::Index i = 1; i < axis->size(); ++i)
      if (!((*axis)(i) > (*axis)(i - 1))) throw std::invalid_argument("biphoton: axes must be strictly increasing");
  }
  BiphotonResult out;
  out.omega1 = omega1;
  out.omega2 = omega2;
  const Ranges r = ranges(triple, pump, options);
  if (!(r.hi3 > r.lo3)) throw NumericError("biphoton: pump spectrum misses the pump resonance");
  const double h3 = 0.125 * std::min(pump_sigma(pump), triple.pump.gamma_m);
  const PumpIntegral pi(spec, triple, pump, options.fields, r.lo3, r.hi3, h3);

  const double alpha = std::sqrt(pump.alpha_sq);
  const cd prefactor = cd(0.0, std::sqrt(2.0)) * kHbar * alpha * alpha * nl.gamma_nl / (4.0 * kPi) / pump.omega_center;
  const Eigen::Index n1 = omega1.size(), n2 = omega2.size();
  out.phi.resize(n1, n2);
  detail::parallel_for(static_cast<std::size_t>(n1), options.threads, [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    for (Eigen::Index j = 0; j < n2; ++j) {
      const double w1 = omega1(i), w2 = omega2(j);
      out.phi(i, j) = prefactor * std::sqrt(w1 * w2) * pi.integral(w1, w2);
    }
  });

  const std::vector<double> wt1 = trapezoid_weights(omega1), wt2 = trapezoid_weights(omega2);
  numerics::CompensatedSum<double> total;
  for (Eigen::Index i = 0; i < n1; ++i)
    for (Eigen::Index j = 0; j < n2; ++j)
      total.add(wt1[static_cast<std::size_t>(i)] * wt2[static_cast<std::size_t>(j)] * std::norm(out.phi(i, j)));
  out.pre_norm_integral = total.value();
  if (!(out.pre_norm_integral > 0)) throw NumericError("biphoton: wavefunction vanishes on the grid; cannot normalize");
  out.phi /= std::sqrt(out.pre_norm_integral);

  numerics::CompensatedSum<double> check;
  Eigen::ArrayXd marg1 = Eigen::ArrayXd::Zero(n1), marg2 = Eigen::ArrayXd::Zero(n2);
  for (Eigen::Index i = 0; i < n1; ++i)
    for (Eigen::Index j = 0; j < n2; ++j) {
      const double p = std::norm(out.phi(i, j));
      const double wi = wt1[static_cast<std::size_t>(i)], wj = wt2[static_cast<std::size_t>(j)];
      check.add(wi * wj * p);
      marg1(i) += wj * p;
      marg2(j) += wi * p;
    }
  out.norm_residual = std::abs(check.value() - 1.0);

  const double half = options.window_gammas * std::max(triple.signal.gamma_m, triple.idler.gamma_m);
  auto marginal_fwhm = [&](const Eigen::ArrayXd& axis, const Eigen::ArrayXd& m, double centre, const char* name) {
    std::vector<double> x, y;
    for (Eigen::Index k = 0; k < axis.size(); ++k)
      if (std::abs(axis(k) - centre) <= half) {
        x.push_back(axis(k));
        y.push_back(m(k));
      }
    try {
      return numerics::fwhm_from_samples(x, y);
    } catch (const std::exception& e) {
      out.warnings.push_back(fmt::format("{} marginal width not resolved: {}", name, e.what()));
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  out.marginal_fwhm_signal = marginal_fwhm(omega1, marg1, triple.signal.omega_m, "signal");
  out.marginal_fwhm_idler = marginal_fwhm(omega2, marg2, triple.idler.omega_m, "idler");
  return out;
}

}  // namespace ringpair
