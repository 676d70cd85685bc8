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

// Shared numerical kernels: global adaptive Gauss-Kronrod quadrature (real or
// complex integrands on one subdivision), bracketed root finding, Lorentzian
// peak fitting and compensated summation.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <fmt/format.h>

#include "ringpair/errors.hpp"

namespace ringpair::numerics {

template <typename T>
struct QuadratureResult {
  T value{};
  double abs_error_estimate = 0;
  int evaluations = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0;
  int max_subdivisions = 4000;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (0.949..., 0.741..., 0.405...) and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Max-norm for vector-valued integrands (Eigen), |v| otherwise.
template <typename T>
double magnitude(const T& v) {
  if constexpr (requires { v.cwiseAbs().maxCoeff(); })
    return v.size() == 0 ? 0.0 : static_cast<double>(v.cwiseAbs().maxCoeff());
  else
    return std::abs(v);
}

template <typename T>
T zero_like(const T& like) {
  if constexpr (requires { T::Zero(like.size()); })
    return T::Zero(like.size());
  else
    return T{};
}

template <typename T>
struct Segment {
  double a, b;
  T value;
  double error;
  double abs_value;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename T, typename F>
Segment<T> gauss_kronrod(const F& f, double a, double b) {
  const double centre = 0.5 * (a + b), half = 0.5 * (b - a);
  const T fc = f(centre);
  T kronrod = fc * kKronrodWeights[7];
  T gauss = fc * kGaussWeights[3];
  double abs_sum = magnitude(fc) * kKronrodWeights[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const T f1 = f(centre - dx), f2 = f(centre + dx);
    kronrod += (f1 + f2) * kKronrodWeights[j];
    abs_sum += (magnitude(f1) + magnitude(f2)) * kKronrodWeights[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kGaussWeights[j / 2];
  }
  const T diff = kronrod - gauss;
  return {a, b, T(kronrod * half), magnitude(diff) * std::abs(half), abs_sum * std::abs(half)};
}

}  // namespace detail

// Integrates f over [a, b]. The result type follows f (double or
// std::complex<double>). Complex integrands share one subdivision so their
// real and imaginary parts stay phase-coherent. Stops when the summed
// |K15 - G7| estimate drops below max(abs_tol, rel_tol |I|, 50 eps int|f|);
// exceeding max_subdivisions throws NumericError with the achieved error.
template <typename F>
auto integrate_adaptive(F&& f, double a, double b, const QuadratureOptions& opt = {})
    -> QuadratureResult<std::decay_t<std::invoke_result_t<F&, double>>> {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  if (!(a < b)) throw std::invalid_argument("integrate_adaptive: requires a < b");
  std::priority_queue<detail::Segment<T>> heap;
  auto first = detail::gauss_kronrod<T>(f, a, b);
  T total = first.value;
  double total_error = first.error, total_abs = first.abs_value;
  int evaluations = 15;
  heap.push(first);
  auto converged = [&] {
    const double target = std::max({opt.abs_tol, opt.rel_tol * detail::magnitude(total),
                                    50.0 * std::numeric_limits<double>::epsilon() * total_abs});
    return total_error <= target;
  };
  int subdivisions = 0;
  while (!converged()) {
    if (subdivisions >= opt.max_subdivisions) {
      throw NumericError(fmt::format(
          "integrate_adaptive: subdivision limit {} reached on [{:.6e}, {:.6e}], achieved abs error {:.3e} "
          "(relative {:.3e})",
          opt.max_subdivisions, a, b, total_error, total_error / std::max(detail::magnitude(total), 1e-300)));
    }
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gauss_kronrod<T>(f, worst.a, mid);
    auto right = detail::gauss_kronrod<T>(f, mid, worst.b);
    evaluations += 30;
    ++subdivisions;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum from the surviving segments; the running total drifts by rounding.
  T value = detail::zero_like(first.value);
  double error = 0;
  std::vector<detail::Segment<T>> parts;
  parts.reserve(heap.size());
  while (!heap.empty()) {
    parts.push_back(heap.top());
    heap.pop();
  }
  std::sort(parts.begin(), parts.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
  for (const auto& p : parts) {
    value += p.value;
    error += p.error;
  }
  return {value, error, evaluations};
}

// Integrates over consecutive [breaks[i], breaks[i+1]] pieces and sums.
template <typename F>
auto integrate_piecewise(F&& f, std::span<const double> breaks, const QuadratureOptions& opt = {})
    -> QuadratureResult<std::decay_t<std::invoke_result_t<F&, double>>> {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  QuadratureResult<T> out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    auto piece = integrate_adaptive(f, breaks[i], breaks[i + 1], opt);
    if (i == 0) out.value = detail::zero_like(piece.value);
    out.value += piece.value;
    out.abs_error_estimate += piece.abs_error_estimate;
    out.evaluations += piece.evaluations;
  }
  return out;
}

// Neumaier compensated accumulator.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    if constexpr (std::is_same_v<T, std::complex<double>>) {
      add_real(re_, cre_, x.real());
      add_real(im_, cim_, x.imag());
    } else {
      add_real(re_, cre_, x);
    }
  }
  T value() const {
    if constexpr (std::is_same_v<T, std::complex<double>>) {
      return {re_ + cre_, im_ + cim_};
    } else {
      return re_ + cre_;
    }
  }

 private:
  static void add_real(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double re_ = 0, cre_ = 0, im_ = 0, cim_ = 0;
};

struct RootResult {
  double root;
  int evaluations;
};

// Root of g in [lo, hi] to within tol (absolute, in x). g(lo) and g(hi) must
// differ in sign unless one of them is exactly zero. The iterate never leaves
// the bracket.
RootResult find_root_bracketed(const std::function<double(double)>& g, double lo, double hi, double tol);

struct LorentzianFit {
  double center;
  double fwhm;
  double peak;
  double residual_rms;  // in units of y
};

// Least-squares fit of y = peak (G^2/4) / (G^2/4 + (x - center)^2).
// Needs >= 5 points spanning >= 2 FWHM. Flat or featureless data throws
// NumericError.
LorentzianFit fit_lorentzian(std::span<const double> x, std::span<const double> y);

// Full width at half maximum of sampled data around its largest sample,
// with linear interpolation of the two half-maximum crossings.
double fwhm_from_samples(std::span<const double> x, std::span<const double> y);

}  // namespace ringpair::numerics
