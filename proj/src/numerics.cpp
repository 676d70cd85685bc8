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

#include "ringpair/numerics.hpp"

#include <algorithm>
#include <cstdint>

#include <Eigen/Dense>
#include <boost/math/tools/toms748_solve.hpp>
#include <unsupported/Eigen/NonLinearOptimization>

namespace ringpair::numerics {

RootResult find_root_bracketed(const std::function<double(double)>& g, double lo, double hi, double tol) {
  if (!(lo < hi)) throw std::invalid_argument("find_root_bracketed: requires lo < hi");
  if (!(tol > 0)) throw std::invalid_argument("find_root_bracketed: tol must be positive");
  const double g_lo = g(lo), g_hi = g(hi);
  if (g_lo == 0) return {lo, 2};
  if (g_hi == 0) return {hi, 2};
  if (!std::isfinite(g_lo) || !std::isfinite(g_hi) || std::signbit(g_lo) == std::signbit(g_hi)) {
    throw NumericError(fmt::format("find_root_bracketed: no sign change on [{:.9e}, {:.9e}] (g = {:.3e}, {:.3e})",
                                   lo, hi, g_lo, g_hi));
  }
  std::uintmax_t max_iter = 200;
  auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  const auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi, stop, max_iter);
  const double root = std::clamp(0.5 * (a + b), lo, hi);
  return {root, static_cast<int>(max_iter) + 2};
}

namespace {

// Residuals in normalized coordinates: u = (x - x_ref) / scale, v = y / y_max.
struct LorentzianResidual {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const Eigen::VectorXd& u;
  const Eigen::VectorXd& v;

  int inputs() const { return 3; }
  int values() const { return static_cast<int>(u.size()); }

  // p = (center, half width, peak)
  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
    const double h2 = p(1) * p(1);
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double d = u(i) - p(0);
      r(i) = p(2) * h2 / (h2 + d * d) - v(i);
    }
    return 0;
  }

  int df(const Eigen::VectorXd& p, Eigen::MatrixXd& jac) const {
    const double h = p(1), h2 = h * h;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double d = u(i) - p(0);
      const double den = h2 + d * d;
      const double shape = h2 / den;
      jac(i, 0) = p(2) * 2.0 * h2 * d / (den * den);
      jac(i, 1) = p(2) * 2.0 * h * d * d / (den * den);
      jac(i, 2) = shape;
    }
    return 0;
  }
};

}  // namespace

LorentzianFit fit_lorentzian(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_lorentzian: x and y differ in length");
  const auto n = static_cast<Eigen::Index>(x.size());
  if (n < 5) throw NumericError("fit_lorentzian: need at least 5 points");

  const auto [min_it, max_it] = std::minmax_element(y.begin(), y.end());
  const double y_max = *max_it, y_min = *min_it;
  if (!(y_max > 0) || !(y_max - y_min > 1e-9 * std::abs(y_max)))
    throw NumericError("fit_lorentzian: data are flat; fit is ill-conditioned");

  const auto peak_idx = static_cast<std::size_t>(max_it - y.begin());
  // Initial half width from the half-maximum crossings.
  auto crossing = [&](int dir) {
    std::size_t i = peak_idx;
    while (true) {
      if ((dir < 0 && i == 0) || (dir > 0 && i + 1 == x.size())) return x[i];
      const std::size_t j = dir < 0 ? i - 1 : i + 1;
      if (y[j] <= 0.5 * y_max) {
        const double t = (0.5 * y_max - y[i]) / (y[j] - y[i]);
        return x[i] + t * (x[j] - x[i]);
      }
      i = j;
    }
  };
  const double half_guess = 0.5 * std::abs(crossing(+1) - crossing(-1));
  const double span = std::abs(x.back() - x.front());
  if (!(half_guess > 0)) throw NumericError("fit_lorentzian: no resolvable peak width");
  if (span < 2.0 * (2.0 * half_guess) * 0.999)
    throw NumericError("fit_lorentzian: data must span at least 2 FWHM");

  const double x_ref = x[peak_idx];
  Eigen::VectorXd u(n), v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    u(i) = (x[static_cast<std::size_t>(i)] - x_ref) / half_guess;
    v(i) = y[static_cast<std::size_t>(i)] / y_max;
  }

  LorentzianResidual functor{u, v};
  Eigen::VectorXd p(3);
  p << 0.0, 1.0, 1.0;
  Eigen::LevenbergMarquardt<LorentzianResidual> lm(functor);
  lm.parameters.ftol = 1e-15;
  lm.parameters.xtol = 1e-15;
  lm.parameters.maxfev = 2000;
  const auto status = lm.minimize(p);
  using Status = Eigen::LevenbergMarquardtSpace::Status;
  if (status == Status::ImproperInputParameters || status == Status::TooManyFunctionEvaluation ||
      !p.allFinite() || !(std::abs(p(1)) > 0)) {
    throw NumericError(fmt::format("fit_lorentzian: did not converge (status {})", static_cast<int>(status)));
  }

  Eigen::VectorXd r(n);
  functor(p, r);
  return {x_ref + p(0) * half_guess, 2.0 * std::abs(p(1)) * half_guess, p(2) * y_max,
          std::sqrt(r.squaredNorm() / static_cast<double>(n)) * y_max};
}

double fwhm_from_samples(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) throw std::invalid_argument("fwhm_from_samples: need >= 3 matching samples");
  const auto peak = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  const double half = 0.5 * y[peak];
  if (!(half > 0)) throw NumericError("fwhm_from_samples: peak is not positive");
  auto crossing = [&](std::size_t i, std::size_t j) {
    return x[i] + (half - y[i]) * (x[j] - x[i]) / (y[j] - y[i]);
  };
  std::size_t l = peak;
  while (l > 0 && y[l - 1] >= half) --l;
  std::size_t r = peak;
  while (r + 1 < y.size() && y[r + 1] >= half) ++r;
  if (l == 0 || r + 1 == y.size()) throw NumericError("fwhm_from_samples: half maximum not reached inside the samples");
  return crossing(r, r + 1) - crossing(l - 1, l);
}

}  // namespace ringpair::numerics
