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

#include <doctest.h>

#include <vector>

#include "fixtures.hpp"
#include "ringpair/errors.hpp"
#include "ringpair/numerics.hpp"

using namespace ringpair;
using namespace ringpair::testing;
using cd = std::complex<double>;

TEST_CASE("adaptive quadrature on closed-form integrals") {
  const auto r = numerics::integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));

  const double k = 250.0;
  const auto osc = numerics::integrate_adaptive([k](double x) { return std::polar(1.0, k * x); }, 0.0, 1.0,
                                                {.rel_tol = 1e-12});
  const cd exact = (std::polar(1.0, k) - 1.0) / cd(0, k);
  CHECK(std::abs(osc.value - exact) < 1e-11 * std::abs(exact));

  const double g = 1e-3;
  const auto lor = numerics::integrate_piecewise(
      [g](double x) { return (g / 2) / (x * x + g * g / 4); }, std::vector<double>{-1.0, 0.0, 1.0},
      {.rel_tol = 1e-12});
  CHECK(lor.value == doctest::Approx(2 * std::atan(2 / g)).epsilon(1e-11));
}

TEST_CASE("vector-valued quadrature shares subdivisions") {
  const auto r = numerics::integrate_adaptive(
      [](double x) {
        Eigen::Vector3d v;
        v << 1.0, x, std::sin(x);
        return v;
      },
      0.0, kPi, {.rel_tol = 1e-12});
  CHECK(r.value(0) == doctest::Approx(kPi).epsilon(1e-13));
  CHECK(r.value(1) == doctest::Approx(kPi * kPi / 2).epsilon(1e-13));
  CHECK(r.value(2) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK_THROWS_AS(numerics::integrate_adaptive([](double) { return 1.0; }, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("compensated summation") {
  numerics::CompensatedSum<double> s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-6));
}

TEST_CASE("bracketed root finding") {
  const auto r = numerics::find_root_bracketed([](double x) { return std::cos(x) - x; }, 0.0, 1.0, 1e-15);
  CHECK(r.root == doctest::Approx(0.7390851332151607).epsilon(1e-14));
  CHECK_THROWS_AS(numerics::find_root_bracketed([](double x) { return x * x + 1; }, -1.0, 1.0, 1e-12),
                  NumericError);
  CHECK_THROWS_AS(numerics::find_root_bracketed([](double x) { return x; }, 1.0, -1.0, 1e-12),
                  std::invalid_argument);
}

TEST_CASE("lorentzian fit recovers synthetic parameters") {
  auto g = rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const double c = uniform(g, -1, 1), w = uniform(g, 0.05, 0.5), p = uniform(g, 1, 100);
    std::vector<double> x, y;
    for (int i = 0; i <= 400; ++i) {
      const double xi = c - 3 * w + 6 * w * i / 400.0;
      const double d = (xi - c) / (w / 2);
      x.push_back(xi);
      y.push_back(p / (1 + d * d));
    }
    const auto fit = numerics::fit_lorentzian(x, y);
    CHECK(fit.center == doctest::Approx(c).epsilon(1e-8).scale(1.0));
    CHECK(fit.fwhm == doctest::Approx(w).epsilon(1e-8));
    CHECK(fit.peak == doctest::Approx(p).epsilon(1e-8));
    CHECK(std::abs(numerics::fwhm_from_samples(x, y) - w) < 1e-3 * w);
  }
  const std::vector<double> flat(10, 1.0), xs{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  CHECK_THROWS_AS(numerics::fit_lorentzian(xs, flat), NumericError);
  CHECK_THROWS_AS(numerics::fwhm_from_samples(xs, flat), NumericError);
}
