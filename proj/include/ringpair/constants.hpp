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

#include <numbers>

namespace ringpair {

inline constexpr double kSpeedOfLight = 299792458.0;     // m/s
inline constexpr double kHbar = 1.054571817e-34;         // J s
inline constexpr double kPi = std::numbers::pi;

inline constexpr double wavelength_to_omega(double lambda) { return 2.0 * kPi * kSpeedOfLight / lambda; }
inline constexpr double omega_to_wavelength(double omega) { return 2.0 * kPi * kSpeedOfLight / omega; }

}  // namespace ringpair
