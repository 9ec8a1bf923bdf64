// Copyright 2026 The casimir-twin Authors
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

// Internal computation is SI (m, N, rad/s). Interface files and CLI flags
// use nm, pN and eV; conversions happen only at those boundaries.

namespace casimir::units {

inline constexpr double nm = 1e-9;
inline constexpr double um = 1e-6;
inline constexpr double pN = 1e-12;
inline constexpr double nN = 1e-9;
inline constexpr double meV = 1e-3;  // in eV

constexpr double nm_to_m(double v) { return v * nm; }
constexpr double m_to_nm(double v) { return v / nm; }
constexpr double pn_to_n(double v) { return v * pN; }
constexpr double n_to_pn(double v) { return v / pN; }

}  // namespace casimir::units
