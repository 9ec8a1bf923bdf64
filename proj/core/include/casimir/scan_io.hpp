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

#include <iosfwd>
#include <string>

#include "casimir/force_curve.hpp"

namespace casimir {

/// Scan CSV: `# scan_id=`, `# applied_voltage_v=` (required), optional
/// `# spring_constant_n_per_m=` and `# temperature_k=`, other `# key=value`
/// lines kept as metadata; header `piezo_nm,signal` or `piezo_nm,force_pn`;
/// one sample per line. Throws ParseError naming the line.
ForceCurve load_scan(std::istream& in);
ForceCurve load_scan_file(const std::string& path);

/// Writes the same dialect, numbers at 9 significant digits.
void write_scan(std::ostream& out, const ForceCurve& curve);

}  // namespace casimir
