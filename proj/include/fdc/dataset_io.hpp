// Copyright 2026 The fdc Authors
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

#include "fdc/core.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace fdc::io {

using Json = nlohmann::json;

/// Dataset schema:
///   { "M": int, "frequencies": [rad/sample...],
///     "experiments": [ { "U": [...], "Y": [...], "X": [...]? } ] }
/// where each of U/Y/X is an M-length array of channel-length arrays of
/// [re, im] pairs.
Json spectra_to_json(const SpectraCollection& data);
SpectraCollection spectra_from_json(const Json& j);

void write_spectra(const std::filesystem::path& path, const SpectraCollection& data);
SpectraCollection read_spectra(const std::filesystem::path& path);

/// CSV with header `k,u1..u_nu,y1..y_ny`, one row per sample.
std::string trajectories_to_csv(const Trajectory& u, const Trajectory& y);
void write_trajectories(const std::filesystem::path& path, const Trajectory& u, const Trajectory& y);
std::pair<Trajectory, Trajectory> read_trajectories(const std::filesystem::path& path,
                                                    Index input_channels);

/// 17 significant digits; round-trips doubles.
std::string format_double(double v);

Json matrix_to_json(const RealMatrix& m);
RealMatrix matrix_from_json(const Json& j);
Json vector_to_json(const RealVector& v);
RealVector vector_from_json(const Json& j);
Json complex_vector_to_json(const ComplexVector& v);
ComplexVector complex_vector_from_json(const Json& j);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace fdc::io
