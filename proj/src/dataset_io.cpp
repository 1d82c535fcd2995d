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

#include "fdc/dataset_io.hpp"

#include "fdc/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fdc::io {

namespace {

Json spectrum_to_json(const Spectrum& s) {
  Json out = Json::array();
  for (Index k = 0; k < s.samples().cols(); ++k) {
    Json bin = Json::array();
    for (Index c = 0; c < s.channels(); ++c) {
      const Complex v = s.samples()(c, k);
      bin.push_back({v.real(), v.imag()});
    }
    out.push_back(std::move(bin));
  }
  return out;
}

Spectrum spectrum_from_json(const Json& j, const FrequencyGrid& grid, const char* field) {
  require(j.is_array() && static_cast<Index>(j.size()) == grid.size(), ErrorCode::ConfigError,
          std::string("dataset: field ") + field + " must hold M samples");
  const Index channels = static_cast<Index>(j.at(0).size());
  require(channels > 0, ErrorCode::ConfigError, std::string("dataset: ") + field + " has no channels");
  ComplexMatrix samples(channels, grid.size());
  for (Index k = 0; k < grid.size(); ++k) {
    const Json& bin = j.at(static_cast<std::size_t>(k));
    require(bin.is_array() && static_cast<Index>(bin.size()) == channels, ErrorCode::ConfigError,
            std::string("dataset: inconsistent channel count in ") + field);
    for (Index c = 0; c < channels; ++c) {
      const Json& pair = bin.at(static_cast<std::size_t>(c));
      require(pair.is_array() && pair.size() == 2, ErrorCode::ConfigError,
              std::string("dataset: entries of ") + field + " must be [re, im] pairs");
      samples(c, k) = Complex(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
  }
  return Spectrum(grid, std::move(samples));
}

}  // namespace

Json spectra_to_json(const SpectraCollection& data) {
  Json out;
  out["M"] = data.grid().size();
  out["frequencies"] = data.grid().frequencies();
  Json exps = Json::array();
  for (const auto& e : data.experiments()) {
    Json je;
    je["U"] = spectrum_to_json(e.input);
    je["Y"] = spectrum_to_json(e.output);
    if (e.state) je["X"] = spectrum_to_json(*e.state);
    exps.push_back(std::move(je));
  }
  out["experiments"] = std::move(exps);
  return out;
}

SpectraCollection spectra_from_json(const Json& j) {
  try {
    const auto m = j.at("M").get<Index>();
    require(m >= 1, ErrorCode::ConfigError, "dataset: M must be >= 1");
    const FrequencyGrid grid(m);
    if (j.contains("frequencies")) {
      const auto& f = j.at("frequencies");
      require(f.is_array() && static_cast<Index>(f.size()) == m, ErrorCode::ConfigError,
              "dataset: frequencies must have M entries");
      for (Index k = 0; k < m; ++k) {
        require(std::abs(f.at(static_cast<std::size_t>(k)).get<double>() - grid.frequency(k)) <= 1e-9,
                ErrorCode::ConfigError, "dataset: frequencies are not the grid pi*k/M");
      }
    }
    std::vector<Experiment> exps;
    for (const auto& je : j.at("experiments")) {
      Experiment e;
      e.input = spectrum_from_json(je.at("U"), grid, "U");
      e.output = spectrum_from_json(je.at("Y"), grid, "Y");
      if (je.contains("X")) e.state = spectrum_from_json(je.at("X"), grid, "X");
      exps.push_back(std::move(e));
    }
    return SpectraCollection(grid, std::move(exps));
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::ConfigError, std::string("dataset: ") + ex.what());
  } catch (const Error& ex) {
    fail(ErrorCode::ConfigError, ex.what());
  }
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::ConfigError, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::ConfigError, path.string() + ": " + ex.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::ConfigError, "cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

void write_spectra(const std::filesystem::path& path, const SpectraCollection& data) {
  write_json(path, spectra_to_json(data));
}

SpectraCollection read_spectra(const std::filesystem::path& path) {
  return spectra_from_json(read_json(path));
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string trajectories_to_csv(const Trajectory& u, const Trajectory& y) {
  require(u.length() == y.length() && u.first_index() == y.first_index(), ErrorCode::InvalidInput,
          "csv: input and output trajectories must share their index range");
  std::ostringstream os;
  os << "k";
  for (Index i = 0; i < u.channels(); ++i) os << ",u" << (i + 1);
  for (Index i = 0; i < y.channels(); ++i) os << ",y" << (i + 1);
  os << "\n";
  for (Index t = 0; t < u.length(); ++t) {
    os << (u.first_index() + static_cast<long>(t));
    for (Index i = 0; i < u.channels(); ++i) os << "," << format_double(u.samples()(i, t));
    for (Index i = 0; i < y.channels(); ++i) os << "," << format_double(y.samples()(i, t));
    os << "\n";
  }
  return os.str();
}

void write_trajectories(const std::filesystem::path& path, const Trajectory& u, const Trajectory& y) {
  write_text(path, trajectories_to_csv(u, y));
}

std::pair<Trajectory, Trajectory> read_trajectories(const std::filesystem::path& path,
                                                    Index input_channels) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::ConfigError, "cannot open " + path.string());
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::ConfigError,
          path.string() + ": missing header");
  Index columns = 0;
  {
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) ++columns;
  }
  if (input_channels < 0) {
    input_channels = 0;
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) {
      if (!cell.empty() && cell[0] == 'u') ++input_channels;
    }
  }
  const Index outputs = columns - 1 - input_channels;
  require(input_channels > 0 && outputs > 0, ErrorCode::ConfigError,
          path.string() + ": header must be k,u1..,y1..");
  std::vector<std::vector<double>> rows;
  long first = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    require(static_cast<Index>(row.size()) == columns, ErrorCode::ConfigError,
            path.string() + ": ragged row");
    if (rows.empty()) first = static_cast<long>(row[0]);
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), ErrorCode::ConfigError, path.string() + ": no samples");
  RealMatrix u(input_channels, static_cast<Index>(rows.size()));
  RealMatrix y(outputs, static_cast<Index>(rows.size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (Index i = 0; i < input_channels; ++i) u(i, static_cast<Index>(t)) = rows[t][1 + static_cast<std::size_t>(i)];
    for (Index i = 0; i < outputs; ++i)
      y(i, static_cast<Index>(t)) = rows[t][1 + static_cast<std::size_t>(input_channels + i)];
  }
  return {Trajectory(std::move(u), first), Trajectory(std::move(y), first)};
}

Json matrix_to_json(const RealMatrix& m) {
  Json out = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

RealMatrix matrix_from_json(const Json& j) {
  require(j.is_array(), ErrorCode::ConfigError, "matrix must be an array of rows");
  if (j.empty()) return RealMatrix(0, 0);
  if (!j.at(0).is_array()) {
    // A flat array is a column vector.
    RealMatrix m(static_cast<Index>(j.size()), 1);
    for (std::size_t r = 0; r < j.size(); ++r) m(static_cast<Index>(r), 0) = j.at(r).get<double>();
    return m;
  }
  const auto rows = static_cast<Index>(j.size());
  const auto cols = static_cast<Index>(j.at(0).size());
  RealMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const Json& row = j.at(static_cast<std::size_t>(r));
    require(row.is_array() && static_cast<Index>(row.size()) == cols, ErrorCode::ConfigError,
            "matrix rows must have equal length");
    for (Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

Json vector_to_json(const RealVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

RealVector vector_from_json(const Json& j) {
  require(j.is_array(), ErrorCode::ConfigError, "vector must be an array");
  RealVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = j.at(i).get<double>();
  return v;
}

Json complex_vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

ComplexVector complex_vector_from_json(const Json& j) {
  require(j.is_array(), ErrorCode::ConfigError, "complex vector must be an array");
  ComplexVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& e = j.at(i);
    if (e.is_array()) {
      require(e.size() == 2, ErrorCode::ConfigError, "complex entries must be [re, im]");
      v(static_cast<Index>(i)) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    } else {
      v(static_cast<Index>(i)) = Complex(e.get<double>(), 0.0);
    }
  }
  return v;
}

}  // namespace fdc::io
