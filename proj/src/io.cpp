// Copyright 2026 The sossubmod Authors.
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

#include "sossubmod/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace sossubmod::io {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad field \"") + key + "\": " + e.what());
  }
}

template <typename T>
T field_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return field<T>(j, key);
}

// Coefficients may be given as strings or JSON numbers; numbers go through
// their textual form so "0.1" stays exactly one tenth.
Rational rational_field(const Json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.dump());
  if (v.is_number()) return parse_rational(v.dump());
  throw ParseError("expected a number or decimal string, got " + v.dump());
}

RationalMatrix matrix_field(const Json& j, const char* key) {
  const Json& rows = j.at(key);
  if (!rows.is_array()) throw ParseError(std::string("\"") + key + "\" must be an array of rows");
  RationalMatrix out;
  for (const auto& row : rows) {
    if (!row.is_array()) throw ParseError(std::string("\"") + key + "\" must be an array of rows");
    std::vector<Rational> r;
    for (const auto& v : row) r.push_back(rational_field(v));
    out.push_back(std::move(r));
  }
  return out;
}

Json matrix_json(const RationalMatrix& a) {
  Json rows = Json::array();
  for (const auto& row : a) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(format_rational(v));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<std::vector<double>> features_field(const Json& j) {
  if (j.contains("z")) return field<std::vector<std::vector<double>>>(j, "z");
  if (!j.contains("seed")) throw ParseError("synthetic family needs \"seed\" or explicit \"z\"");
  const int n = field<int>(j, "n");
  const int dim = field_or<int>(j, "dim", 10);
  if (n < 1 || dim < 1) throw ParseError("synthetic family needs n >= 1 and dim >= 1");
  return random_features(n, dim, field<std::uint64_t>(j, "seed"));
}

Json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json to_json(const SetFunction& f) {
  Json terms = Json::array();
  for (const auto& [mask, c] : f.terms()) {
    terms.push_back(Json{{"subset", SubsetMask(mask).indices()}, {"coeff", format_rational(c)}});
  }
  return Json{{"n", f.n()}, {"terms", std::move(terms)}};
}

Json to_json(const ValueTable& v) {
  Json values = Json::array();
  for (const auto& x : v.values) values.push_back(format_rational(x));
  return Json{{"n", v.n}, {"values", std::move(values)}};
}

ValueTable valuetable_from_json(const Json& j) {
  const int n = field<int>(j, "n");
  check_capacity(n, kMaxStorageN, "value table");
  if (n < 0) throw ParseError("n must be nonnegative");
  const Json& values = j.at("values");
  if (!values.is_array() || values.size() != (std::size_t{1} << n)) {
    throw ParseError("\"values\" must hold 2^n entries");
  }
  std::vector<Rational> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(rational_field(v));
  return ValueTable(n, std::move(out));
}

SetFunction setfunction_from_json(const Json& j) {
  if (j.is_object() && j.contains("values")) return mle_from_values(valuetable_from_json(j));
  const int n = field<int>(j, "n");
  if (n < 0) throw ParseError("n must be nonnegative");
  check_capacity(n, kMaxStorageN, "set function");
  if (!j.contains("terms") || !j.at("terms").is_array()) throw ParseError("missing \"terms\" array");
  SetFunction::Terms terms;
  for (const auto& t : j.at("terms")) {
    const auto subset = field<std::vector<int>>(t, "subset");
    if (!t.contains("coeff")) throw ParseError("term without \"coeff\"");
    for (std::size_t k = 0; k < subset.size(); ++k) {
      if (subset[k] < 0 || subset[k] >= n) throw ParseError("subset index out of range");
      if (k > 0 && subset[k] <= subset[k - 1]) throw ParseError("subset indices must be strictly increasing");
    }
    const std::uint32_t mask = SubsetMask::from_indices(subset).bits;
    if (terms.count(mask)) throw ParseError("duplicate subset in terms");
    terms[mask] = rational_field(t.at("coeff"));
  }
  return SetFunction(n, std::move(terms));
}

Json to_json(const FamilySpec& spec) {
  Json j{{"family", family_name(spec)}};
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, family::GraphCut>) {
          j["adjacency"] = matrix_json(s.adjacency);
        } else if constexpr (std::is_same_v<T, family::HypergraphCut>) {
          j["n"] = s.n;
          j["edges"] = s.edges;
          Json w = Json::array();
          for (const auto& x : s.weights) w.push_back(format_rational(x));
          j["weights"] = std::move(w);
        } else if constexpr (std::is_same_v<T, family::Coverage>) {
          j["m"] = s.m;
          j["sets"] = s.sets;
        } else if constexpr (std::is_same_v<T, family::ConcaveCardinality>) {
          j["n"] = s.n;
          Json phi = Json::array();
          for (const auto& x : s.phi) phi.push_back(format_rational(x));
          j["phi"] = std::move(phi);
        } else if constexpr (std::is_same_v<T, family::Determinantal>) {
          j["sigma_matrix"] = matrix_json(s.sigma_matrix);
          j["sigma"] = format_rational(s.sigma);
        } else if constexpr (std::is_same_v<T, family::SyntheticLog> || std::is_same_v<T, family::FacilityLocation>) {
          j["z"] = s.z;
        } else {
          j["n"] = s.n;
        }
      },
      spec);
  return j;
}

FamilySpec familyspec_from_json(const Json& j) {
  const std::string name = field<std::string>(j, "family");
  FamilySpec spec;
  try {
    if (name == "GraphCut") {
      spec = family::GraphCut{matrix_field(j, "adjacency")};
    } else if (name == "HypergraphCut") {
      family::HypergraphCut h;
      h.n = field<int>(j, "n");
      h.edges = field<std::vector<std::vector<int>>>(j, "edges");
      if (j.contains("weights")) {
        for (const auto& w : j.at("weights")) h.weights.push_back(rational_field(w));
      } else {
        h.weights.assign(h.edges.size(), Rational(1));
      }
      spec = h;
    } else if (name == "Coverage") {
      spec = family::Coverage{field<int>(j, "m"), field<std::vector<std::vector<int>>>(j, "sets")};
    } else if (name == "ConcaveCardinality") {
      family::ConcaveCardinality c;
      c.n = field<int>(j, "n");
      for (const auto& v : j.at("phi")) c.phi.push_back(rational_field(v));
      spec = c;
    } else if (name == "CounterexampleDeg4") {
      spec = family::CounterexampleDeg4{field<int>(j, "n")};
    } else if (name == "ProductMonomial") {
      spec = family::ProductMonomial{field<int>(j, "n")};
    } else if (name == "BudgetAdditive") {
      spec = family::BudgetAdditive{field<int>(j, "n")};
    } else if (name == "ConvolutionWitness") {
      spec = family::ConvolutionWitness{field<int>(j, "n")};
    } else if (name == "MonotonizationWitness") {
      spec = family::MonotonizationWitness{field<int>(j, "n")};
    } else if (name == "Determinantal") {
      family::Determinantal d;
      if (j.contains("sigma_matrix")) {
        d.sigma_matrix = matrix_field(j, "sigma_matrix");
      } else {
        if (!j.contains("seed")) throw ParseError("Determinantal needs \"sigma_matrix\" or \"n\" and \"seed\"");
        d.sigma_matrix = random_spd(field<int>(j, "n"), field<std::uint64_t>(j, "seed"));
      }
      d.sigma = j.contains("sigma") ? rational_field(j.at("sigma")) : Rational(2);
      spec = d;
    } else if (name == "SyntheticLog") {
      spec = family::SyntheticLog{features_field(j)};
    } else if (name == "FacilityLocation") {
      spec = family::FacilityLocation{features_field(j)};
    } else {
      throw ParseError("unknown family \"" + name + "\"");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("bad " + name + " spec: " + e.what());
  }
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid family spec: ") + e.what());
  }
  return spec;
}

ToleranceProfile tolerance_from_json(const Json& j) {
  ToleranceProfile tol;
  if (!j.is_object()) throw ParseError("tolerance profile must be an object");
  static const char* known[] = {"eq_abs",      "gap_rel",       "psd_eig",       "feas_scale",
                                "infeas_scale", "verify_scale", "max_iterations"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw ParseError("unknown tolerance field \"" + key + "\"");
    }
  }
  tol.eq_abs = field_or(j, "eq_abs", tol.eq_abs);
  tol.gap_rel = field_or(j, "gap_rel", tol.gap_rel);
  tol.psd_eig = field_or(j, "psd_eig", tol.psd_eig);
  tol.feas_scale = field_or(j, "feas_scale", tol.feas_scale);
  tol.infeas_scale = field_or(j, "infeas_scale", tol.infeas_scale);
  tol.verify_scale = field_or(j, "verify_scale", tol.verify_scale);
  tol.max_iterations = field_or(j, "max_iterations", tol.max_iterations);
  if (!(tol.feas_scale < tol.infeas_scale)) throw ParseError("feas_scale must be below infeas_scale");
  if (tol.max_iterations < 1) throw ParseError("max_iterations must be positive");
  return tol;
}

Json to_json(const ToleranceProfile& tol) {
  return Json{{"eq_abs", tol.eq_abs},           {"gap_rel", tol.gap_rel},
              {"psd_eig", tol.psd_eig},         {"feas_scale", tol.feas_scale},
              {"infeas_scale", tol.infeas_scale}, {"verify_scale", tol.verify_scale},
              {"max_iterations", tol.max_iterations}};
}

Json to_json(const SubmodCertReport& report) {
  Json pairs = Json::array();
  std::string ring = "I2(n=" + std::to_string(report.n) + ")";
  for (const auto& p : report.pairs) {
    Json e{{"i", p.i}, {"j", p.j}, {"verdict", to_string(p.sos.verdict)}, {"margin", number_or_null(p.sos.margin)}};
    if (p.sos.certificate) {
      const auto& c = *p.sos.certificate;
      Json basis = Json::array();
      for (const auto& m : c.basis) basis.push_back(m.to_string());
      std::vector<double> q;
      q.reserve(c.Q.size());
      for (Eigen::Index r = 0; r < c.Q.rows(); ++r) {
        for (Eigen::Index s = 0; s < c.Q.cols(); ++s) q.push_back(c.Q(r, s));
      }
      e["ring"] = c.ring.name();
      e["basis"] = std::move(basis);
      e["Q"] = std::move(q);
      e["residual"] = c.residual;
    }
    pairs.push_back(std::move(e));
  }
  return Json{{"ring", ring}, {"t", report.t}, {"verdict", to_string(report.verdict)}, {"pairs", std::move(pairs)}};
}

Json to_json(const Decomposition& d) {
  Json j{{"kind", to_string(d.kind)}, {"G", to_json(d.G)}, {"H", to_json(d.H)}};
  if (d.kind == DecompositionKind::TSOS_IRREDUCIBLE) j["t"] = d.t;
  j["curvature"] = curvature_objective(d.H).get_d();
  j["repair_shift"] = d.repair_shift;
  if (d.certificate_g) j["certificate_g"] = to_json(*d.certificate_g);
  if (d.certificate_h) j["certificate_h"] = to_json(*d.certificate_h);
  return j;
}

Decomposition decomposition_from_json(const Json& j) {
  Decomposition d;
  const std::string kind = field<std::string>(j, "kind");
  if (kind == "trivial") {
    d.kind = DecompositionKind::TRIVIAL;
  } else if (kind == "tsos") {
    d.kind = DecompositionKind::TSOS_IRREDUCIBLE;
    d.t = field_or(j, "t", -1);
  } else {
    throw ParseError("unknown decomposition kind \"" + kind + "\"");
  }
  if (!j.contains("G") || !j.contains("H")) throw ParseError("decomposition needs \"G\" and \"H\"");
  d.G = setfunction_from_json(j.at("G"));
  d.H = setfunction_from_json(j.at("H"));
  if (d.G.n() != d.H.n()) throw ParseError("G and H have different n");
  d.repair_shift = field_or(j, "repair_shift", 0.0);
  return d;
}

std::string mask_string(SubsetMask s, int n) {
  std::string out(n, '0');
  for (int k = 0; k < n; ++k) {
    if (s.contains(k)) out[k] = '1';
  }
  return out;
}

SubsetMask parse_mask_string(const std::string& s) {
  if (s.size() > static_cast<std::size_t>(kMaxStorageN)) throw ParseError("mask longer than supported n");
  std::uint32_t bits = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] == '1') {
      bits |= 1u << k;
    } else if (s[k] != '0') {
      throw ParseError("mask must be a 0/1 string: \"" + s + "\"");
    }
  }
  return SubsetMask(bits);
}

std::string dataset_to_csv(const Dataset& data) {
  std::ostringstream out;
  out << "mask,label,split\n";
  for (const auto& r : data.rows) {
    out << mask_string(r.mask, data.n) << ',' << format_double(r.label) << ',' << to_string(r.split) << '\n';
  }
  return out.str();
}

Dataset dataset_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty dataset");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "mask,label,split") throw ParseError("dataset header must be \"mask,label,split\"");
  Dataset data;
  data.n = -1;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 3) throw ParseError("line " + std::to_string(lineno) + ": expected 3 fields");
    const int n = static_cast<int>(cells[0].size());
    if (data.n < 0) data.n = n;
    if (n != data.n) throw ParseError("line " + std::to_string(lineno) + ": mask length differs");
    DataRow row;
    row.mask = parse_mask_string(cells[0]);
    double label = 0.0;
    const auto res = std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), label);
    if (res.ec != std::errc() || res.ptr != cells[1].data() + cells[1].size() || !std::isfinite(label)) {
      throw ParseError("line " + std::to_string(lineno) + ": bad label \"" + cells[1] + "\"");
    }
    row.label = label;
    try {
      row.split = split_from_string(cells[2]);
    } catch (const std::invalid_argument&) {
      throw ParseError("line " + std::to_string(lineno) + ": bad split \"" + cells[2] + "\"");
    }
    data.rows.push_back(row);
  }
  if (data.n < 0) throw ParseError("dataset has no rows");
  return data;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const std::string& content, bool force) {
  if (!force && std::filesystem::exists(path)) {
    throw std::runtime_error(path.string() + " exists; pass --force to overwrite");
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace sossubmod::io
