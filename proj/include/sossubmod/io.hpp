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

#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "sossubmod/certify.hpp"
#include "sossubmod/dsopt.hpp"
#include "sossubmod/families.hpp"
#include "sossubmod/regression.hpp"
#include "sossubmod/setfn.hpp"
#include "sossubmod/solver.hpp"

namespace sossubmod::io {

using Json = nlohmann::ordered_json;

// {"n": int, "terms": [{"subset": [...], "coeff": "decimal"}, ...]}, terms in mask order.
Json to_json(const SetFunction& f);
// {"n": int, "values": ["decimal", ...]} in mask order.
Json to_json(const ValueTable& v);

// Accepts either the terms format or the values format.
SetFunction setfunction_from_json(const Json& j);
ValueTable valuetable_from_json(const Json& j);

Json to_json(const FamilySpec& spec);
// Synthetic variants take {"n", "dim", "seed"}; a determinantal spec may give
// "sigma_matrix" explicitly or {"n", "seed"} for a random SPD matrix.
FamilySpec familyspec_from_json(const Json& j);

// Missing fields keep their defaults.
ToleranceProfile tolerance_from_json(const Json& j);
Json to_json(const ToleranceProfile& tol);

// {"ring", "t", "verdict", "pairs": [{"i", "j", "verdict", "margin", "basis", "Q", "residual"}]}.
// Pairs without a Gram certificate carry no basis or Q.
Json to_json(const SubmodCertReport& report);

Json to_json(const Decomposition& d);
Decomposition decomposition_from_json(const Json& j);

// CSV with header "mask,label,split"; a mask is a 0/1 string with character k for element k.
std::string dataset_to_csv(const Dataset& data);
Dataset dataset_from_csv(const std::string& text);

std::string mask_string(SubsetMask s, int n);
SubsetMask parse_mask_string(const std::string& s);

// Shortest decimal that reads back to the same double.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);
// Throws std::runtime_error when the file exists and force is false.
void write_file(const std::filesystem::path& path, const std::string& content, bool force);

}  // namespace sossubmod::io
