// Copyright 2026 The skillbpe Authors
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

// Internal JSON conversions shared by the file formats.

#ifndef SKILLBPE_SRC_JSON_IO_HPP_
#define SKILLBPE_SRC_JSON_IO_HPP_

#include "skillbpe/codebook.hpp"
#include "skillbpe/dataset.hpp"

#include <json.hpp>

#include <filesystem>

namespace skillbpe::detail
{

nlohmann::json matrix_to_json(const RowMatrix & m);
RowMatrix matrix_from_json(const nlohmann::json & j, const char * field);
nlohmann::json vector_to_json(const Eigen::VectorXd & v);
Eigen::VectorXd vector_from_json(const nlohmann::json & j, const char * field);

nlohmann::json codebook_to_json(const Codebook & codebook);
Codebook codebook_from_json(const nlohmann::json & j);

nlohmann::json read_json_file(const std::filesystem::path & path);

}  // namespace skillbpe::detail

#endif  // SKILLBPE_SRC_JSON_IO_HPP_
