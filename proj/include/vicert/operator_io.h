// Copyright 2026 The vicert Authors.
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

#ifndef VICERT_OPERATOR_IO_H_
#define VICERT_OPERATOR_IO_H_

#include <string>

#include "json.hpp"
#include "vicert/operators.h"

namespace vicert {

nlohmann::json OperatorToJson(const Operator& op);
Operator OperatorFromJson(const nlohmann::json& j);

std::string OperatorToString(const Operator& op);
Operator OperatorFromString(const std::string& text);

void WriteOperatorFile(const Operator& op, const std::string& path);
Operator ReadOperatorFile(const std::string& path);

nlohmann::json MatToJson(const Mat& m);
Mat MatFromJson(const nlohmann::json& j);

}  // namespace vicert

#endif  // VICERT_OPERATOR_IO_H_
