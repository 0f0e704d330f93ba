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

#include "vicert/operator_io.h"

#include <fstream>
#include <sstream>

namespace vicert {

using nlohmann::json;

json MatToJson(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) rows.push_back(m.Row(i));
  return rows;
}

Mat MatFromJson(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kParseError, "matrix must be an array of rows");
  std::vector<Vec> rows;
  for (const auto& r : j) rows.push_back(r.get<Vec>());
  return Mat::FromRows(rows);
}

json OperatorToJson(const Operator& op) {
  json j;
  j["kind"] = OperatorKindName(op.kind());
  switch (op.kind()) {
    case OperatorKind::kLogisticGrad:
      j["a"] = op.logistic_a();
      j["delta"] = op.logistic_delta();
      break;
    case OperatorKind::kCustomTable: {
      json table = json::array();
      for (const auto& e : op.table()) table.push_back({{"x", e.x}, {"Fx", e.fx}});
      j["table"] = table;
      break;
    }
    case OperatorKind::kComposite:
      throw Error(ErrorCode::kBadParameters,
                  "nonlinear composite operators have no file representation");
    default:
      j["A"] = MatToJson(op.A());
      j["b"] = op.b();
  }
  json c = json::object();
  if (op.constants().L) c["L"] = *op.constants().L;
  if (op.constants().Lambda) c["Lambda"] = *op.constants().Lambda;
  if (op.constants().ell) c["ell"] = *op.constants().ell;
  j["constants"] = c;
  return j;
}

namespace {

void ValidateKindShape(OperatorKind kind, const Mat& a) {
  const Mat sum = a + a.Transpose();
  switch (kind) {
    case OperatorKind::kRotation:
    case OperatorKind::kBilinearGame:
      if (MaxAbs(sum) > 1e-12 * (1.0 + MaxAbs(a))) {
        throw Error(ErrorCode::kParseError,
                    std::string(OperatorKindName(kind)) + " matrix must be skew-symmetric");
      }
      break;
    case OperatorKind::kScaledIdentity:
      if (!(a - Mat::Identity(a.rows()) * a(0, 0) == Mat(a.rows(), a.rows()))) {
        throw Error(ErrorCode::kParseError, "scaled-identity matrix must be c*I");
      }
      break;
    default:
      break;
  }
}

}  // namespace

Operator OperatorFromJson(const json& j) {
  try {
    const OperatorKind kind = ParseOperatorKind(j.at("kind").get<std::string>());
    std::optional<Operator> op;
    switch (kind) {
      case OperatorKind::kLogisticGrad:
        op = Operator::LogisticGrad(j.value("a", 1.0), j.value("delta", 0.01));
        break;
      case OperatorKind::kCustomTable: {
        std::vector<TableEntry> table;
        for (const auto& e : j.at("table")) {
          table.push_back({e.at("x").get<Vec>(), e.at("Fx").get<Vec>()});
        }
        op = Operator::CustomTable(std::move(table));
        break;
      }
      case OperatorKind::kComposite:
        throw Error(ErrorCode::kParseError, "composite operators cannot be loaded");
      default: {
        Mat a = MatFromJson(j.at("A"));
        Vec b = j.contains("b") ? j.at("b").get<Vec>() : Vec{};
        ValidateKindShape(kind, a);
        op = Operator::Affine(std::move(a), std::move(b)).WithKind(kind);
      }
    }
    DeclaredConstants c;
    if (j.contains("constants")) {
      const json& cj = j.at("constants");
      if (cj.contains("L")) c.L = cj.at("L").get<double>();
      if (cj.contains("Lambda")) c.Lambda = cj.at("Lambda").get<double>();
      if (cj.contains("ell")) c.ell = cj.at("ell").get<double>();
    }
    return op->WithConstants(c);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

std::string OperatorToString(const Operator& op) { return OperatorToJson(op).dump(2); }

Operator OperatorFromString(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return OperatorFromJson(j);
}

void WriteOperatorFile(const Operator& op, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << OperatorToString(op) << "\n";
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path);
}

Operator ReadOperatorFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return OperatorFromString(ss.str());
}

}  // namespace vicert
