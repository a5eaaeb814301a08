#pragma once

#include <json.hpp>
#include <string>

#include "kyfan/harness.hpp"

namespace kfan {

using json = nlohmann::json;

/// Thrown on malformed JSON input; maps to exit code 2.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json(const std::string& path);  // "-" reads standard input

json matrix_to_json(const kyfan::Mat& A);
kyfan::Mat matrix_from_json(const json& j, const std::string& what);
json vec_to_json(const kyfan::Vec& v);
kyfan::Vec vec_from_json(const json& j, const std::string& what);

/// {"t": real, "X": MatrixJson}
json point_to_json(const kyfan::ConePoint& p);
kyfan::ConePoint point_from_json(const json& j, const std::string& what);

json projection_to_json(const kyfan::ProjectionResult& r);
json triple_to_json(const kyfan::KktTriple& z);
kyfan::KktTriple triple_from_json(const json& j, const kyfan::NlsInstance& inst);

/// InstanceJson: {kind: "nls", dims: {m, n, p, q, k}, A, b, rho, E, d}.
kyfan::NlsInstance instance_from_json(const json& j);
json instance_to_json(const kyfan::NlsInstance& s);

}  // namespace kfan
