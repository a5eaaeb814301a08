#include "json_io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

namespace kfan {

using kyfan::ConePoint;
using kyfan::Index;
using kyfan::Mat;
using kyfan::Vec;

namespace {

const json& field(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(what + ": missing field \"" + key + "\"");
  return j.at(key);
}

double real(const json& j, const std::string& what) {
  if (!j.is_number()) throw ParseError(what + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(what + ": non-finite value");
  return v;
}

Index count(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw ParseError(what + ": expected a nonnegative integer");
  return static_cast<Index>(j.get<long long>());
}

}  // namespace

json read_json(const std::string& path) {
  try {
    if (path == "-") return json::parse(std::cin);
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open " + path);
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

json matrix_to_json(const Mat& A) {
  json data = json::array();
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j) data.push_back(A(i, j));
  return {{"rows", A.rows()}, {"cols", A.cols()}, {"data", data}};
}

Mat matrix_from_json(const json& j, const std::string& what) {
  const Index r = count(field(j, "rows", what), what + ".rows");
  const Index c = count(field(j, "cols", what), what + ".cols");
  const json& data = field(j, "data", what);
  if (!data.is_array() || static_cast<Index>(data.size()) != r * c)
    throw ParseError(what + ": data must hold rows*cols numbers");
  Mat A(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index k = 0; k < c; ++k) A(i, k) = real(data[i * c + k], what + ".data");
  return A;
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vec vec_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected an array");
  Vec v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = real(j[i], what);
  return v;
}

json point_to_json(const ConePoint& p) { return {{"t", p.t}, {"X", matrix_to_json(p.X)}}; }

ConePoint point_from_json(const json& j, const std::string& what) {
  return {real(field(j, "t", what), what + ".t"), matrix_from_json(field(j, "X", what), what + ".X")};
}

json projection_to_json(const kyfan::ProjectionResult& r) {
  return {{"case", kyfan::to_string(r.kase)},
          {"k", r.k},
          {"onto_K", point_to_json(r.onto_K)},
          {"onto_Kpolar", point_to_json(r.onto_Kpolar)},
          {"theta", r.theta},
          {"u_bar", vec_to_json(r.u_bar)},
          {"sigma_bar", vec_to_json(r.sigma_bar)},
          {"k0", r.k0},
          {"k1", r.k1},
          {"on_bdK", r.on_bdK}};
}

json triple_to_json(const kyfan::KktTriple& z) {
  return {{"X", point_to_json(z.X)}, {"lambda", vec_to_json(z.lambda)}, {"Y", point_to_json(z.Y)}};
}

kyfan::KktTriple triple_from_json(const json& j, const kyfan::NlsInstance& inst) {
  kyfan::KktTriple z{point_from_json(field(j, "X", "triple"), "triple.X"),
                     j.contains("lambda") ? vec_from_json(j.at("lambda"), "triple.lambda") : Vec(0),
                     point_from_json(field(j, "Y", "triple"), "triple.Y")};
  if (z.X.rows() != inst.m || z.X.cols() != inst.n || z.Y.rows() != inst.m ||
      z.Y.cols() != inst.n || z.lambda.size() != inst.q())
    throw ParseError("triple: dimensions do not match the instance");
  return z;
}

kyfan::NlsInstance instance_from_json(const json& j) {
  const json& kind = field(j, "kind", "instance");
  if (kind != "nls") throw ParseError("instance: only kind \"nls\" is supported");
  const json& dims = field(j, "dims", "instance");
  kyfan::NlsInstance s;
  s.m = count(field(dims, "m", "dims"), "dims.m");
  s.n = count(field(dims, "n", "dims"), "dims.n");
  const Index p = count(field(dims, "p", "dims"), "dims.p");
  const Index q = dims.contains("q") ? count(dims.at("q"), "dims.q") : 0;
  s.A = matrix_from_json(field(j, "A", "instance"), "A");
  s.b = vec_from_json(field(j, "b", "instance"), "b");
  s.rho = real(field(j, "rho", "instance"), "rho");
  s.E = j.contains("E") ? matrix_from_json(j.at("E"), "E") : Mat(0, s.m * s.n);
  s.d = j.contains("d") ? vec_from_json(j.at("d"), "d") : Vec(0);
  if (s.A.rows() != p || s.E.rows() != q)
    throw ParseError("instance: A and E row counts must equal dims.p and dims.q");
  if (dims.contains("k") && count(dims.at("k"), "dims.k") != s.m)
    throw ParseError("instance: nls uses k = m");
  try {
    s.validate();
  } catch (const kyfan::InvalidInput& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
  return s;
}

json instance_to_json(const kyfan::NlsInstance& s) {
  return {{"kind", "nls"},
          {"dims", {{"m", s.m}, {"n", s.n}, {"p", s.A.rows()}, {"q", s.E.rows()}, {"k", s.m}}},
          {"A", matrix_to_json(s.A)},
          {"b", vec_to_json(s.b)},
          {"rho", s.rho},
          {"E", matrix_to_json(s.E)},
          {"d", vec_to_json(s.d)}};
}

}  // namespace kfan
