#include "shorn/io.hpp"

#include <cmath>
#include <fstream>

#include "shorn/errors.hpp"

namespace shorn::io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string(what) + " must be a number");
  return j.get<double>();
}

std::size_t index(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 1)
    throw InputError(std::string(what) + " must be a positive integer");
  return static_cast<std::size_t>(j.get<long long>());
}

json tail_to_json(const TailRule& t) {
  switch (t.kind()) {
  case TailKind::Zero: return {{"kind", "ZeroTail"}};
  case TailKind::One: return {{"kind", "OneTail"}};
  case TailKind::GeometricLow: return {{"kind", "GeometricLow"}, {"c", t.c()}, {"r", t.r()}};
  case TailKind::GeometricHigh: return {{"kind", "GeometricHigh"}, {"c", t.c()}, {"r", t.r()}};
  case TailKind::Interleave:
    return {{"kind", "Interleave"}, {"parts", json::array({tail_to_json(t.first()), tail_to_json(t.second())})}};
  case TailKind::DivergentLow:
  case TailKind::DivergentHigh: {
    const auto& c = t.certificate();
    return {{"kind", t.kind() == TailKind::DivergentLow ? "DivergentLow" : "DivergentHigh"},
            {"generator", t.generator().source()},
            {"certificate",
             {{"kind", c.kind == DivergenceCertificate::Kind::Constant ? "constant" : "harmonic"},
              {"p", c.p},
              {"from", c.from}}}};
  }
  }
  return {};
}

TailRule tail_from_json(const json& j) {
  const json& kind = field(j, "kind");
  if (!kind.is_string()) throw InputError("tail kind must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "ZeroTail") return TailRule::zero();
  if (k == "OneTail") return TailRule::one();
  if (k == "GeometricLow" || k == "GeometricHigh") {
    const double c = number(field(j, "c"), "c"), r = number(field(j, "r"), "r");
    return k == "GeometricLow" ? TailRule::geometric_low(c, r) : TailRule::geometric_high(c, r);
  }
  if (k == "Interleave") {
    const json& parts = field(j, "parts");
    if (!parts.is_array() || parts.size() != 2) throw InputError("Interleave needs exactly two parts");
    return TailRule::interleave(tail_from_json(parts[0]), tail_from_json(parts[1]));
  }
  if (k == "DivergentLow" || k == "DivergentHigh") {
    const json& g = field(j, "generator");
    if (!g.is_string()) throw InputError("generator must be a string");
    const json& cj = field(j, "certificate");
    DivergenceCertificate cert;
    const json& ck = field(cj, "kind");
    if (ck == "constant") cert.kind = DivergenceCertificate::Kind::Constant;
    else if (ck == "harmonic") cert.kind = DivergenceCertificate::Kind::Harmonic;
    else throw InputError("certificate kind must be \"constant\" or \"harmonic\"");
    cert.p = number(field(cj, "p"), "certificate p");
    if (cj.contains("from")) cert.from = index(cj.at("from"), "certificate from");
    return k == "DivergentLow" ? TailRule::divergent_low(g.get<std::string>(), cert)
                               : TailRule::divergent_high(g.get<std::string>(), cert);
  }
  throw InputError("unknown tail kind \"" + k + "\"");
}

} // namespace

json matrix_to_json(const Matrix& m) {
  json data = json::array();
  for (const Complex& z : m.data()) data.push_back({z.real(), z.imag()});
  return {{"n", m.size()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const json& j) {
  const json& nj = field(j, "n");
  if (!nj.is_number_integer() || nj.get<long long>() < 1) throw InputError("\"n\" must be a positive integer");
  const auto n = static_cast<std::size_t>(nj.get<long long>());
  const json& data = field(j, "data");
  if (!data.is_array() || data.size() != n * n)
    throw InputError("\"data\" must hold n*n = " + std::to_string(n * n) + " entries");
  std::vector<Complex> entries;
  entries.reserve(n * n);
  for (const json& e : data) {
    if (!e.is_array() || e.size() != 2) throw InputError("matrix entries must be [re, im] pairs");
    entries.emplace_back(number(e[0], "matrix entry"), number(e[1], "matrix entry"));
  }
  try {
    return Matrix(n, std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

json vector_to_json(std::span<const double> v) { return {{"values", RealVector(v.begin(), v.end())}}; }

RealVector vector_from_json(const json& j) {
  const json& values = field(j, "values");
  if (!values.is_array()) throw InputError("\"values\" must be an array");
  RealVector out;
  for (const json& v : values) {
    const double x = number(v, "vector entry");
    if (!std::isfinite(x)) throw InputError("vector entries must be finite");
    out.push_back(x);
  }
  if (out.empty()) throw InputError("vector is empty");
  return out;
}

json transforms_to_json(std::span<const TTransform> ts) {
  json out = json::array();
  for (const auto& t : ts) out.push_back({{"j", t.j + 1}, {"k", t.k + 1}, {"t", t.t}});
  return out;
}

std::vector<TTransform> transforms_from_json(const json& j) {
  if (!j.is_array()) throw InputError("transform list must be an array");
  std::vector<TTransform> out;
  for (const json& e : j)
    out.push_back({index(field(e, "j"), "j") - 1, index(field(e, "k"), "k") - 1, number(field(e, "t"), "t")});
  return out;
}

json spec_to_json(const SequenceSpec& s) { return {{"prefix", s.prefix}, {"tail", tail_to_json(s.tail)}}; }

SequenceSpec spec_from_json(const json& j) {
  SequenceSpec s;
  if (!j.is_object()) throw InputError("sequence spec must be an object");
  if (j.contains("prefix")) {
    if (!j.at("prefix").is_array()) throw InputError("\"prefix\" must be an array");
    for (const json& v : j.at("prefix")) s.prefix.push_back(number(v, "prefix entry"));
  }
  s.tail = j.contains("tail") ? tail_from_json(j.at("tail")) : TailRule::zero();
  s.validate();
  return s;
}

json truncated_to_json(const TruncatedProjection& t) {
  json j = matrix_to_json(t.projection);
  j["depth"] = t.depth;
  j["covered"] = t.covered;
  j["residual_bound"] = t.residual_bound ? json(*t.residual_bound) : json(nullptr);
  j["permutation"] = t.permutation;
  j["pad"] = t.pad;
  return j;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump() << '\n';
}

} // namespace shorn::io
