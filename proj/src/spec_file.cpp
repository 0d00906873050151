#include "descriptor/spec_file.hpp"

#include "descriptor/fractional.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

namespace descriptor {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ParseError, "field '" + path + "': " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) fail(path.empty() ? key : path + "." + key, "required field missing");
  return obj.at(key);
}

std::string child(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string child(const std::string& path, size_t i) { return path + "[" + std::to_string(i) + "]"; }

double parse_real(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>()).to_double();
    } catch (const std::exception&) {
      fail(path, "cannot parse '" + j.get<std::string>() + "' as a number");
    }
  }
  fail(path, "expected a number or rational string");
}

Rational parse_rational(const json& j, const std::string& path) {
  try {
    // The shortest round-trip text of a double is what the author wrote, so 0.1 becomes 1/10.
    if (j.is_number()) return Rational::parse(j.dump());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
  } catch (const std::exception&) {
    fail(path, "cannot parse entry as a rational number");
  }
  fail(path, "expected a number or rational string");
}

long parse_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

Vector parse_vector(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = parse_real(j[i], child(path, i));
  return v;
}

/// Nested row arrays; returns both the exact and the double reading.
std::pair<RationalMatrix, Matrix> parse_matrix(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of rows");
  const auto rows = static_cast<Index>(j.size());
  Index cols = -1;
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array()) fail(child(path, i), "expected a row array");
    const auto n = static_cast<Index>(j[i].size());
    if (cols >= 0 && n != cols)
      fail(child(path, i), "row has " + std::to_string(n) + " entries, expected " + std::to_string(cols));
    cols = n;
  }
  if (cols < 0) cols = 0;
  RationalMatrix exact(rows, cols);
  Matrix real(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) {
      const auto& e = j[static_cast<size_t>(r)][static_cast<size_t>(c)];
      const std::string p = child(child(path, static_cast<size_t>(r)), static_cast<size_t>(c));
      real(r, c) = parse_real(e, p);
      exact(r, c) = e.is_number_float() || e.is_string() ? parse_rational(e, p) : Rational(e.get<long long>());
    }
  return {exact, real};
}

void expect_length(const Vector& v, Index n, const std::string& path) {
  if (v.size() != n) fail(path, "has " + std::to_string(v.size()) + " entries, expected " + std::to_string(n));
}

InputSignal parse_component(const json& j, Index r, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an input object");
  const auto& kind_json = require(j, "kind", path);
  if (!kind_json.is_string()) fail(child(path, "kind"), "expected a string");
  const std::string kind = kind_json.get<std::string>();
  if (kind == "zero") return InputSignal::zero(r);
  if (kind == "constant") {
    const Vector v = parse_vector(require(j, "value", path), child(path, "value"));
    expect_length(v, r, child(path, "value"));
    return InputSignal::constant(v);
  }
  if (kind == "polynomial") {
    const std::string p = child(path, "coeffs");
    const auto [exact, coeffs] = parse_matrix(require(j, "coeffs", path), p);
    if (coeffs.rows() != r) fail(p, "needs one row per input component (" + std::to_string(r) + ")");
    if (coeffs.cols() == 0) fail(p, "needs at least one coefficient per row");
    return InputSignal::polynomial(coeffs);
  }
  if (kind == "exponential") {
    const Vector a = parse_vector(require(j, "amplitude", path), child(path, "amplitude"));
    expect_length(a, r, child(path, "amplitude"));
    return InputSignal::exponential(a, parse_real(require(j, "rate", path), child(path, "rate")));
  }
  if (kind == "sinusoid") {
    const Vector s = j.contains("sin") ? parse_vector(j["sin"], child(path, "sin")) : Vector::Zero(r);
    const Vector c = j.contains("cos") ? parse_vector(j["cos"], child(path, "cos")) : Vector::Zero(r);
    expect_length(s, r, child(path, "sin"));
    expect_length(c, r, child(path, "cos"));
    return InputSignal::sinusoid(s, c, parse_real(require(j, "omega", path), child(path, "omega")));
  }
  if (kind == "samples") {
    const std::string p = child(path, "values");
    const auto& values = require(j, "values", path);
    if (!values.is_array() || values.empty()) fail(p, "expected a non-empty array of samples");
    std::vector<Vector> samples;
    for (size_t i = 0; i < values.size(); ++i) {
      samples.push_back(parse_vector(values[i], child(p, i)));
      expect_length(samples.back(), r, child(p, i));
    }
    const double period = parse_real(require(j, "period", path), child(path, "period"));
    if (!(period > 0.0)) fail(child(path, "period"), "must be positive");
    const double start = j.contains("start") ? parse_real(j["start"], child(path, "start")) : 0.0;
    return InputSignal::samples(std::move(samples), period, start);
  }
  fail(child(path, "kind"), "unknown input kind '" + kind + "'");
}

InputSignal parse_input(const json& j, Index r) {
  if (j.is_array()) {
    if (j.empty()) return InputSignal::zero(r);
    InputSignal sum = parse_component(j[0], r, "input[0]");
    for (size_t i = 1; i < j.size(); ++i) sum = sum + parse_component(j[i], r, child("input", i));
    return sum;
  }
  return parse_component(j, r, "input");
}

double positive(const json& j, const std::string& path) {
  const double v = parse_real(j, path);
  if (!(v > 0.0) || !std::isfinite(v)) fail(path, "must be a positive finite number");
  return v;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::InvalidArgument, "SHA-256 computation failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

SystemSpecFile parse_spec(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw Error(ErrorCode::ParseError, "top level must be an object");

  SystemSpecFile spec;
  spec.digest = sha256_hex(text);
  if (root.contains("name")) {
    if (!root["name"].is_string()) fail("name", "expected a string");
    spec.name = root["name"].get<std::string>();
  }
  std::tie(spec.F_exact, spec.F) = parse_matrix(require(root, "F", ""), "F");
  std::tie(spec.G_exact, spec.G) = parse_matrix(require(root, "G", ""), "G");
  const Index m = spec.F.rows();
  if (m == 0) fail("F", "must be non-empty");
  if (spec.F.cols() != m) fail("F", "must be square, got " + std::to_string(m) + "x" + std::to_string(spec.F.cols()));
  if (spec.G.rows() != m || spec.G.cols() != m)
    fail("G", "must be " + std::to_string(m) + "x" + std::to_string(m) + " to match F, got " +
                  std::to_string(spec.G.rows()) + "x" + std::to_string(spec.G.cols()));
  if (root.contains("B")) {
    std::tie(spec.B_exact, spec.B) = parse_matrix(root["B"], "B");
    if (spec.B.rows() != m) fail("B", "must have " + std::to_string(m) + " rows, got " + std::to_string(spec.B.rows()));
    if (spec.B.cols() == 0) fail("B", "must have at least one column");
  } else {
    spec.B = Matrix::Identity(m, m);
    spec.B_exact = RationalMatrix::Identity(m, m);
  }

  spec.input = root.contains("input") ? parse_input(root["input"], spec.r()) : InputSignal::zero(spec.r());
  if (root.contains("Y0")) {
    spec.Y0 = parse_vector(root["Y0"], "Y0");
    expect_length(*spec.Y0, m, "Y0");
  }
  if (root.contains("t0")) spec.t0 = parse_real(root["t0"], "t0");
  if (root.contains("T")) spec.T = positive(root["T"], "T");
  if (root.contains("steps")) {
    spec.steps = parse_integer(root["steps"], "steps");
    if (*spec.steps < 0) fail("steps", "must be nonnegative");
  }
  if (root.contains("order_n")) {
    spec.order_n = parse_real(root["order_n"], "order_n");
    if (!FractionalOrder::admissible(*spec.order_n)) fail("order_n", "must satisfy 0 < n < 1 or 1 < n < 2");
  }

  if (root.contains("options")) {
    const auto& o = root["options"];
    if (!o.is_object()) fail("options", "expected an object");
    if (o.contains("rank_tol")) spec.options.tol.rank_tol = positive(o["rank_tol"], "options.rank_tol");
    if (o.contains("residual_tol")) spec.options.tol.residual_tol = positive(o["residual_tol"], "options.residual_tol");
    if (o.contains("cluster_tol")) spec.options.cluster_tol = positive(o["cluster_tol"], "options.cluster_tol");
    if (o.contains("mode")) {
      if (!o["mode"].is_string()) fail("options.mode", "expected \"float\" or \"exact\"");
      const auto mode = o["mode"].get<std::string>();
      if (mode != "float" && mode != "exact") fail("options.mode", "expected \"float\" or \"exact\", got '" + mode + "'");
      spec.exact = mode == "exact";
    }
  }
  return spec;
}

SystemSpecFile load_spec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

}  // namespace descriptor
