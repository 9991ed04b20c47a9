#include "qnr/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qnr/error.hpp"

namespace qnr {

using nlohmann::json;

namespace {

double finite_number(const json& v, const char* what) {
  if (!v.is_number()) throw Error(ErrorKind::InvalidInput, std::string(what) + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorKind::NonFinite, std::string(what) + " is not finite");
  return x;
}

}  // namespace

ComplexMatrix parse_matrix_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::out_of_range& e) {
    throw Error(ErrorKind::NonFinite, std::string("matrix JSON number overflows: ") + e.what());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed matrix JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("entries")) {
    throw Error(ErrorKind::InvalidInput, "matrix JSON needs \"dim\" and \"entries\"");
  }
  const json& dim_field = doc["dim"];
  if (!dim_field.is_number_integer() || dim_field.get<long long>() < 1) {
    throw Error(ErrorKind::InvalidInput, "\"dim\" must be a positive integer");
  }
  const auto dim = static_cast<std::size_t>(dim_field.get<long long>());
  const json& raw = doc["entries"];
  if (!raw.is_array()) throw Error(ErrorKind::InvalidInput, "\"entries\" must be an array");
  if (raw.size() != dim * dim) {
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(dim * dim) +
                                                  " entries, got " + std::to_string(raw.size()));
  }
  std::vector<Complex> entries;
  entries.reserve(raw.size());
  for (const json& e : raw) {
    if (!e.is_array() || e.size() != 2) {
      throw Error(ErrorKind::InvalidInput, "each entry must be a [re, im] pair");
    }
    entries.emplace_back(finite_number(e[0], "real part"), finite_number(e[1], "imaginary part"));
  }
  return ComplexMatrix(dim, std::move(entries));
}

std::string matrix_to_json(const ComplexMatrix& a) {
  json doc;
  doc["dim"] = a.dim();
  json entries = json::array();
  for (const Complex& z : a.entries()) entries.push_back({z.real(), z.imag()});
  doc["entries"] = std::move(entries);
  return doc.dump();
}

ComplexMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open matrix file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_matrix_json(buf.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

void save_matrix(const ComplexMatrix& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write matrix file: " + path);
  out << matrix_to_json(a) << '\n';
}

}  // namespace qnr
