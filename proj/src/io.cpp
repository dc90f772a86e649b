#include "puregauss/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "puregauss/error.hpp"

namespace puregauss::io {

namespace {

[[noreturn]] void schema_error(const std::string& message) {
  throw Error(ErrorCode::Schema, message);
}

const Json& require_key(const Json& doc, const std::string& key,
                        const std::string& what) {
  if (!doc.is_object()) schema_error(what + " must be a JSON object");
  const auto it = doc.find(key);
  if (it == doc.end()) schema_error(what + " is missing key \"" + key + "\"");
  return *it;
}

void reject_unknown_keys(const Json& doc, std::initializer_list<const char*> allowed,
                         const std::string& what) {
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) schema_error(what + " has unexpected key \"" + key + "\"");
  }
}

double number_at(const Json& v, const std::string& path) {
  if (!v.is_number()) schema_error(path + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) schema_error(path + " is not finite");
  return x;
}

Complex complex_at(const Json& v, const std::string& path) {
  if (v.is_number()) return Complex(number_at(v, path), 0.0);
  if (!v.is_array() || v.size() != 2) {
    schema_error(path + " must be [re, im] or a number");
  }
  return Complex(number_at(v[0], path + "[0]"), number_at(v[1], path + "[1]"));
}

std::size_t count_at(const Json& v, const std::string& path) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    schema_error(path + " must be a non-negative integer");
  }
  const auto x = v.get<long long>();
  if (x < 0) schema_error(path + " must be a non-negative integer");
  return static_cast<std::size_t>(x);
}

template <typename Scalar, typename Read>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> matrix_at(
    const Json& v, const std::string& name, Eigen::Index rows, Eigen::Index cols,
    Read&& read) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != rows) {
    schema_error(name + " must have " + std::to_string(rows) + " rows");
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = v[static_cast<std::size_t>(r)];
    const std::string row_path = name + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      schema_error(row_path + " must have " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = read(row[static_cast<std::size_t>(c)],
                     row_path + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

RealMatrix real_matrix_at(const Json& v, const std::string& name,
                          Eigen::Index rows, Eigen::Index cols) {
  return matrix_at<double>(v, name, rows, cols, number_at);
}

ComplexMatrix complex_matrix_at(const Json& v, const std::string& name,
                                Eigen::Index rows, Eigen::Index cols) {
  return matrix_at<Complex>(v, name, rows, cols, complex_at);
}

// Re-raises library validation failures (asymmetry, dimension) as schema
// errors so the CLI maps them to a single exit code.
template <typename F>
auto validated(F&& build) {
  try {
    return build();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Schema) throw;
    schema_error(e.what());
  }
}

Json complex_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

std::string format_number(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

bool is_scalar_like(const Json& v) {
  if (v.is_primitive()) return true;
  return v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number();
}

void emit(const Json& v, std::ostringstream& os, int indent);

void emit_inline(const Json& v, std::ostringstream& os) {
  if (v.is_array()) {
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os << ", ";
      emit_inline(v[i], os);
    }
    os << ']';
  } else {
    emit(v, os, 0);
  }
}

void emit(const Json& v, std::ostringstream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
  if (v.is_object()) {
    if (v.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    std::size_t i = 0;
    for (const auto& [key, value] : v.items()) {  // std::map order: sorted
      os << inner << Json(key).dump() << ": ";
      emit(value, os, indent + 2);
      os << (++i < v.size() ? ",\n" : "\n");
    }
    os << pad << '}';
  } else if (v.is_array()) {
    const bool flat = std::all_of(v.begin(), v.end(), is_scalar_like);
    if (flat || v.empty()) {
      emit_inline(v, os);
      return;
    }
    os << "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      os << inner;
      emit(v[i], os, indent + 2);
      os << (i + 1 < v.size() ? ",\n" : "\n");
    }
    os << pad << ']';
  } else if (v.is_number_float()) {
    os << format_number(v.get<double>());
  } else {
    os << v.dump();
  }
}

}  // namespace

Json real_matrix_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json complex_matrix_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const GaussianDynamics& sys) {
  return Json{{"n", sys.modes()},
              {"m", sys.channels()},
              {"G", real_matrix_json(sys.G())},
              {"C", complex_matrix_json(sys.C())}};
}

Json to_json(const PureStateSpec& spec) {
  return Json{{"n", spec.modes()},
              {"X", real_matrix_json(spec.X())},
              {"Y", real_matrix_json(spec.Y())}};
}

Json to_json(const EngineeringParameters& params) {
  return Json{{"P", complex_matrix_json(params.P)},
              {"R", real_matrix_json(params.R)},
              {"Gamma", real_matrix_json(params.Gamma)}};
}

Json to_json(const GaussianState& state) {
  Json mean = Json::array();
  for (Eigen::Index i = 0; i < state.mean.size(); ++i) mean.push_back(state.mean(i));
  return Json{{"mean", mean}, {"V", real_matrix_json(state.cov.matrix())}};
}

Json to_json(const Theorem1Report& report) {
  Json doc;
  doc["n"] = report.modes;
  doc["m"] = report.channels;
  Json eig = Json::array();
  for (const Complex& l : report.drift_eigenvalues) eig.push_back(complex_json(l));
  doc["drift_eigenvalues"] = eig;
  doc["unique"] = report.unique;
  doc["pure"] = report.pure;
  doc["Vs"] = report.vs ? real_matrix_json(report.vs->matrix()) : Json(nullptr);
  doc["purity"] = report.purity ? Json(*report.purity) : Json(nullptr);
  if (report.cond_ii) {
    doc["condition_ii"] = Json{{"holds", report.cond_ii->holds},
                               {"dark_residual", report.cond_ii->dark_residual},
                               {"commutation_residual",
                                report.cond_ii->commutation_residual}};
  } else {
    doc["condition_ii"] = nullptr;
  }
  doc["condition_iii"] = Json{{"holds", report.cond_iii.holds},
                              {"residual", report.cond_iii.residual},
                              {"threshold", report.cond_iii.threshold}};
  if (report.vs_formula) {
    doc["Vs_formula"] = Json{{"V", real_matrix_json(report.vs_formula->vs.matrix())},
                             {"gram_condition", report.vs_formula->gram_condition}};
  } else {
    doc["Vs_formula"] = Json{{"failure", report.vs_formula_failure}};
  }
  doc["k_sigma_kt_residual"] = report.k_sigma_kt_residual;
  doc["uncertainty_k_residual"] = report.uncertainty_k_residual
                                      ? Json(*report.uncertainty_k_residual)
                                      : Json(nullptr);
  doc["conditions_agree"] = report.conditions_agree();
  return doc;
}

GaussianDynamics system_from_json(const Json& doc) {
  const std::string what = "system file";
  const std::size_t n = count_at(require_key(doc, "n", what), "n");
  const std::size_t m = count_at(require_key(doc, "m", what), "m");
  reject_unknown_keys(doc, {"n", "m", "G", "C"}, what);
  if (n == 0) schema_error("n must be at least 1");
  const auto dim = static_cast<Eigen::Index>(2 * n);
  RealMatrix g = real_matrix_at(require_key(doc, "G", what), "G", dim, dim);
  ComplexMatrix c = complex_matrix_at(require_key(doc, "C", what), "C",
                                      static_cast<Eigen::Index>(m), dim);
  return validated([&] { return GaussianDynamics(std::move(g), std::move(c)); });
}

PureStateSpec spec_from_json(const Json& doc) {
  const std::string what = "spec file";
  const std::size_t n = count_at(require_key(doc, "n", what), "n");
  reject_unknown_keys(doc, {"n", "X", "Y"}, what);
  if (n == 0) schema_error("n must be at least 1");
  const auto size = static_cast<Eigen::Index>(n);
  RealMatrix x = real_matrix_at(require_key(doc, "X", what), "X", size, size);
  RealMatrix y = real_matrix_at(require_key(doc, "Y", what), "Y", size, size);
  return validated([&] { return PureStateSpec(std::move(x), std::move(y)); });
}

EngineeringParameters parameters_from_json(const Json& doc) {
  const std::string what = "parameter file";
  reject_unknown_keys(doc, {"P", "R", "Gamma"}, what);
  const Json& p_doc = require_key(doc, "P", what);
  if (!p_doc.is_array() || p_doc.empty() || !p_doc[0].is_array()) {
    schema_error("P must be a non-empty n x m matrix");
  }
  const auto n = static_cast<Eigen::Index>(p_doc.size());
  const auto m = static_cast<Eigen::Index>(p_doc[0].size());
  ComplexMatrix p = complex_matrix_at(p_doc, "P", n, m);
  RealMatrix r = real_matrix_at(require_key(doc, "R", what), "R", n, n);
  RealMatrix gamma = real_matrix_at(require_key(doc, "Gamma", what), "Gamma", n, n);
  return validated([&] {
    return EngineeringParameters(std::move(p), std::move(r), std::move(gamma));
  });
}

GaussianState state_from_json(const Json& doc) {
  const std::string what = "state file";
  reject_unknown_keys(doc, {"mean", "V"}, what);
  const Json& v_doc = require_key(doc, "V", what);
  if (!v_doc.is_array()) schema_error("V must be a matrix");
  const auto dim = static_cast<Eigen::Index>(v_doc.size());
  RealMatrix v = real_matrix_at(v_doc, "V", dim, dim);
  RealVector mean = RealVector::Zero(dim);
  if (doc.contains("mean")) {
    const Json& mean_doc = doc["mean"];
    if (!mean_doc.is_array() || static_cast<Eigen::Index>(mean_doc.size()) != dim) {
      schema_error("mean must have " + std::to_string(dim) + " entries");
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
      mean(i) = number_at(mean_doc[static_cast<std::size_t>(i)],
                          "mean[" + std::to_string(i) + "]");
    }
  }
  return validated([&] {
    return GaussianState(std::move(mean), CovarianceMatrix(std::move(v)));
  });
}

std::string canonical_dump(const Json& doc) {
  std::ostringstream os;
  emit(doc, os, 0);
  os << '\n';
  return os.str();
}

Json parse(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Translate the byte offset into a line/column pair.
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream os;
    os << origin << ":" << line << ":" << column << ": malformed JSON ("
       << e.what() << ")";
    throw Error(ErrorCode::Schema, os.str());
  }
}

Json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace puregauss::io
