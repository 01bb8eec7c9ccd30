#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bitomo/errors.hpp"
#include "bitomo/operator_bases.hpp"
#include "bitomo/rational.hpp"
#include "bitomo/tomography.hpp"

namespace bitomo {

/// Deterministic JSON document builder.  Exact integers and rationals are
/// emitted as strings of exact form; floating-point numbers are printed with
/// 17 significant digits so that parsing recovers the double bit for bit.
class JsonValue {
 public:
  static JsonValue object() { return JsonValue(Kind::Object); }
  static JsonValue array() { return JsonValue(Kind::Array); }
  static JsonValue str(std::string s) {
    JsonValue v(Kind::String);
    v.text_ = std::move(s);
    return v;
  }
  static JsonValue exact(std::int64_t n) { return str(std::to_string(n)); }
  static JsonValue exact(const Rational& r) { return str(r.str()); }
  static JsonValue number(double x) {
    if (!std::isfinite(x))
      throw InvalidStateError("cannot serialize non-finite number");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    JsonValue v(Kind::Number);
    v.text_ = buf;
    return v;
  }
  static JsonValue number(std::int64_t n) {
    JsonValue v(Kind::Number);
    v.text_ = std::to_string(n);
    return v;
  }
  static JsonValue boolean(bool b) {
    JsonValue v(Kind::Bool);
    v.text_ = b ? "true" : "false";
    return v;
  }
  static JsonValue null() { return JsonValue(Kind::Null); }

  JsonValue& add(std::string key, JsonValue value) {
    members_.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  JsonValue& push(JsonValue value) {
    members_.emplace_back(std::string(), std::move(value));
    return *this;
  }

  std::string dump(int indent = 2) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
  }

 private:
  enum class Kind { Object, Array, String, Number, Bool, Null };

  explicit JsonValue(Kind kind) : kind_(kind) {}

  static void escape_to(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out += buf;
          } else {
            out += c;
          }
      }
    }
    out += '"';
  }

  void write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
    switch (kind_) {
      case Kind::Object: {
        if (members_.empty()) {
          out += "{}";
          return;
        }
        out += "{\n";
        for (std::size_t i = 0; i < members_.size(); ++i) {
          out += pad;
          escape_to(out, members_[i].first);
          out += ": ";
          members_[i].second.write(out, indent, depth + 1);
          if (i + 1 < members_.size()) out += ',';
          out += '\n';
        }
        out += close_pad;
        out += '}';
        return;
      }
      case Kind::Array: {
        if (members_.empty()) {
          out += "[]";
          return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < members_.size(); ++i) {
          out += pad;
          members_[i].second.write(out, indent, depth + 1);
          if (i + 1 < members_.size()) out += ',';
          out += '\n';
        }
        out += close_pad;
        out += ']';
        return;
      }
      case Kind::String:
        escape_to(out, text_);
        return;
      case Kind::Number:
      case Kind::Bool:
        out += text_;
        return;
      case Kind::Null:
        out += "null";
        return;
    }
  }

  Kind kind_;
  std::string text_;
  std::vector<std::pair<std::string, JsonValue>> members_;
};

inline std::string basis_kind_name(BasisKind kind) {
  switch (kind) {
    case BasisKind::ComplexProjector: return "complex-projector";
    case BasisKind::Sigma: return "sigma";
    case BasisKind::RealProduct: return "real-product";
    case BasisKind::BilocalProjector: return "bilocal-projector";
  }
  return {};
}

/// {dim, kind, labels, operators}: each operator as row-major [re, im] pairs.
inline JsonValue basis_to_json(const OperatorBasis& basis) {
  JsonValue doc = JsonValue::object();
  doc.add("dim", JsonValue::number(static_cast<std::int64_t>(basis.dim())));
  doc.add("kind", JsonValue::str(basis_kind_name(basis.kind)));
  doc.add("count",
          JsonValue::number(static_cast<std::int64_t>(basis.size())));
  JsonValue labels = JsonValue::array();
  for (const auto& label : basis.labels)
    labels.push(JsonValue::str(label.str()));
  doc.add("labels", std::move(labels));
  JsonValue ops = JsonValue::array();
  for (const auto& op : basis.ops) {
    JsonValue entries = JsonValue::array();
    for (int i = 0; i < op.dim(); ++i) {
      for (int j = 0; j < op.dim(); ++j) {
        JsonValue pair = JsonValue::array();
        pair.push(JsonValue::number(op.mat(i, j).real()));
        pair.push(JsonValue::number(op.mat(i, j).imag()));
        entries.push(std::move(pair));
      }
    }
    ops.push(std::move(entries));
  }
  doc.add("operators", std::move(ops));
  return doc;
}

/// {dim, field, entries}: row-major [re, im] pairs.
inline JsonValue state_to_json(const DensityMatrix& rho) {
  JsonValue doc = JsonValue::object();
  doc.add("dim", JsonValue::number(static_cast<std::int64_t>(rho.dim())));
  doc.add("field", JsonValue::str(field_name(rho.field)));
  JsonValue entries = JsonValue::array();
  for (int i = 0; i < rho.dim(); ++i) {
    for (int j = 0; j < rho.dim(); ++j) {
      JsonValue pair = JsonValue::array();
      pair.push(JsonValue::number(rho.op.mat(i, j).real()));
      pair.push(JsonValue::number(rho.op.mat(i, j).imag()));
      entries.push(std::move(pair));
    }
  }
  doc.add("entries", std::move(entries));
  return doc;
}

inline std::string print_state(const DensityMatrix& rho) {
  return state_to_json(rho).dump();
}

inline DensityMatrix parse_state(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInputError(std::string("state file is not valid JSON: ") +
                              e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("dim") || !doc.contains("field") ||
        !doc.contains("entries"))
      throw MalformedInputError("state file needs dim, field and entries");
    const int dim = doc["dim"].get<int>();
    if (dim < 1) throw MalformedInputError("state dim must be >= 1");
    const std::string field_str = doc["field"].get<std::string>();
    FieldKind field;
    if (field_str == "complex")
      field = FieldKind::Complex;
    else if (field_str == "real")
      field = FieldKind::Real;
    else
      throw MalformedInputError("state field must be 'complex' or 'real'");
    const auto& entries = doc["entries"];
    if (!entries.is_array() ||
        entries.size() != static_cast<std::size_t>(dim) * dim)
      throw MalformedInputError("state needs dim*dim [re, im] entries");
    Eigen::MatrixXcd mat(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        const auto& cell = entries[static_cast<std::size_t>(i) * dim + j];
        if (!cell.is_array() || cell.size() != 2)
          throw MalformedInputError("state entries must be [re, im] pairs");
        mat(i, j) = std::complex<double>(cell[0].get<double>(),
                                         cell[1].get<double>());
      }
    }
    return make_density(mat, field);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInputError(std::string("bad state document: ") + e.what());
  }
}

inline DensityMatrix load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInputError("cannot open state file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_state(buffer.str());
}

}  // namespace bitomo
