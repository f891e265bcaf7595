#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "znd/errors.hpp"
#include "znd/params.hpp"
#include "znd/stability.hpp"

namespace znd {

/// Fixed float format for every emitted number, so identical inputs give
/// byte-identical files.
inline std::string fmt_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Minimal canonical JSON value: object keys sorted, numbers preformatted
/// with fmt_g17, two-space indentation.  Covers exactly what the reports
/// need; parsing stays with the vendored library.
class Json {
 public:
  static Json object() { return Json(Kind::Object); }
  static Json array() { return Json(Kind::Array); }
  static Json number(double x) { return scalar(fmt_g17(x)); }
  static Json integer(long long i) { return scalar(std::to_string(i)); }
  static Json boolean(bool b) { return scalar(b ? "true" : "false"); }
  static Json string(std::string s) {
    Json j(Kind::String);
    j.text_ = std::move(s);
    return j;
  }

  Json& set(const std::string& key, Json value) {
    members_.insert_or_assign(key, std::move(value));
    return *this;
  }
  Json& push(Json value) {
    items_.push_back(std::move(value));
    return *this;
  }

  std::string dump() const {
    std::string out;
    write(out, 0);
    out.push_back('\n');
    return out;
  }

 private:
  enum class Kind { Scalar, String, Array, Object };

  explicit Json(Kind k) : kind_(k) {}
  static Json scalar(std::string lit) {
    Json j(Kind::Scalar);
    j.text_ = std::move(lit);
    return j;
  }

  static void escape(std::string& out, const std::string& s) {
    out.push_back('"');
    for (const char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
          } else {
            out.push_back(c);
          }
      }
    }
    out.push_back('"');
  }

  void write(std::string& out, int depth) const {
    const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
    const std::string pad_in(2 * static_cast<std::size_t>(depth + 1), ' ');
    switch (kind_) {
      case Kind::Scalar: out += text_; break;
      case Kind::String: escape(out, text_); break;
      case Kind::Array:
        if (items_.empty()) {
          out += "[]";
          break;
        }
        out += "[\n";
        for (std::size_t i = 0; i < items_.size(); ++i) {
          out += pad_in;
          items_[i].write(out, depth + 1);
          out += i + 1 < items_.size() ? ",\n" : "\n";
        }
        out += pad + "]";
        break;
      case Kind::Object:
        if (members_.empty()) {
          out += "{}";
          break;
        }
        out += "{\n";
        std::size_t i = 0;
        for (const auto& [key, value] : members_) {
          out += pad_in;
          escape(out, key);
          out += ": ";
          value.write(out, depth + 1);
          out += ++i < members_.size() ? ",\n" : "\n";
        }
        out += pad + "}";
        break;
    }
  }

  Kind kind_ = Kind::Scalar;
  std::string text_;
  std::vector<Json> items_;
  std::map<std::string, Json> members_;  // sorted keys
};

/// Comma-separated table with a header row; cells are preformatted strings.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header)
      : header_(std::move(header)) {}

  CsvBuilder& row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
      throw IoError("csv row width does not match header");
    rows_.push_back(std::move(cells));
    return *this;
  }

  std::string dump() const {
    std::string out = join(header_);
    for (const auto& r : rows_) out += join(r);
    return out;
  }

 private:
  static std::string join(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line.push_back(',');
      line += cells[i];
    }
    line.push_back('\n');
    return line;
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Write via a temporary then rename, so failures leave no partial file.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  std::error_code ec;
  const auto parent = path.parent_path();
  if (!parent.empty()) {
    std::filesystem::create_directories(parent, ec);
    if (ec) throw IoError("cannot create directory " + parent.string());
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) {
      out.close();
      std::filesystem::remove(tmp, ec);
      throw IoError("short write to " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " into place");
  }
}

inline Json params_to_json(const DetonationParams& p) {
  Json j = Json::object();
  j.set("u_plus", Json::number(p.u_plus()));
  j.set("u_star", Json::number(p.u_star()));
  j.set("q", Json::number(p.q()));
  j.set("k", Json::number(p.k()));
  j.set("u_i", Json::number(p.u_i()));
  j.set("s", Json::number(p.s()));
  j.set("u_minus", Json::number(p.u_minus()));
  return j;
}

inline Json report_to_json(const StabilityReport& r) {
  Json j = Json::object();
  j.set("params", params_to_json(r.params));
  j.set("winding_open_half_plane", Json::integer(r.winding_open_half_plane));
  j.set("winding_small_circle", Json::integer(r.winding_small_circle));
  j.set("radius_R", Json::number(r.radius_R));
  j.set("indent_r", Json::number(r.indent_r));
  j.set("psi_max", Json::number(r.psi_max));
  j.set("coeff_floor", Json::number(r.coeff_floor));
  j.set("min_abs_D", Json::number(r.min_abs_D));
  j.set("verdict", Json::string(verdict_name(r.verdict)));
  j.set("radius_derivation", Json::string(r.radius_derivation));
  Json diag = Json::array();
  for (const auto& d : r.diagnostics) diag.push(Json::string(d));
  j.set("diagnostics", std::move(diag));
  return j;
}

inline void emit_report(const StabilityReport& r,
                        const std::filesystem::path& path) {
  write_file_atomic(path, report_to_json(r).dump());
}

}  // namespace znd
