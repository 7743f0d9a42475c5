#pragma once

// JSON and CSV interchange for the engine's value types, plus atomic file
// output. Every JSON document carries a "schema": "strategex/v1" tag and
// parsers reject documents with keys they do not understand, so a config
// typo fails loudly instead of silently running with defaults.
//
// Numbers are written with shortest-round-trip formatting (std::to_chars),
// which keeps outputs byte-identical across runs and thread counts and lets
// a reader recover the exact double.

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "strategex/classifier.hpp"
#include "strategex/dataset.hpp"
#include "strategex/experiments.hpp"
#include "strategex/grid.hpp"

namespace strategex {

using json = nlohmann::json;

inline constexpr const char* kSchemaTag = "strategex/v1";

namespace detail {

inline std::string fmt_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw std::invalid_argument("bad number in CSV: '" + s + "'");
  return v;
}

// --- strict schema helpers --------------------------------------------------

inline void require_object(const json& j, const std::string& what) {
  if (!j.is_object()) throw std::invalid_argument(what + ": expected a JSON object");
}

// Every key must appear in `required` or `optional`; every required key must
// be present. This is what makes "unknown keys rejected" hold everywhere.
inline void check_keys(const json& j, const std::string& what,
                       std::initializer_list<const char*> required,
                       std::initializer_list<const char*> optional = {}) {
  require_object(j, what);
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    bool known = false;
    for (const char* k : required) known = known || key == k;
    for (const char* k : optional) known = known || key == k;
    if (!known) throw std::invalid_argument(what + ": unknown key '" + key + "'");
  }
  for (const char* k : required)
    if (!j.contains(k)) throw std::invalid_argument(what + ": missing key '" + std::string(k) + "'");
}

inline void check_schema_tag(const json& j, const std::string& what) {
  if (!j.contains("schema") || !j["schema"].is_string() || j["schema"] != kSchemaTag)
    throw std::invalid_argument(what + ": missing or unsupported schema tag (want '" +
                                std::string(kSchemaTag) + "')");
}

inline json vec_to_json(const Vec& p) {
  json a = json::array();
  for (int i = 0; i < p.dim; ++i) a.push_back(p[i]);
  return a;
}

inline Vec vec_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || j.size() > 3)
    throw std::invalid_argument(what + ": a point is an array of 1 to 3 numbers");
  Vec p = Vec::zero(static_cast<int>(j.size()));
  for (int i = 0; i < p.dim; ++i) {
    if (!j[i].is_number()) throw std::invalid_argument(what + ": point coordinates must be numbers");
    p[i] = j[i].get<double>();
  }
  return p;
}

inline std::vector<Vec> points_from_json(const json& j, int dim, const std::string& what) {
  if (!j.is_array()) throw std::invalid_argument(what + ": expected an array of points");
  std::vector<Vec> pts;
  pts.reserve(j.size());
  for (const json& e : j) {
    Vec p = vec_from_json(e, what);
    if (p.dim != dim) throw std::invalid_argument(what + ": point dimension mismatch");
    pts.push_back(p);
  }
  return pts;
}

// --- base64 ------------------------------------------------------------------

inline constexpr char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

inline std::string base64_encode(const std::vector<uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    uint32_t n = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out.push_back(kB64Alphabet[(n >> 18) & 63]);
    out.push_back(kB64Alphabet[(n >> 12) & 63]);
    out.push_back(kB64Alphabet[(n >> 6) & 63]);
    out.push_back(kB64Alphabet[n & 63]);
  }
  size_t rest = bytes.size() - i;
  if (rest == 1) {
    uint32_t n = bytes[i] << 16;
    out.push_back(kB64Alphabet[(n >> 18) & 63]);
    out.push_back(kB64Alphabet[(n >> 12) & 63]);
    out += "==";
  } else if (rest == 2) {
    uint32_t n = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out.push_back(kB64Alphabet[(n >> 18) & 63]);
    out.push_back(kB64Alphabet[(n >> 12) & 63]);
    out.push_back(kB64Alphabet[(n >> 6) & 63]);
    out += "=";
  }
  return out;
}

inline std::vector<uint8_t> base64_decode(const std::string& text) {
  auto value_of = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  if (text.size() % 4 != 0) throw std::invalid_argument("base64: length must be a multiple of 4");
  std::vector<uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (size_t i = 0; i < text.size(); i += 4) {
    int pad = 0;
    uint32_t n = 0;
    for (size_t k = 0; k < 4; ++k) {
      char c = text[i + k];
      if (c == '=') {
        // Padding may only appear in the last one or two positions.
        if (i + 4 != text.size() || k < 2) throw std::invalid_argument("base64: stray padding");
        ++pad;
        n <<= 6;
        continue;
      }
      if (pad > 0) throw std::invalid_argument("base64: data after padding");
      int v = value_of(c);
      if (v < 0) throw std::invalid_argument("base64: invalid character");
      n = (n << 6) | static_cast<uint32_t>(v);
    }
    out.push_back(static_cast<uint8_t>((n >> 16) & 0xff));
    if (pad < 2) out.push_back(static_cast<uint8_t>((n >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<uint8_t>(n & 0xff));
  }
  return out;
}

// Bit packing for label arrays: row-major label order, least significant bit
// of each byte first.
inline std::vector<uint8_t> pack_bits(const std::vector<uint8_t>& labels) {
  std::vector<uint8_t> bytes((labels.size() + 7) / 8, 0);
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i]) bytes[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
  return bytes;
}

inline std::vector<uint8_t> unpack_bits(const std::vector<uint8_t>& bytes, size_t count) {
  if (bytes.size() != (count + 7) / 8)
    throw std::invalid_argument("bit array length does not match the declared cell count");
  std::vector<uint8_t> labels(count, 0);
  for (size_t i = 0; i < count; ++i)
    labels[i] = (bytes[i / 8] >> (i % 8)) & 1u;
  // Trailing bits in the final byte must be zero, or the document was built
  // against a different shape.
  for (size_t i = count; i < bytes.size() * 8; ++i)
    if ((bytes[i / 8] >> (i % 8)) & 1u)
      throw std::invalid_argument("bit array has set bits past the declared cell count");
  return labels;
}

}  // namespace detail

// --- Classifier --------------------------------------------------------------

inline json grid_to_json(const LabelGrid& g);
inline LabelGrid grid_from_json(const json& j);

inline const char* polarity_name(Polarity p) {
  return p == Polarity::PositiveInside ? "positive_inside" : "negative_inside";
}

inline Polarity polarity_from_name(const std::string& s) {
  if (s == "positive_inside") return Polarity::PositiveInside;
  if (s == "negative_inside") return Polarity::NegativeInside;
  throw std::invalid_argument("polarity must be 'positive_inside' or 'negative_inside'");
}

inline json classifier_to_json(const Classifier& h) {
  json j;
  j["schema"] = kSchemaTag;
  j["type"] = "classifier";
  j["dimension"] = h.dimension;
  if (const auto* lin = std::get_if<Linear>(&h.variant)) {
    j["variant"] = "linear";
    j["w"] = detail::vec_to_json(lin->w);
    j["b"] = lin->b;
  } else if (const auto* poly = std::get_if<Polynomial>(&h.variant)) {
    j["variant"] = "polynomial";
    j["degree"] = poly->degree;
    j["coeffs"] = poly->coeffs;
  } else if (const auto* bu = std::get_if<BallUnion>(&h.variant)) {
    j["variant"] = "ball_union";
    json centers = json::array();
    for (const Vec& c : bu->centers) centers.push_back(detail::vec_to_json(c));
    j["centers"] = centers;
    j["radii"] = bu->radii;
    j["polarity"] = polarity_name(bu->polarity);
  } else if (const auto* pt = std::get_if<Polytope>(&h.variant)) {
    j["variant"] = "polytope";
    json vertices = json::array();
    for (const Vec& v : pt->vertices) vertices.push_back(detail::vec_to_json(v));
    j["vertices"] = vertices;
    j["polarity"] = polarity_name(pt->polarity);
  } else if (const auto* gs = std::get_if<GridSampled>(&h.variant)) {
    j["variant"] = "grid_sampled";
    j["grid"] = grid_to_json(gs->grid);
  } else {
    throw std::invalid_argument("opaque score functions do not serialize");
  }
  return j;
}

inline Classifier classifier_from_json(const json& j) {
  detail::require_object(j, "classifier");
  detail::check_schema_tag(j, "classifier");
  if (!j.contains("variant") || !j["variant"].is_string())
    throw std::invalid_argument("classifier: missing variant");
  const std::string variant = j["variant"].get<std::string>();
  if (!j.contains("dimension") || !j["dimension"].is_number_integer())
    throw std::invalid_argument("classifier: missing integer dimension");
  const int dim = j["dimension"].get<int>();
  if (dim < 1 || dim > 3) throw std::invalid_argument("classifier: dimension must be 1, 2, or 3");

  if (variant == "linear") {
    detail::check_keys(j, "classifier(linear)", {"schema", "type", "dimension", "variant", "w", "b"});
    Vec w = detail::vec_from_json(j["w"], "classifier.w");
    if (w.dim != dim) throw std::invalid_argument("classifier: w dimension mismatch");
    if (!j["b"].is_number()) throw std::invalid_argument("classifier: b must be a number");
    return Classifier::linear(w, j["b"].get<double>());
  }
  if (variant == "polynomial") {
    detail::check_keys(j, "classifier(polynomial)",
                       {"schema", "type", "dimension", "variant", "degree", "coeffs"});
    if (!j["degree"].is_number_integer()) throw std::invalid_argument("classifier: degree must be an integer");
    std::vector<double> coeffs = j["coeffs"].get<std::vector<double>>();
    return Classifier::polynomial(dim, j["degree"].get<int>(), std::move(coeffs));
  }
  if (variant == "ball_union") {
    detail::check_keys(j, "classifier(ball_union)",
                       {"schema", "type", "dimension", "variant", "centers", "radii", "polarity"});
    std::vector<Vec> centers = detail::points_from_json(j["centers"], dim, "classifier.centers");
    std::vector<double> radii = j["radii"].get<std::vector<double>>();
    return Classifier::ball_union(std::move(centers), std::move(radii),
                                  polarity_from_name(j["polarity"].get<std::string>()));
  }
  if (variant == "polytope") {
    detail::check_keys(j, "classifier(polytope)",
                       {"schema", "type", "dimension", "variant", "vertices", "polarity"});
    std::vector<Vec> vertices = detail::points_from_json(j["vertices"], dim, "classifier.vertices");
    return Classifier::polytope(std::move(vertices), polarity_from_name(j["polarity"].get<std::string>()));
  }
  if (variant == "grid_sampled") {
    detail::check_keys(j, "classifier(grid_sampled)",
                       {"schema", "type", "dimension", "variant", "grid"});
    Classifier h = Classifier::grid_sampled(grid_from_json(j["grid"]));
    if (h.dimension != dim) throw std::invalid_argument("classifier: grid dimension mismatch");
    return h;
  }
  throw std::invalid_argument("classifier: unknown variant '" + variant + "'");
}

// --- Dataset -------------------------------------------------------------------

inline json dataset_to_json(const Dataset& d) {
  json j;
  j["schema"] = kSchemaTag;
  j["type"] = "dataset";
  j["dim"] = d.dim;
  json pts = json::array();
  for (const Vec& p : d.points) pts.push_back(detail::vec_to_json(p));
  j["points"] = pts;
  json labels = json::array();
  for (uint8_t l : d.labels) labels.push_back(static_cast<int>(l));
  j["labels"] = labels;
  return j;
}

inline Dataset dataset_from_json(const json& j) {
  detail::check_keys(j, "dataset", {"schema", "type", "dim", "points", "labels"});
  detail::check_schema_tag(j, "dataset");
  if (!j["dim"].is_number_integer()) throw std::invalid_argument("dataset: dim must be an integer");
  Dataset d;
  d.dim = j["dim"].get<int>();
  if (d.dim < 1 || d.dim > 3) throw std::invalid_argument("dataset: dim must be 1, 2, or 3");
  d.points = detail::points_from_json(j["points"], d.dim, "dataset.points");
  if (!j["labels"].is_array() || j["labels"].size() != d.points.size())
    throw std::invalid_argument("dataset: labels must parallel points");
  d.labels.reserve(j["labels"].size());
  for (const json& l : j["labels"]) {
    if (!l.is_number_integer() || (l.get<int>() != 0 && l.get<int>() != 1))
      throw std::invalid_argument("dataset: labels are 0 or 1");
    d.labels.push_back(static_cast<uint8_t>(l.get<int>()));
  }
  return d;
}

// --- LabelGrid ----------------------------------------------------------------

inline json grid_to_json(const LabelGrid& g) {
  json j;
  j["schema"] = kSchemaTag;
  j["type"] = "label_grid";
  j["dim"] = g.geom.dim;
  j["origin"] = detail::vec_to_json(g.geom.origin);
  j["cell_size"] = g.geom.cell_size;
  json shape = json::array();
  for (int a = 0; a < g.geom.dim; ++a) shape.push_back(g.geom.shape[a]);
  j["shape"] = shape;
  j["cells"] = g.labels.size();
  j["labels_base64"] = detail::base64_encode(detail::pack_bits(g.labels));
  return j;
}

inline LabelGrid grid_from_json(const json& j) {
  detail::check_keys(j, "label_grid",
                     {"schema", "type", "dim", "origin", "cell_size", "shape", "cells",
                      "labels_base64"});
  detail::check_schema_tag(j, "label_grid");
  if (!j["dim"].is_number_integer()) throw std::invalid_argument("label_grid: dim must be an integer");
  const int dim = j["dim"].get<int>();
  if (dim < 1 || dim > 3) throw std::invalid_argument("label_grid: dim must be 1, 2, or 3");

  GridGeom geom;
  geom.dim = dim;
  geom.origin = detail::vec_from_json(j["origin"], "label_grid.origin");
  if (geom.origin.dim != dim) throw std::invalid_argument("label_grid: origin dimension mismatch");
  if (!j["cell_size"].is_number()) throw std::invalid_argument("label_grid: cell_size must be a number");
  geom.cell_size = j["cell_size"].get<double>();
  if (!(geom.cell_size > 0.0)) throw std::invalid_argument("label_grid: cell_size must be positive");
  if (!j["shape"].is_array() || static_cast<int>(j["shape"].size()) != dim)
    throw std::invalid_argument("label_grid: shape must list one extent per axis");
  size_t cells = 1;
  for (int a = 0; a < dim; ++a) {
    if (!j["shape"][a].is_number_integer() || j["shape"][a].get<int>() < 1)
      throw std::invalid_argument("label_grid: shape entries are positive integers");
    geom.shape[a] = j["shape"][a].get<int>();
    cells *= static_cast<size_t>(geom.shape[a]);
  }
  if (!j["cells"].is_number_unsigned() || j["cells"].get<size_t>() != cells)
    throw std::invalid_argument("label_grid: cells does not match the shape product");

  LabelGrid g;
  g.geom = geom;
  g.labels = detail::unpack_bits(detail::base64_decode(j["labels_base64"].get<std::string>()), cells);
  g.empty_positive_warning = g.count_positive() == 0;
  return g;
}

// --- CSV -----------------------------------------------------------------------

// Cell centers with labels, one row per cell in row-major order. Header is
// x,label / x,y,label / x,y,z,label by dimension.
inline std::string grid_to_csv(const LabelGrid& g) {
  static const char* headers[] = {"x,label\n", "x,y,label\n", "x,y,z,label\n"};
  std::string out = headers[g.geom.dim - 1];
  std::array<int, 3> idx{0, 0, 0};
  for (size_t i = 0; i < g.labels.size(); ++i) {
    size_t rest = i;
    for (int a = g.geom.dim - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rest % static_cast<size_t>(g.geom.shape[a]));
      rest /= static_cast<size_t>(g.geom.shape[a]);
    }
    Vec c = g.geom.center(idx);
    for (int a = 0; a < g.geom.dim; ++a) {
      out += detail::fmt_double(c[a]);
      out += ',';
    }
    out += g.labels[i] ? '1' : '0';
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

// Recover one axis of grid geometry from the sorted distinct coordinates
// seen in a CSV. The centers of a uniform grid are equally spaced; anything
// else cannot have come from grid_to_csv.
inline void infer_axis(const std::vector<double>& values, double& origin, double& step, int& count) {
  if (values.size() < 2)
    throw std::invalid_argument("grid CSV: need at least two distinct coordinates per axis");
  step = values[1] - values[0];
  for (size_t i = 1; i < values.size(); ++i) {
    double d = values[i] - values[i - 1];
    if (std::abs(d - step) > 1e-9 * std::max(1.0, std::abs(step)))
      throw std::invalid_argument("grid CSV: coordinates are not uniformly spaced");
  }
  origin = values[0] - step / 2.0;
  count = static_cast<int>(values.size());
}

}  // namespace detail

inline LabelGrid grid_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("grid CSV: empty input");
  std::vector<std::string> header = detail::split_csv_line(line);
  int dim = static_cast<int>(header.size()) - 1;
  static const char* expected[][4] = {{"x", "label"}, {"x", "y", "label"}, {"x", "y", "z", "label"}};
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid CSV: header must be x[,y[,z]],label");
  for (int i = 0; i <= dim; ++i)
    if (header[i] != expected[dim - 1][i])
      throw std::invalid_argument("grid CSV: header must be x[,y[,z]],label");

  std::vector<Vec> pts;
  std::vector<uint8_t> labels;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = detail::split_csv_line(line);
    if (static_cast<int>(f.size()) != dim + 1)
      throw std::invalid_argument("grid CSV: wrong field count in row");
    Vec p = Vec::zero(dim);
    for (int a = 0; a < dim; ++a) p[a] = detail::parse_double(f[a]);
    const std::string& l = f[dim];
    if (l != "0" && l != "1") throw std::invalid_argument("grid CSV: labels are 0 or 1");
    pts.push_back(p);
    labels.push_back(l == "1");
  }
  if (pts.empty()) throw std::invalid_argument("grid CSV: no data rows");

  GridGeom geom;
  geom.dim = dim;
  double step = 0.0;
  for (int a = 0; a < dim; ++a) {
    std::vector<double> vals;
    vals.reserve(pts.size());
    for (const Vec& p : pts) vals.push_back(p[a]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    double axis_origin = 0.0, axis_step = 0.0;
    int count = 0;
    detail::infer_axis(vals, axis_origin, axis_step, count);
    if (a == 0) step = axis_step;
    else if (std::abs(axis_step - step) > 1e-9 * std::max(1.0, std::abs(step)))
      throw std::invalid_argument("grid CSV: axes disagree on cell size");
    geom.origin[a] = axis_origin;
    geom.shape[a] = count;
  }
  geom.origin.dim = dim;
  geom.cell_size = step;

  LabelGrid g = LabelGrid::zeros(geom);
  std::vector<uint8_t> seen(g.labels.size(), 0);
  for (size_t i = 0; i < pts.size(); ++i) {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
      double rel = (pts[i][a] - geom.origin[a]) / geom.cell_size - 0.5;
      idx[a] = static_cast<int>(std::lround(rel));
      if (idx[a] < 0 || idx[a] >= geom.shape[a])
        throw std::invalid_argument("grid CSV: point off the inferred grid");
    }
    size_t flat = geom.index(idx);
    if (seen[flat]) throw std::invalid_argument("grid CSV: duplicate cell");
    seen[flat] = 1;
    g.labels[flat] = labels[i];
  }
  for (uint8_t s : seen)
    if (!s) throw std::invalid_argument("grid CSV: grid has holes (missing cells)");
  g.empty_positive_warning = g.count_positive() == 0;
  return g;
}

// One row per boundary cell. kappa is blank when curvature was not computed;
// case is "-" when the point-mapping analysis was not run.
struct BoundaryRow {
  Vec point;
  Vec normal;
  std::optional<double> kappa;
  std::string mapping = "-";
};

inline std::string boundary_to_csv(const std::vector<BoundaryRow>& rows) {
  std::string out = "x,y,nx,ny,kappa,case\n";
  for (const BoundaryRow& r : rows) {
    out += detail::fmt_double(r.point.x());
    out += ',';
    out += detail::fmt_double(r.point.y());
    out += ',';
    out += detail::fmt_double(r.normal.x());
    out += ',';
    out += detail::fmt_double(r.normal.y());
    out += ',';
    if (r.kappa) out += detail::fmt_double(*r.kappa);
    out += ',';
    out += r.mapping;
    out += '\n';
  }
  return out;
}

inline std::string expressivity_to_csv(const std::vector<ExpressivityRow>& rows) {
  std::string out = "k,alpha,k_delta,instance_seed\n";
  for (const ExpressivityRow& r : rows) {
    out += std::to_string(r.k);
    out += ',';
    out += detail::fmt_double(r.alpha);
    out += ',';
    out += std::to_string(r.k_delta);
    out += ',';
    out += std::to_string(r.instance_seed);
    out += '\n';
  }
  return out;
}

inline std::string approximation_to_csv(const std::vector<ApproximationRow>& rows) {
  std::string out = "mu,alpha,max_linear,max_strategic,seed\n";
  for (const ApproximationRow& r : rows) {
    out += detail::fmt_double(r.mu);
    out += ',';
    out += detail::fmt_double(r.alpha);
    out += ',';
    out += detail::fmt_double(r.max_linear);
    out += ',';
    out += detail::fmt_double(r.max_strategic);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

// --- atomic file output ----------------------------------------------------------

// Writes to a temp file in the target's directory and renames it into place,
// so readers never observe a partial file and failures leave nothing behind.
inline void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  static std::atomic<uint64_t> counter{0};
  fs::path tmp = dir / (target.filename().string() + ".tmp" +
                        std::to_string(counter.fetch_add(1)) + "-" +
                        std::to_string(static_cast<uint64_t>(
                            std::chrono::steady_clock::now().time_since_epoch().count())));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed for '" + path + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ec2;
    fs::remove(tmp, ec2);
    throw std::runtime_error("cannot move output into place at '" + path + "': " + ec.message());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace strategex
