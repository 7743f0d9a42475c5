// Command-line entry point: JSON configs in, CSV/JSON/SVG out.
//
// Exit codes: 0 success, 2 validation error (bad flags, malformed or
// unknown-key JSON, missing files), 1 runtime error. All outputs are staged
// in memory and written via temp-file-plus-rename, so a failing run never
// leaves a partial file behind.

#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "strategex/accuracy.hpp"
#include "strategex/boundary.hpp"
#include "strategex/classifier.hpp"
#include "strategex/experiments.hpp"
#include "strategex/impossibility.hpp"
#include "strategex/response.hpp"
#include "strategex/serialize.hpp"
#include "strategex/svg.hpp"
#include "strategex/vc.hpp"

namespace fs = std::filesystem;
using namespace strategex;

namespace {

struct Ctx {
  uint64_t seed = 20260819;
  bool seed_given = false;
  int threads = 1;
  std::string out;
  std::string format;  // empty = subcommand default
};

// Outputs staged before anything touches the filesystem.
using Staged = std::map<std::string, std::string>;

void flush_outputs(const Staged& staged) {
  for (const auto& [path, content] : staged) write_atomic(path, content);
}

void require_out(const Ctx& ctx) {
  if (ctx.out.empty()) throw std::invalid_argument("--out is required");
  fs::path dir = fs::path(ctx.out).parent_path();
  if (!dir.empty() && !fs::is_directory(dir))
    throw std::invalid_argument("output directory does not exist: " + dir.string());
}

std::string pick_format(const Ctx& ctx, const std::string& fallback,
                        std::initializer_list<const char*> allowed) {
  std::string f = ctx.format.empty() ? fallback : ctx.format;
  for (const char* a : allowed)
    if (f == a) return f;
  throw std::invalid_argument("format '" + f + "' is not supported by this subcommand");
}

json load_json_file(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path))
    throw std::invalid_argument(std::string(what) + " file not found: " + path);
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

Norm parse_norm(const std::string& s) {
  if (s == "l1") return Norm::L1;
  if (s == "l2") return Norm::L2;
  if (s == "linf") return Norm::LInf;
  throw std::invalid_argument("norm must be one of l1, l2, linf");
}

// "x0,x1" | "x0,y0,x1,y1" | "x0,y0,z0,x1,y1,z1" -> analysis box.
Box parse_box(const std::string& s) {
  std::vector<double> v;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) v.push_back(detail::parse_double(cur));
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  if (v.size() != 2 && v.size() != 4 && v.size() != 6)
    throw std::invalid_argument("--box wants 2, 4, or 6 comma-separated numbers (lo then hi)");
  int d = static_cast<int>(v.size()) / 2;
  Vec lo = Vec::zero(d), hi = Vec::zero(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = v[i];
    hi[i] = v[d + i];
    if (!(lo[i] < hi[i])) throw std::invalid_argument("--box needs lo < hi on every axis");
  }
  return Box::of(lo, hi);
}

json box_to_json(const Box& b) {
  return json{{"lo", detail::vec_to_json(b.lo)}, {"hi", detail::vec_to_json(b.hi)}};
}

std::string svg_companion_path(const std::string& out, const std::string& suffix) {
  fs::path p(out);
  fs::path dir = p.parent_path();
  std::string stem = p.stem().string();
  fs::path name(stem + suffix + ".svg");
  return (dir.empty() ? name : dir / name).string();
}

// ---------------------------------------------------------------------------
// effective
// ---------------------------------------------------------------------------

struct EffectiveArgs {
  std::string classifier;
  std::string box;
  double cell = 0.05;
  std::string norm = "l2";
  double alpha = 1.0;
};

int run_effective(const Ctx& ctx, const EffectiveArgs& a) {
  require_out(ctx);
  std::string fmt = pick_format(ctx, "csv", {"csv", "json", "svg"});
  Classifier h = classifier_from_json(load_json_file(a.classifier, "classifier"));
  Box box = parse_box(a.box);
  if (box.dim() != h.dimension)
    throw std::invalid_argument("--box dimension does not match the classifier");
  if (!(a.alpha > 0.0)) throw std::invalid_argument("--alpha must be positive");
  if (!(a.cell > 0.0)) throw std::invalid_argument("--cell must be positive");
  CostModel cost(parse_norm(a.norm), a.alpha);

  LabelGrid eff = effective_grid(h, box, a.cell, cost);

  Staged staged;
  if (fmt == "csv") {
    staged[ctx.out] = grid_to_csv(eff);
  } else if (fmt == "json") {
    staged[ctx.out] = grid_to_json(eff).dump(2) + "\n";
  } else {
    if (h.dimension != 2) throw std::invalid_argument("svg output draws d=2 grids only");
    LabelGrid src = rasterize(h, GridGeom::covering(box, a.cell));
    staged[ctx.out] = boundary_overlay_svg(src, eff);
  }
  flush_outputs(staged);
  return 0;
}

// ---------------------------------------------------------------------------
// boundary
// ---------------------------------------------------------------------------

struct BoundaryArgs {
  std::string grid;
  bool curvature = false;
  double window_cells = 12.0;
  std::string source;  // classifier JSON for the point-mapping column
  double alpha = 0.0;
  std::string norm = "l2";
};

int run_boundary(const Ctx& ctx, const BoundaryArgs& a) {
  require_out(ctx);
  std::string fmt = pick_format(ctx, "csv", {"csv", "json", "svg"});
  if (!fs::is_regular_file(a.grid))
    throw std::invalid_argument("grid file not found: " + a.grid);
  bool want_mapping = !a.source.empty();
  if (want_mapping && !(a.alpha > 0.0))
    throw std::invalid_argument("--source needs --alpha to classify boundary mappings");
  Classifier source;
  if (want_mapping) source = classifier_from_json(load_json_file(a.source, "classifier"));

  LabelGrid g = grid_from_csv(read_file(a.grid));
  if (g.geom.dim != 2)
    throw std::invalid_argument("boundary analysis works on d=2 grids");
  BoundarySet bs = extract_boundary(g);

  CostModel cost(parse_norm(a.norm), a.alpha > 0.0 ? a.alpha : 1.0);
  const double window = a.window_cells * g.geom.cell_size;

  std::vector<BoundaryRow> rows;
  rows.reserve(bs.points.size());
  for (const BoundaryPoint& bp : bs.points) {
    BoundaryRow row;
    row.point = bp.center;
    row.normal = bp.normal;
    if (a.curvature) row.kappa = signed_curvature(bs, bp.center, window).kappa;
    if (want_mapping) {
      try {
        row.mapping = mapping_kind_name(
            classify_boundary_point(source, bp.center, cost, g.geom.cell_size).kind);
      } catch (const std::exception&) {
        row.mapping = "-";  // probe window fell off the analyzable region
      }
    }
    rows.push_back(row);
  }

  Staged staged;
  if (fmt == "csv") {
    staged[ctx.out] = boundary_to_csv(rows);
  } else if (fmt == "json") {
    json out;
    out["schema"] = kSchemaTag;
    out["type"] = "boundary_set";
    json jrows = json::array();
    for (const BoundaryRow& r : rows) {
      json jr;
      jr["x"] = r.point.x();
      jr["y"] = r.point.y();
      jr["nx"] = r.normal.x();
      jr["ny"] = r.normal.y();
      if (r.kappa) jr["kappa"] = *r.kappa;
      jr["case"] = r.mapping;
      jrows.push_back(jr);
    }
    out["rows"] = jrows;
    staged[ctx.out] = out.dump(2) + "\n";
  } else {
    SvgLayer layer;
    layer.name = "boundary";
    layer.color = "#1f77b4";
    layer.contours = trace_contours(g);
    Box world = Box::of(g.geom.origin,
                        Vec(g.geom.origin.x() + g.geom.shape[0] * g.geom.cell_size,
                            g.geom.origin.y() + g.geom.shape[1] * g.geom.cell_size));
    staged[ctx.out] = svg_document(world, {layer});
  }
  flush_outputs(staged);
  return 0;
}

// ---------------------------------------------------------------------------
// check-impossible
// ---------------------------------------------------------------------------

struct CheckArgs {
  std::string classifier;
  double alpha = 1.0;
  std::string norm = "l2";
  std::string box;        // empty = default around the origin
  double resolution = 0;  // 0 = alpha/20
};

int run_check_impossible(const Ctx& ctx, const CheckArgs& a) {
  require_out(ctx);
  pick_format(ctx, "json", {"json"});
  if (!(a.alpha > 0.0)) throw std::invalid_argument("--alpha must be positive");
  Classifier g = classifier_from_json(load_json_file(a.classifier, "classifier"));
  if (g.dimension != 2) throw std::invalid_argument("impossibility checks work in d=2");
  double half = 5.0 * a.alpha + 1.0;
  Box box = a.box.empty() ? Box::of(Vec(-half, -half), Vec(half, half)) : parse_box(a.box);
  if (box.dim() != 2) throw std::invalid_argument("--box must be two-dimensional");
  double resolution = a.resolution > 0.0 ? a.resolution : a.alpha / 20.0;
  CostModel cost(parse_norm(a.norm), a.alpha);

  ImpossibilityReport report = detect_type(g, box, cost, resolution);

  json out;
  out["schema"] = kSchemaTag;
  out["type"] = "impossibility_report";
  out["impossible"] = report.impossible;
  out["reason"] = reason_name(report.reason);
  out["value"] = report.value;
  out["threshold"] = report.threshold;
  json witness = json::array();
  for (const Vec& w : report.witness) witness.push_back(detail::vec_to_json(w));
  out["witness"] = witness;
  out["alpha"] = a.alpha;
  out["norm"] = norm_name(cost.norm);
  out["resolution"] = resolution;
  out["box"] = box_to_json(box);

  Staged staged;
  staged[ctx.out] = out.dump(2) + "\n";
  flush_outputs(staged);
  return 0;
}

// ---------------------------------------------------------------------------
// accuracy
// ---------------------------------------------------------------------------

struct AccuracyArgs {
  std::string data;
  double alpha = 1.0;
  std::string mode;
  std::string classifier;
  std::string norm = "l2";
  double resolution = 0;  // 0 = alpha/20
};

int run_accuracy(const Ctx& ctx, const AccuracyArgs& a) {
  require_out(ctx);
  pick_format(ctx, "json", {"json"});
  Dataset data = dataset_from_json(load_json_file(a.data, "dataset"));
  CostModel cost(parse_norm(a.norm), a.alpha > 0.0 ? a.alpha : 1.0);

  AccuracyResult result;
  if (a.mode == "strategic") {
    if (a.classifier.empty())
      throw std::invalid_argument("mode strategic needs --classifier");
    if (!(a.alpha > 0.0)) throw std::invalid_argument("--alpha must be positive");
    Classifier h = classifier_from_json(load_json_file(a.classifier, "classifier"));
    double resolution = a.resolution > 0.0 ? a.resolution : a.alpha / 20.0;
    result = strategic_accuracy(h, data, cost, resolution);
  } else if (a.mode == "max-linear") {
    result = max_linear_accuracy(data);
  } else if (a.mode == "max-strategic") {
    if (!(a.alpha > 0.0)) throw std::invalid_argument("--alpha must be positive");
    result = max_strategic_accuracy(data, cost);
  } else {
    throw std::invalid_argument("--mode must be strategic, max-linear, or max-strategic");
  }

  json out;
  out["schema"] = kSchemaTag;
  out["type"] = "accuracy_result";
  out["mode"] = a.mode;
  out["correct"] = result.correct;
  out["total"] = result.total;
  out["accuracy"] = result.accuracy;
  out["optimal_structure"] = result.optimal_structure;
  if (a.mode != "max-linear") {
    out["alpha"] = a.alpha;
    out["norm"] = norm_name(cost.norm);
  }

  Staged staged;
  staged[ctx.out] = out.dump(2) + "\n";
  flush_outputs(staged);
  return 0;
}

// ---------------------------------------------------------------------------
// vc-demo
// ---------------------------------------------------------------------------

struct VcArgs {
  std::string fixture = "four-balls";
  double alpha = 0.75;
};

std::vector<std::vector<Vec>> subsets_up_to_three(const std::vector<Vec>& universe) {
  std::vector<std::vector<Vec>> sets;
  const size_t n = universe.size();
  for (size_t i = 0; i < n; ++i) {
    sets.push_back({universe[i]});
    for (size_t j = i + 1; j < n; ++j) {
      sets.push_back({universe[i], universe[j]});
      for (size_t k = j + 1; k < n; ++k)
        sets.push_back({universe[i], universe[j], universe[k]});
    }
  }
  return sets;
}

struct BoundWitness {
  int bound = 0;
  std::vector<Vec> witness;
};

BoundWitness best_shattered(const FiniteClass& fam, const std::vector<std::vector<Vec>>& sets,
                            bool effective, const CostModel& cost, double resolution) {
  BoundWitness bw;
  for (const std::vector<Vec>& s : sets) {
    if (static_cast<int>(s.size()) <= bw.bound) continue;
    if (fam.classifiers.size() < (size_t(1) << s.size())) continue;
    if (shatters(fam, s, effective, cost, resolution).shattered) {
      bw.bound = static_cast<int>(s.size());
      bw.witness = s;
    }
  }
  return bw;
}

int run_vc_demo(const Ctx& ctx, const VcArgs& a) {
  require_out(ctx);
  pick_format(ctx, "json", {"json"});
  if (!(a.alpha > 0.0)) throw std::invalid_argument("--alpha must be positive");

  FixtureParams params;
  params.alpha = a.alpha;
  std::vector<Vec> universe;
  if (a.fixture == "four-balls" || a.fixture == "scaled-lattice-balls") {
    double factor = a.fixture == "four-balls" ? 1.0 : params.scale;
    for (double x : {-0.5, 0.0, 0.5, 1.0, 1.5})
      for (double y : {-0.5, 0.0, 0.5, 1.0, 1.5}) universe.push_back(Vec(x * factor, y * factor));
  } else if (a.fixture == "wipeout-lattice") {
    double shift = (params.lattice - 1) / 2.0;
    for (int i = 0; i < params.lattice; ++i)
      for (int j = 0; j < params.lattice; ++j)
        universe.push_back(Vec((i - shift) * params.spacing, (j - shift) * params.spacing));
  } else if (a.fixture == "negative-polytopes") {
    throw std::invalid_argument(
        "fixture 'negative-polytopes' demonstrates region containment, not shattering; "
        "pick four-balls, scaled-lattice-balls, or wipeout-lattice");
  } else {
    throw std::invalid_argument("unknown fixture: " + a.fixture);
  }

  FiniteClass fam = build_fixture(a.fixture, params);
  CostModel cost(Norm::L2, params.alpha);
  const double resolution = params.alpha / 20.0;
  std::vector<std::vector<Vec>> sets = subsets_up_to_three(universe);

  BoundWitness standard = best_shattered(fam, sets, false, cost, resolution);
  BoundWitness effective = best_shattered(fam, sets, true, cost, resolution);

  auto points_json = [](const std::vector<Vec>& pts) {
    json a = json::array();
    for (const Vec& p : pts) a.push_back(detail::vec_to_json(p));
    return a;
  };

  json out;
  out["schema"] = kSchemaTag;
  out["type"] = "vc_demo";
  out["fixture"] = a.fixture;
  out["family"] = fam.name;
  out["alpha"] = params.alpha;
  out["classifier_count"] = fam.classifiers.size();
  out["candidate_universe"] = points_json(universe);
  out["candidate_sets"] = sets.size();
  out["max_set_size"] = 3;
  out["standard"] = json{{"lower_bound", standard.bound}, {"witness", points_json(standard.witness)}};
  out["effective"] = json{{"lower_bound", effective.bound}, {"witness", points_json(effective.witness)}};

  Staged staged;
  staged[ctx.out] = out.dump(2) + "\n";
  flush_outputs(staged);
  return 0;
}

// ---------------------------------------------------------------------------
// expressivity
// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string config;
  bool svg = false;
};

ExpressivityConfig expressivity_config_from_json(const json& j) {
  detail::check_keys(j, "expressivity config", {"schema"},
                     {"alphas", "ks", "instances", "box_half", "cell", "seed", "tolerance",
                      "k_max", "verify_grid"});
  detail::check_schema_tag(j, "expressivity config");
  ExpressivityConfig cfg;
  if (j.contains("alphas")) cfg.alphas = j["alphas"].get<std::vector<double>>();
  if (j.contains("ks")) cfg.ks = j["ks"].get<std::vector<int>>();
  if (j.contains("instances")) cfg.instances = j["instances"].get<int>();
  if (j.contains("box_half")) cfg.box_half = j["box_half"].get<double>();
  if (j.contains("cell")) cfg.cell = j["cell"].get<double>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<int>();
  if (j.contains("tolerance")) cfg.tolerance = j["tolerance"].get<double>();
  if (j.contains("k_max")) cfg.k_max = j["k_max"].get<int>();
  if (j.contains("verify_grid")) cfg.verify_grid = j["verify_grid"].get<int>();
  return cfg;
}

int run_expressivity_cmd(const Ctx& ctx, const SweepArgs& a) {
  require_out(ctx);
  std::string fmt = pick_format(ctx, "csv", {"csv", "json"});
  ExpressivityConfig cfg = expressivity_config_from_json(load_json_file(a.config, "config"));
  if (ctx.seed_given) cfg.seed = static_cast<int>(ctx.seed);

  ExpressivityResult result = run_expressivity(cfg, ctx.threads);

  Staged staged;
  if (fmt == "csv") {
    staged[ctx.out] = expressivity_to_csv(result.rows);
  } else {
    json out;
    out["schema"] = kSchemaTag;
    out["type"] = "expressivity_result";
    json rows = json::array();
    for (const ExpressivityRow& r : result.rows)
      rows.push_back(json{{"k", r.k}, {"alpha", r.alpha}, {"k_delta", r.k_delta},
                          {"instance_seed", r.instance_seed}});
    out["rows"] = rows;
    json aggs = json::array();
    for (const ExpressivityAggregate& g : result.aggregates)
      aggs.push_back(json{{"k", g.k}, {"alpha", g.alpha}, {"mean_k_delta", g.mean_k_delta},
                          {"stderr_k_delta", g.stderr_k_delta}, {"instances", g.instances}});
    out["aggregates"] = aggs;
    staged[ctx.out] = out.dump(2) + "\n";
  }

  if (a.svg) {
    // One overlay per sweep cell, drawn from its first instance.
    Box box = Box::of(Vec(-cfg.box_half, -cfg.box_half), Vec(cfg.box_half, cfg.box_half));
    for (size_t ki = 0; ki < cfg.ks.size(); ++ki)
      for (size_t ai = 0; ai < cfg.alphas.size(); ++ai) {
        size_t idx = (ki * cfg.alphas.size() + ai) * static_cast<size_t>(cfg.instances);
        const ExpressivityRow& row = result.rows[idx];
        Classifier h = sample_polynomial(row.k, row.instance_seed, box, cfg.verify_grid);
        LabelGrid src = rasterize(h, GridGeom::covering(box, cfg.cell));
        LabelGrid eff = effective_grid(h, box, cfg.cell, CostModel(Norm::L2, row.alpha));
        std::string path = svg_companion_path(
            ctx.out, "_k" + std::to_string(row.k) + "_alpha" + detail::fmt_double(row.alpha));
        staged[path] = boundary_overlay_svg(src, eff);
      }
  }
  flush_outputs(staged);
  return 0;
}

// ---------------------------------------------------------------------------
// approximation
// ---------------------------------------------------------------------------

ApproximationConfig approximation_config_from_json(const json& j) {
  detail::check_keys(j, "approximation config", {"schema"},
                     {"alphas", "mus", "instances", "n_per_class", "seed"});
  detail::check_schema_tag(j, "approximation config");
  ApproximationConfig cfg;
  if (j.contains("alphas")) cfg.alphas = j["alphas"].get<std::vector<double>>();
  if (j.contains("mus")) cfg.mus = j["mus"].get<std::vector<double>>();
  if (j.contains("instances")) cfg.instances = j["instances"].get<int>();
  if (j.contains("n_per_class")) cfg.n_per_class = j["n_per_class"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<int>();
  return cfg;
}

int run_approximation_cmd(const Ctx& ctx, const SweepArgs& a) {
  require_out(ctx);
  std::string fmt = pick_format(ctx, "csv", {"csv", "json"});
  ApproximationConfig cfg = approximation_config_from_json(load_json_file(a.config, "config"));
  if (ctx.seed_given) cfg.seed = static_cast<int>(ctx.seed);

  ApproximationResult result = run_approximation(cfg, ctx.threads);

  Staged staged;
  if (fmt == "csv") {
    staged[ctx.out] = approximation_to_csv(result.rows);
  } else {
    json out;
    out["schema"] = kSchemaTag;
    out["type"] = "approximation_result";
    json rows = json::array();
    for (const ApproximationRow& r : result.rows)
      rows.push_back(json{{"mu", r.mu}, {"alpha", r.alpha}, {"max_linear", r.max_linear},
                          {"max_strategic", r.max_strategic}, {"seed", r.seed}});
    out["rows"] = rows;
    json aggs = json::array();
    for (const ApproximationAggregate& g : result.aggregates)
      aggs.push_back(json{{"mu", g.mu}, {"alpha", g.alpha}, {"mean_linear", g.mean_linear},
                          {"mean_strategic", g.mean_strategic}, {"instances", g.instances}});
    out["aggregates"] = aggs;
    out["ordering_deviations"] = result.ordering_deviations;
    staged[ctx.out] = out.dump(2) + "\n";
  }

  if (a.svg) {
    // One scatter per sweep cell (first instance): the rows carry no grid
    // geometry, so the figure shows the sampled classes instead.
    for (size_t mi = 0; mi < cfg.mus.size(); ++mi)
      for (size_t ai = 0; ai < cfg.alphas.size(); ++ai) {
        size_t idx = (mi * cfg.alphas.size() + ai) * static_cast<size_t>(cfg.instances);
        const ApproximationRow& row = result.rows[idx];
        Dataset data = make_gaussian_dataset(row.mu, cfg.n_per_class, row.seed);
        SvgMarkers pos, neg;
        pos.name = "class_pos";
        pos.color = "#d62728";
        pos.radius = 3.0;
        neg.name = "class_neg";
        neg.color = "#1f77b4";
        neg.radius = 3.0;
        Vec lo = data.points[0], hi = data.points[0];
        for (size_t i = 0; i < data.size(); ++i) {
          const Vec& p = data.points[i];
          (data.labels[i] ? pos : neg).points.push_back(p);
          for (int d = 0; d < 2; ++d) {
            lo[d] = std::min(lo[d], p[d]);
            hi[d] = std::max(hi[d], p[d]);
          }
        }
        Box world = Box::of(lo, hi).padded(1.0);
        std::string path = svg_companion_path(
            ctx.out, "_mu" + detail::fmt_double(row.mu) + "_alpha" + detail::fmt_double(row.alpha));
        staged[path] = svg_document(world, {}, {pos, neg});
      }
  }
  flush_outputs(staged);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "strategex: geometry of classification when everyone within budget games the test.\n"
      "JSON configs in, CSV/JSON/SVG out; all writes are atomic."};
  app.require_subcommand(1);

  Ctx ctx;
  auto* seed_opt = app.add_option("--seed", ctx.seed, "override the config's RNG seed");
  app.add_option("--threads", ctx.threads, "worker threads (results are thread-count independent)")
      ->check(CLI::Range(1, 256));
  app.add_option("--out", ctx.out, "output file path (required by every subcommand)");
  app.add_option("--format", ctx.format, "output format: csv, json, or svg")
      ->check(CLI::IsMember({"csv", "json", "svg"}));

  EffectiveArgs eff_args;
  CLI::App* eff = app.add_subcommand(
      "effective",
      "Label grid after best responses.\n"
      "Classifier JSON: {schema:'strategex/v1', type:'classifier', dimension, variant:\n"
      "  linear{w,b} | polynomial{degree,coeffs} | ball_union{centers,radii,polarity} |\n"
      "  polytope{vertices,polarity} | grid_sampled{grid}}.\n"
      "Formats: csv (x,y[,z],label), json (grid document), svg (boundary overlay).");
  eff->fallthrough();
  eff->add_option("--classifier", eff_args.classifier, "classifier JSON file")->required();
  eff->add_option("--box", eff_args.box, "analysis box: x0,y0,x1,y1 (lo then hi)")->required();
  eff->add_option("--cell", eff_args.cell, "grid cell size");
  eff->add_option("--norm", eff_args.norm, "cost norm: l1, l2, linf");
  eff->add_option("--alpha", eff_args.alpha, "movement budget");

  BoundaryArgs bnd_args;
  CLI::App* bnd = app.add_subcommand(
      "boundary",
      "Boundary cells of a label grid as CSV rows x,y,nx,ny,kappa,case.\n"
      "kappa fills in with --curvature; case fills in with --source + --alpha\n"
      "(how each source boundary point maps onto the effective boundary).");
  bnd->fallthrough();
  bnd->add_option("--grid", bnd_args.grid, "grid CSV file (as written by 'effective')")->required();
  bnd->add_flag("--curvature", bnd_args.curvature, "estimate signed curvature per boundary cell");
  bnd->add_option("--window", bnd_args.window_cells, "curvature window in cells");
  bnd->add_option("--source", bnd_args.source, "classifier JSON for the point-mapping column");
  bnd->add_option("--alpha", bnd_args.alpha, "movement budget for the point-mapping column");
  bnd->add_option("--norm", bnd_args.norm, "cost norm: l1, l2, linf");

  CheckArgs chk_args;
  CLI::App* chk = app.add_subcommand(
      "check-impossible",
      "Test whether a candidate region can be some classifier's effective region.\n"
      "Report JSON: {impossible, reason, value, threshold, witness, ...}.");
  chk->fallthrough();
  chk->add_option("--classifier", chk_args.classifier, "candidate region as classifier JSON")
      ->required();
  chk->add_option("--alpha", chk_args.alpha, "movement budget");
  chk->add_option("--norm", chk_args.norm, "cost norm: l1, l2, linf");
  chk->add_option("--box", chk_args.box, "analysis box (default: 5*alpha+1 around the origin)");
  chk->add_option("--resolution", chk_args.resolution, "raster resolution (default alpha/20)");

  AccuracyArgs acc_args;
  CLI::App* acc = app.add_subcommand(
      "accuracy",
      "Accuracy measures on a dataset JSON {points, labels}.\n"
      "Modes: strategic (fixed classifier, after gaming; needs --classifier),\n"
      "max-linear (best halfplane, no gaming), max-strategic (best ball union).");
  acc->fallthrough();
  acc->add_option("--data", acc_args.data, "dataset JSON file")->required();
  acc->add_option("--mode", acc_args.mode, "strategic | max-linear | max-strategic")->required();
  acc->add_option("--alpha", acc_args.alpha, "movement budget");
  acc->add_option("--classifier", acc_args.classifier, "classifier JSON (mode strategic)");
  acc->add_option("--norm", acc_args.norm, "cost norm: l1, l2, linf");
  acc->add_option("--resolution", acc_args.resolution, "raster resolution (default alpha/20)");

  VcArgs vc_args;
  CLI::App* vc = app.add_subcommand(
      "vc-demo",
      "Exhaustive shattering lower bounds for a bundled fixture, before and after\n"
      "gaming, over all candidate sets of up to 3 points from a recorded universe.\n"
      "Fixtures: four-balls, scaled-lattice-balls, wipeout-lattice.");
  vc->fallthrough();
  vc->add_option("--fixture", vc_args.fixture, "fixture name");
  vc->add_option("--alpha", vc_args.alpha, "movement budget");

  SweepArgs exp_args;
  CLI::App* exp = app.add_subcommand(
      "expressivity",
      "Degree-inflation sweep: sample full-degree polynomials, game them, fit the\n"
      "effective boundary's degree. Config JSON keys (all optional): alphas, ks,\n"
      "instances, box_half, cell, seed, tolerance, k_max, verify_grid.\n"
      "CSV columns: k,alpha,k_delta,instance_seed. --svg adds per-cell overlays.");
  exp->fallthrough();
  exp->add_option("--config", exp_args.config, "sweep config JSON file")->required();
  exp->add_flag("--svg", exp_args.svg, "also write one boundary overlay SVG per sweep cell");

  SweepArgs apx_args;
  CLI::App* apx = app.add_subcommand(
      "approximation",
      "Best-halfplane vs best-ball-union sweep on Gaussian class pairs. Config JSON\n"
      "keys (all optional): alphas, mus, instances, n_per_class, seed.\n"
      "CSV columns: mu,alpha,max_linear,max_strategic,seed. --svg adds scatters.");
  apx->fallthrough();
  apx->add_option("--config", apx_args.config, "sweep config JSON file")->required();
  apx->add_flag("--svg", apx_args.svg, "also write one dataset scatter SVG per sweep cell");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  ctx.seed_given = seed_opt->count() > 0;

  try {
    if (app.got_subcommand(eff)) return run_effective(ctx, eff_args);
    if (app.got_subcommand(bnd)) return run_boundary(ctx, bnd_args);
    if (app.got_subcommand(chk)) return run_check_impossible(ctx, chk_args);
    if (app.got_subcommand(acc)) return run_accuracy(ctx, acc_args);
    if (app.got_subcommand(vc)) return run_vc_demo(ctx, vc_args);
    if (app.got_subcommand(exp)) return run_expressivity_cmd(ctx, exp_args);
    if (app.got_subcommand(apx)) return run_approximation_cmd(ctx, apx_args);
  } catch (const json::exception& e) {
    std::fprintf(stderr, "strategex: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "strategex: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "strategex: %s\n", e.what());
    return 1;
  }
  return 2;  // unreachable with require_subcommand(1)
}
