// End-to-end checks of the command-line tool: subcommand outputs, exit
// codes, format switches, thread-count determinism, and the no-partial-file
// guarantee. The binary under test comes in via CLI_PATH.
#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "strategex/response.hpp"
#include "strategex/serialize.hpp"

using namespace strategex;
using Catch::Matchers::ContainsSubstring;
namespace fs = std::filesystem;

namespace {

struct Workdir {
  fs::path dir;
  Workdir() {
    dir = fs::temp_directory_path() / ("strategex_cli_" + std::to_string(::rand()));
    fs::create_directories(dir);
  }
  ~Workdir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run_cli(const std::string& args) {
  std::string cmd = std::string(CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status < 0) return -1;
  return WEXITSTATUS(status);
}

void put(const std::string& path, const std::string& content) { write_atomic(path, content); }

const char* kLinearJson =
    R"({"schema":"strategex/v1","type":"classifier","dimension":2,"variant":"linear","w":[1.0,0.0],"b":0.0})";
const char* kSmallDiskJson =
    R"({"schema":"strategex/v1","type":"classifier","dimension":2,"variant":"ball_union","centers":[[0.0,0.0]],"radii":[0.9],"polarity":"positive_inside"})";

}  // namespace

TEST_CASE("effective subcommand writes the gamed grid in all three formats") {
  Workdir w;
  put(w.path("h.json"), kLinearJson);

  SECTION("csv grid matches the library computation") {
    REQUIRE(run_cli("effective --classifier " + w.path("h.json") +
                    " --box \"-2,-2,2,2\" --cell 0.1 --alpha 1.0 --out " + w.path("g.csv")) == 0);
    LabelGrid from_cli = grid_from_csv(read_file(w.path("g.csv")));
    LabelGrid direct = effective_grid(classifier_from_json(json::parse(kLinearJson)),
                                      Box::of(Vec(-2.0, -2.0), Vec(2.0, 2.0)), 0.1,
                                      CostModel(Norm::L2, 1.0));
    REQUIRE(from_cli.labels == direct.labels);
  }

  SECTION("json document round-trips through the grid schema") {
    REQUIRE(run_cli("effective --classifier " + w.path("h.json") +
                    " --box \"-2,-2,2,2\" --cell 0.1 --alpha 1.0 --format json --out " +
                    w.path("g.json")) == 0);
    LabelGrid g = grid_from_json(json::parse(read_file(w.path("g.json"))));
    CHECK(g.geom.shape[0] == 40);
    CHECK(g.geom.shape[1] == 40);
    CHECK(g.has_both_labels());
  }

  SECTION("svg overlay carries both boundary layers") {
    REQUIRE(run_cli("effective --classifier " + w.path("h.json") +
                    " --box \"-2,-2,2,2\" --cell 0.1 --alpha 1.0 --format svg --out " +
                    w.path("g.svg")) == 0);
    std::string svg = read_file(w.path("g.svg"));
    CHECK_THAT(svg, ContainsSubstring("data-name=\"source_boundary\""));
    CHECK_THAT(svg, ContainsSubstring("data-name=\"effective_boundary\""));
  }

  SECTION("validation failures exit 2 and leave nothing behind") {
    CHECK(run_cli("effective --classifier " + w.path("h.json") +
                  " --box \"-2,-2,2,2\" --alpha -1 --out " + w.path("x.csv")) == 2);
    CHECK(run_cli("effective --classifier " + w.path("missing.json") +
                  " --box \"-2,-2,2,2\" --out " + w.path("x.csv")) == 2);
    CHECK(run_cli("effective --classifier " + w.path("h.json") + " --box \"bogus\" --out " +
                  w.path("x.csv")) == 2);
    CHECK_FALSE(fs::exists(w.path("x.csv")));
  }
}

TEST_CASE("boundary subcommand emits the pinned column set") {
  Workdir w;
  put(w.path("h.json"), kLinearJson);
  REQUIRE(run_cli("effective --classifier " + w.path("h.json") +
                  " --box \"-2,-2,2,2\" --cell 0.1 --alpha 1.0 --out " + w.path("g.csv")) == 0);
  REQUIRE(run_cli("boundary --grid " + w.path("g.csv") + " --curvature --out " + w.path("b.csv")) ==
          0);
  std::string csv = read_file(w.path("b.csv"));
  REQUIRE(csv.rfind("x,y,nx,ny,kappa,case\n", 0) == 0);

  // The gamed halfplane's boundary hugs x = -1 and is straight.
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    auto f = detail::split_csv_line(line);
    REQUIRE(f.size() == 6);
    CHECK(std::abs(detail::parse_double(f[0]) + 1.0) < 0.1);  // x near -1
    CHECK(detail::parse_double(f[4]) == 0.0);                 // straight
    CHECK(f[5] == "-");                                       // mapping not requested
  }
  CHECK(rows > 20);

  SECTION("the point-mapping column fills in with --source") {
    // The mapping analysis reads rows as source-boundary points, so hand it
    // the classifier's own raster rather than the gamed grid.
    LabelGrid src = rasterize(classifier_from_json(json::parse(kLinearJson)),
                              GridGeom::covering(Box::of(Vec(-2.0, -2.0), Vec(2.0, 2.0)), 0.1));
    put(w.path("src.csv"), grid_to_csv(src));
    REQUIRE(run_cli("boundary --grid " + w.path("src.csv") + " --source " + w.path("h.json") +
                    " --alpha 1.0 --out " + w.path("bm.csv")) == 0);
    std::string mapped = read_file(w.path("bm.csv"));
    CHECK_THAT(mapped, ContainsSubstring("one_to_one"));
  }
}

TEST_CASE("check-impossible reports a verdict with reason keys") {
  Workdir w;
  put(w.path("disk.json"), kSmallDiskJson);
  put(w.path("h.json"), kLinearJson);

  REQUIRE(run_cli("check-impossible --classifier " + w.path("disk.json") +
                  " --alpha 1.0 --norm l2 --out " + w.path("r.json")) == 0);
  json r = json::parse(read_file(w.path("r.json")));
  CHECK(r["schema"] == kSchemaTag);
  CHECK(r["impossible"] == true);
  CHECK(r["reason"] == "small_positive_region");
  CHECK(r["witness"].is_array());

  REQUIRE(run_cli("check-impossible --classifier " + w.path("h.json") + " --alpha 1.0 --out " +
                  w.path("r2.json")) == 0);
  json r2 = json::parse(read_file(w.path("r2.json")));
  CHECK(r2["impossible"] == false);
  CHECK(r2["reason"] == "none");
}

TEST_CASE("accuracy subcommand wires all three modes") {
  Workdir w;
  Dataset d;
  d.dim = 2;
  d.push(Vec(0.0, 0.0), 0);
  d.push(Vec(1.0, 0.0), 1);
  d.push(Vec(2.0, 0.0), 0);
  d.push(Vec(3.0, 0.0), 1);
  put(w.path("data.json"), dataset_to_json(d).dump());
  put(w.path("h.json"), kLinearJson);

  REQUIRE(run_cli("accuracy --data " + w.path("data.json") + " --mode max-linear --out " +
                  w.path("a1.json")) == 0);
  json a1 = json::parse(read_file(w.path("a1.json")));
  CHECK(a1["total"] == 4);
  CHECK(a1["correct"] == max_linear_accuracy(d).correct);

  REQUIRE(run_cli("accuracy --data " + w.path("data.json") +
                  " --mode max-strategic --alpha 1.0 --out " + w.path("a2.json")) == 0);
  json a2 = json::parse(read_file(w.path("a2.json")));
  CHECK(a2["correct"] == max_strategic_accuracy(d, CostModel(Norm::L2, 1.0)).correct);

  REQUIRE(run_cli("accuracy --data " + w.path("data.json") +
                  " --mode strategic --classifier " + w.path("h.json") + " --alpha 1.0 --out " +
                  w.path("a3.json")) == 0);
  json a3 = json::parse(read_file(w.path("a3.json")));
  CHECK(a3["mode"] == "strategic");
  CHECK(a3["correct"].get<long long>() >= 0);

  SECTION("mode strategic without a classifier is a usage error") {
    CHECK(run_cli("accuracy --data " + w.path("data.json") + " --mode strategic --alpha 1 --out " +
                  w.path("a4.json")) == 2);
    CHECK_FALSE(fs::exists(w.path("a4.json")));
  }
}

TEST_CASE("vc-demo records the universe beside both bounds") {
  Workdir w;
  REQUIRE(run_cli("vc-demo --fixture four-balls --alpha 0.75 --out " + w.path("vc.json")) == 0);
  json r = json::parse(read_file(w.path("vc.json")));
  CHECK(r["schema"] == kSchemaTag);
  CHECK(r["standard"]["lower_bound"] == 1);
  CHECK(r["effective"]["lower_bound"] == 2);
  CHECK(r["candidate_universe"].size() == 25);
  CHECK(r["classifier_count"] == 4);
  CHECK(r["effective"]["witness"].size() == 2);

  REQUIRE(run_cli("vc-demo --fixture wipeout-lattice --alpha 0.9 --out " + w.path("vcw.json")) == 0);
  json rw = json::parse(read_file(w.path("vcw.json")));
  CHECK(rw["standard"]["lower_bound"] == 3);  // capped by 3-point candidate sets
  CHECK(rw["effective"]["lower_bound"] == 0);

  CHECK(run_cli("vc-demo --fixture negative-polytopes --out " + w.path("vcp.json")) == 2);
  CHECK(run_cli("vc-demo --fixture no-such-fixture --out " + w.path("vcn.json")) == 2);
}

TEST_CASE("experiment sweeps run from config files with deterministic bodies") {
  Workdir w;
  put(w.path("exp.json"),
      R"({"schema":"strategex/v1","alphas":[2.0],"ks":[1,2],"instances":2})");
  put(w.path("apx.json"),
      R"({"schema":"strategex/v1","alphas":[1.0],"mus":[5.0],"instances":2,"n_per_class":10})");

  SECTION("expressivity rows and svg companions") {
    REQUIRE(run_cli("expressivity --config " + w.path("exp.json") + " --svg --out " +
                    w.path("rows.csv")) == 0);
    std::string csv = read_file(w.path("rows.csv"));
    REQUIRE(csv.rfind("k,alpha,k_delta,instance_seed\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 rows
    CHECK(fs::exists(w.path("rows_k1_alpha2.svg")));
    CHECK(fs::exists(w.path("rows_k2_alpha2.svg")));
    std::string svg = read_file(w.path("rows_k1_alpha2.svg"));
    CHECK_THAT(svg, ContainsSubstring("data-name=\"effective_boundary\""));
  }

  SECTION("thread counts do not change the bytes") {
    REQUIRE(run_cli("expressivity --config " + w.path("exp.json") + " --threads 1 --out " +
                    w.path("t1.csv")) == 0);
    REQUIRE(run_cli("expressivity --config " + w.path("exp.json") + " --threads 4 --out " +
                    w.path("t4.csv")) == 0);
    CHECK(read_file(w.path("t1.csv")) == read_file(w.path("t4.csv")));

    REQUIRE(run_cli("approximation --config " + w.path("apx.json") + " --threads 1 --out " +
                    w.path("b1.csv")) == 0);
    REQUIRE(run_cli("approximation --config " + w.path("apx.json") + " --threads 3 --out " +
                    w.path("b3.csv")) == 0);
    CHECK(read_file(w.path("b1.csv")) == read_file(w.path("b3.csv")));
  }

  SECTION("approximation emits the pinned header") {
    REQUIRE(run_cli("approximation --config " + w.path("apx.json") + " --out " + w.path("a.csv")) ==
            0);
    std::string csv = read_file(w.path("a.csv"));
    CHECK(csv.rfind("mu,alpha,max_linear,max_strategic,seed\n", 0) == 0);
  }

  SECTION("--seed overrides the config seed") {
    REQUIRE(run_cli("expressivity --config " + w.path("exp.json") + " --seed 7 --out " +
                    w.path("s7.csv")) == 0);
    REQUIRE(run_cli("expressivity --config " + w.path("exp.json") + " --out " + w.path("s0.csv")) ==
            0);
    CHECK(read_file(w.path("s7.csv")) != read_file(w.path("s0.csv")));
  }

  SECTION("config strictness") {
    put(w.path("bad.json"), R"({"schema":"strategex/v1","alphas":[2.0],"surprise":1})");
    CHECK(run_cli("expressivity --config " + w.path("bad.json") + " --out " + w.path("no.csv")) ==
          2);
    put(w.path("untagged.json"), R"({"alphas":[2.0]})");
    CHECK(run_cli("expressivity --config " + w.path("untagged.json") + " --out " +
                  w.path("no.csv")) == 2);
    put(w.path("garbage.json"), "not json");
    CHECK(run_cli("approximation --config " + w.path("garbage.json") + " --out " +
                  w.path("no.csv")) == 2);
    CHECK_FALSE(fs::exists(w.path("no.csv")));
  }
}

TEST_CASE("top-level usage errors exit 2, help exits 0") {
  Workdir w;
  CHECK(run_cli("") == 2);
  CHECK(run_cli("no-such-subcommand") == 2);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("effective --help") == 0);
  CHECK(run_cli("effective") == 2);  // missing required options
  CHECK(run_cli("effective --classifier x.json --box \"0,0,1,1\" --format yaml --out " +
                w.path("x.csv")) == 2);
}
