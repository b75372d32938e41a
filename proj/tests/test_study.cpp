#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "polyvem/parallel.hpp"
#include "polyvem/study.hpp"
#include "polyvem/svg_plot.hpp"

using namespace polyvem;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("polyvem_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(POLYVEM_CLI) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

StudyRow row(const std::string& ds, int level, int k, double l2) {
  StudyRow r;
  r.dataset = ds;
  r.level = level;
  r.k = k;
  r.report.err_L2_rel = l2;
  r.status = "ok";
  return r;
}

StudyConfig small_config() {
  StudyConfig c;
  StudyDataset d;
  d.spec.kind = DatasetKind::Maze;
  d.levels = 2;
  c.datasets.push_back(d);
  d.spec.kind = DatasetKind::Jenga;
  d.spec.n_el = 4;
  d.levels = 1;
  c.datasets.push_back(d);
  c.orders = {1, 2};
  return c;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("least-squares slope of an exact power law") {
    std::vector<double> x = {1, 2, 4, 8}, y;
    for (double v : x) y.push_back(3 * std::pow(v, -2.5));
    SlopeFit f = fit_loglog(x, y);
    CHECK(f.slope == doctest::Approx(-2.5).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(f.points == 4);
    y.push_back(-1);
    x.push_back(16);
    CHECK(fit_loglog(x, y).points == 4);
    CHECK(std::isnan(fit_loglog({1}, {1}).slope));
  }

  TEST_CASE("blow-up flag") {
    std::vector<StudyRow> rows = {row("a", 0, 1, 1e-1), row("a", 1, 1, 1e-2), row("a", 2, 1, 2e-2),
                                  row("a", 0, 2, 1e-1), row("a", 1, 2, 1e-3), row("b", 0, 1, 1e-3),
                                  row("b", 1, 1, 1e-3)};
    rows[2].status = "inaccurate";
    flag_blowup(rows);
    CHECK(rows[0].status == "ok");
    CHECK(rows[1].status == "ok");
    CHECK(rows[2].status == "inaccurate+blowup");
    CHECK(rows[4].status == "ok");
    CHECK(rows[6].status == "ok");
    rows[1].report.err_L2_rel = 0.5;
    rows[1].status = "ok";
    flag_blowup(rows);
    CHECK(rows[1].status == "blowup");
    CHECK(rows[2].status == "inaccurate+blowup");
  }

  TEST_CASE("results CSV schema and round trip") {
    std::vector<StudyRow> rows = {row("maze", 0, 1, 0.25), row("maze", 1, 1, 0.125)};
    rows[0].report.n_dof = 44;
    rows[0].report.h = 0.3;
    rows[0].report.max_log10_cond_G = std::numeric_limits<double>::infinity();
    rows[1].failed = true;
    rows[1].status = "error: boom";
    std::string csv = results_csv(rows);
    std::istringstream in(csv);
    std::string header, l1, l2;
    std::getline(in, header);
    std::getline(in, l1);
    std::getline(in, l2);
    CHECK(header ==
          "dataset,level,k,n_dof,h,err_L2_rel,err_H1_rel,max_log10_cond_G,max_log10_cond_H,max_log10_pinabla_id,"
          "max_log10_pi0_id,rho,A_ratio,e_ratio,status");
    CHECK(l1 == "maze,0,1,44,0.3,0.25,0,FAIL,0,0,0,0,0,0,ok");
    CHECK(l2 == "maze,1,1,FAIL,FAIL,FAIL,FAIL,FAIL,FAIL,FAIL,FAIL,0,0,0,error: boom");

    auto back = parse_results_csv(csv);
    REQUIRE(back.size() == 2);
    CHECK(back[0].report.n_dof == 44);
    CHECK(back[0].report.err_L2_rel == 0.25);
    CHECK(std::isnan(back[0].report.max_log10_cond_G));
    CHECK(back[1].failed);
    CHECK(results_csv(parse_results_csv(csv)) == csv);
    CHECK_THROWS_AS(parse_results_csv("a,b\n"), std::invalid_argument);
  }

  TEST_CASE("study config parsing") {
    StudyConfig c = parse_study_config(
        R"({"datasets": [{"kind": "jenga", "nel": 4, "levels": 3}, {"kind": "star", "seed": 7}],
            "orders": [2], "stab": "dd", "basis": "monomial"})");
    REQUIRE(c.datasets.size() == 2);
    CHECK(dataset_name(c.datasets[0].spec) == "jenga4");
    CHECK(c.datasets[0].levels == 3);
    CHECK(c.datasets[1].spec.seed == 7);
    CHECK(c.orders == std::vector<int>{2});
    CHECK(c.element.stab == StabKind::DofiDofi);
    CHECK(c.element.basis == BasisKind::Monomial);
    StudyConfig again = parse_study_config(study_config_json(c));
    CHECK(study_config_json(again) == study_config_json(c));

    CHECK_THROWS_AS(parse_study_config("{}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_study_config(R"({"datasets": []})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_study_config(R"({"datasets": [{"kind": "maze"}], "orders": [4]})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_study_config(R"({"datasets": [{"kind": "hex"}]})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_study_config("not json"), std::invalid_argument);
  }

  TEST_CASE("study rows are ordered and deterministic") {
    StudyConfig c = small_config();
    auto rows = run_study(c);
    REQUIRE(rows.size() == 3 * 2 + 2 * 2);
    CHECK(rows[0].dataset == "maze");
    CHECK(rows[5].level == 2);
    CHECK(rows[5].k == 2);
    CHECK(rows[6].dataset == "jenga4");
    for (const auto& r : rows) {
      CHECK_FALSE(r.failed);
      CHECK(r.report.n_dof > 0);
      CHECK(r.rho > 0);
    }
    const std::size_t saved = worker_count();
    worker_count() = 1;
    std::string serial = results_csv(run_study(c));
    worker_count() = 3;
    std::string threaded = results_csv(run_study(c));
    worker_count() = saved;
    CHECK(serial == threaded);
    CHECK(serial == results_csv(rows));
  }

  TEST_CASE("polynomial problem study reproduces the solution") {
    StudyConfig c = small_config();
    c.problem = "poly";
    c.orders = {1, 2, 3};
    for (const auto& r : run_study(c)) CHECK(r.report.err_H1_rel < 1e-8);
  }

  TEST_CASE("triangle study converges at the expected rates") {
    StudyConfig c;
    StudyDataset d;
    d.levels = 3;
    c.datasets.push_back(d);
    auto rows = run_study(c);
    for (int k = 1; k <= 3; ++k) {
      ConvergenceSlopes s = convergence_slopes(rows, "triangle", k);
      CAPTURE(k);
      CHECK(s.l2_vs_h.points == 4);
      CHECK(s.l2_vs_h.slope == doctest::Approx(k + 1).epsilon(0.25 / (k + 1)));
      CHECK(s.h1_vs_h.slope == doctest::Approx(k).epsilon(0.25 / k));
    }
  }

  TEST_CASE("quality-only study matches the dataset report") {
    StudyConfig c;
    StudyDataset d;
    d.spec.kind = DatasetKind::Slices;
    d.levels = 3;
    c.datasets.push_back(d);
    c.quality_only = true;
    fs::path dir = scratch_dir("quality");
    StudyFiles f = run_study_to_dir(c, dir);
    std::vector<PolygonalMesh> ms;
    for (int n = 0; n <= 3; ++n) ms.push_back(generate_level(d.spec, n).mesh);
    CHECK(slurp(dir / "quality_slices.csv") == quality_csv(dataset_quality(ms)));
    CHECK(fs::exists(dir / "quality.svg"));
    CHECK(f.rows.empty());
  }

  TEST_CASE("dataset files and manifest") {
    DatasetSpec s;
    s.kind = DatasetKind::Jenga;
    fs::path dir = scratch_dir("generate");
    auto files = write_dataset(s, 5, dir);
    CHECK(files.size() == 7);
    auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["spec"]["kind"] == "jenga");
    REQUIRE(manifest["levels"].size() == 6);
    for (int n = 0; n <= 5; ++n) {
      const auto& l = manifest["levels"][static_cast<std::size_t>(n)];
      std::istringstream in(slurp(dir / l["file"].get<std::string>()));
      PolygonalMesh m = read_off(in);
      MeshStats st = mesh_stats(m);
      CHECK(l["A_ratio"].get<double>() == st.A_ratio);
      CHECK(l["e_ratio"].get<double>() == st.e_ratio);
      CHECK(l["h"].get<double>() == st.h);
      CHECK(m.num_elements() == generate_level(s, n).mesh.num_elements());
    }
    CHECK_THROWS_AS(write_dataset(s, 1, "/proc/polyvem_cannot_write"), IoError);
  }

  TEST_CASE("SVG output") {
    PlotSpec p;
    p.title = "a < b";
    p.series.push_back({"k=1", {10, 100, 1000}, {1e-1, 1e-2, 1e-3}});
    p.series.push_back({"bad", {0, -1}, {1, 1}});
    p.slopes.push_back({-1, "1", 0});
    std::string svg = render_svg(p);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("a &lt; b") != std::string::npos);
    CHECK(svg.find("<polygon") != std::string::npos);
    std::size_t lines = 0;
    for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) ++lines;
    CHECK(lines == 1);
    CHECK(svg == render_svg(p));
  }

  TEST_CASE("command-line exit codes and outputs") {
    fs::path dir = scratch_dir("cli");
    const std::string d = dir.string();
    CHECK(run_cli("generate --kind jenga --levels 5 --out " + d + "/j") == 0);
    int offs = 0;
    for (const auto& e : fs::directory_iterator(dir / "j")) offs += e.path().extension() == ".off";
    CHECK(offs == 6);
    CHECK(run_cli("generate --kind star --levels 3 --seed 7 --out " + d + "/s1") == 0);
    CHECK(run_cli("generate --kind star --levels 3 --seed 7 --out " + d + "/s2") == 0);
    for (int n = 0; n <= 3; ++n) {
      std::string f = "star_" + std::to_string(n) + ".off";
      CHECK(slurp(dir / "s1" / f) == slurp(dir / "s2" / f));
    }
    CHECK(run_cli("generate --kind ulike --nel 4 --levels 2 --out " + d + "/u") == 0);
    CHECK(fs::exists(dir / "u" / "ulike4_2.off"));

    CHECK(run_cli("quality " + d + "/j/jenga_0.off") == 0);
    CHECK(run_cli("quality " + d + "/j/manifest.json --out " + d + "/q.csv") == 0);
    CHECK(slurp(dir / "q.csv").rfind("level,n_vertices,rho,A_ratio,e_ratio\n", 0) == 0);
    CHECK(run_cli("solve --kind triangle --level 1 --k 2") == 0);
    CHECK(run_cli("solve " + d + "/j/jenga_2.off --k 3 --stab trace --basis monomial") == 0);
    CHECK(run_cli("study --kind maze --levels 1 --k 1 --out " + d + "/st") == 0);
    CHECK(fs::exists(dir / "st" / "results.csv"));
    CHECK(run_cli("plot " + d + "/st/results.csv --out " + d + "/pl") == 0);
    CHECK(fs::exists(dir / "pl" / "maze_L2.svg"));

    CHECK(run_cli("") == 1);
    CHECK(run_cli("generate") == 1);
    CHECK(run_cli("generate --kind hexagon") == 1);
    CHECK(run_cli("solve --kind maze --k 7") == 1);
    CHECK(run_cli("study") == 1);
    CHECK(run_cli("quality " + d + "/missing.off") == 2);
    std::ofstream(dir / "broken.off") << "OFF\n3 1 0\n0 0 0\n";
    CHECK(run_cli("quality " + d + "/broken.off") == 2);
    CHECK(run_cli("plot " + d + "/broken.off") == 2);
    CHECK(run_cli("generate --kind maze --levels 0 --out /proc/polyvem_nope") == 2);
    CHECK(run_cli("--help") == 0);
  }
}
