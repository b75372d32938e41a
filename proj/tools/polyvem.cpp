// polyvem command-line driver: dataset generation, quality scoring, single
// solves, convergence studies and plots.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyvem/datasets.hpp"
#include "polyvem/parallel.hpp"
#include "polyvem/quality.hpp"
#include "polyvem/study.hpp"
#include "polyvem/vem_global.hpp"

namespace fs = std::filesystem;
using namespace polyvem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIo = 2, kNumerical = 3 };

struct DatasetFlags {
  std::string kind;
  int nel = 1;
  int levels = 4;
  std::uint64_t seed = 0;
  int N = 10;
  double d0 = 0.03;

  void add(CLI::App* app, bool with_levels = true) {
    app->add_option("--kind", kind, "triangle, maze, star, jenga, slices or ulike")
        ->check(CLI::IsMember({"triangle", "maze", "star", "jenga", "slices", "ulike"}));
    app->add_option("--nel", nel, "elements inserted per step (4 for the x4 variants)")->check(CLI::IsMember({1, 4}));
    if (with_levels) app->add_option("--levels", levels, "generate meshes 0..levels")->check(CLI::NonNegativeNumber);
    app->add_option("--seed", seed, "random seed");
    app->add_option("--N", N, "steps spanned by the deformation schedule")->check(CLI::PositiveNumber);
    app->add_option("--d0", d0, "initial polygon area of the hybrid datasets");
  }

  DatasetSpec spec() const {
    DatasetSpec s;
    s.kind = parse_kind(kind);
    s.n_el = nel;
    s.seed = seed;
    s.N = N;
    s.d0 = d0;
    check_spec(s);
    return s;
  }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

PolygonalMesh load_off(const fs::path& p) {
  std::istringstream in(read_file(p));
  return read_off(in);
}

void print_report(const QualityReport& q) {
  std::printf("rho        %.6f\n", q.rho);
  std::printf("mean rho1  %.6f\nmean rho2  %.6f\nmean rho3  %.6f\nmean rho4  %.6f\n", q.mean_rho1, q.mean_rho2,
              q.mean_rho3, q.mean_rho4);
  std::printf("vertices   %zu\nelements   %zu\nh          %.6g\nA_ratio    %.6g\ne_ratio    %.6g\n",
              q.stats.n_vertices, q.stats.n_elements, q.stats.h, q.stats.A_ratio, q.stats.e_ratio);
}

int cmd_generate(const DatasetFlags& df, const std::string& out) {
  DatasetSpec s = df.spec();
  fs::path dir = out.empty() ? fs::path("data") / dataset_name(s) : fs::path(out);
  auto files = write_dataset(s, df.levels, dir);
  for (const auto& f : files) std::cout << f.string() << "\n";
  return kOk;
}

int cmd_quality(const DatasetFlags& df, const std::string& input, const std::string& out) {
  if (!input.empty() && fs::path(input).extension() == ".json") {
    nlohmann::json manifest;
    try {
      manifest = nlohmann::json::parse(read_file(input));
    } catch (const nlohmann::json::exception& e) {
      throw IoError(std::string("manifest: ") + e.what());
    }
    std::vector<PolygonalMesh> meshes;
    for (const auto& l : manifest.at("levels"))
      meshes.push_back(load_off(fs::path(input).parent_path() / l.at("file").get<std::string>()));
    std::string csv = quality_csv(dataset_quality(meshes));
    std::cout << csv;
    if (!out.empty()) {
      std::ofstream f(out, std::ios::binary);
      if (!(f << csv)) throw IoError("cannot write " + out);
    }
    return kOk;
  }
  if (!input.empty()) {
    QualityReport q = mesh_quality(load_off(input));
    print_report(q);
    if (!out.empty()) {
      std::ofstream f(out, std::ios::binary);
      if (!(f << element_quality_csv(q))) throw IoError("cannot write " + out);
    }
    return kOk;
  }
  if (df.kind.empty()) throw CLI::ValidationError("quality", "give a mesh file, a manifest or --kind");
  DatasetSpec s = df.spec();
  std::vector<PolygonalMesh> meshes;
  for (int n = 0; n <= df.levels; ++n) meshes.push_back(generate_level(s, n).mesh);
  std::string csv = quality_csv(dataset_quality(meshes));
  std::cout << csv;
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    if (!(f << csv)) throw IoError("cannot write " + out);
  }
  return kOk;
}

int cmd_solve(const DatasetFlags& df, const std::string& input, int level, int k, const std::string& stab,
              const std::string& basis, const std::string& problem) {
  PolygonalMesh mesh;
  if (!input.empty()) {
    mesh = load_off(input);
  } else if (!df.kind.empty()) {
    mesh = generate_level(df.spec(), level).mesh;
  } else {
    throw CLI::ValidationError("solve", "give a mesh file or --kind");
  }
  ElementOptions opt;
  opt.stab = parse_stab(stab);
  opt.basis = parse_basis(basis);
  SolveReport r;
  try {
    r = solve_problem(mesh, k, opt, problem == "poly" ? polynomial_problem(k) : sine_problem());
  } catch (const std::exception& e) {
    std::cerr << "polyvem: solve failed: " << e.what() << "\n";
    return kNumerical;
  }
  nlohmann::json j{{"k", k},
                   {"n_dof", r.n_dof},
                   {"h", r.h},
                   {"err_L2_rel", r.err_L2_rel},
                   {"err_H1_rel", r.err_H1_rel},
                   {"max_log10_cond_G", r.max_log10_cond_G},
                   {"max_log10_cond_H", r.max_log10_cond_H},
                   {"max_log10_pinabla_id", r.max_log10_pinabla_id},
                   {"max_log10_pi0_id", r.max_log10_pi0_id},
                   {"relative_residual", r.relative_residual},
                   {"solver", r.solver},
                   {"status", r.status}};
  std::cout << j.dump(2) << "\n";
  return r.status == "ok" ? kOk : kNumerical;
}

int cmd_study(const std::string& config_path, const DatasetFlags& df, CLI::App* sub, const std::vector<int>& orders,
              const std::string& stab, const std::string& basis, const std::string& problem, bool quality_only,
              bool no_plots, const std::string& out) {
  StudyConfig c;
  if (!config_path.empty()) c = parse_study_config(read_file(config_path));
  // flags override the file
  if (!df.kind.empty()) {
    StudyDataset d;
    d.spec = df.spec();
    d.levels = df.levels;
    c.datasets = {d};
  } else {
    for (auto& d : c.datasets) {
      if (sub->count("--levels")) d.levels = df.levels;
      if (sub->count("--seed")) d.spec.seed = df.seed;
      if (sub->count("--nel")) d.spec.n_el = df.nel;
    }
  }
  if (!orders.empty()) c.orders = orders;
  if (sub->count("--stab")) c.element.stab = parse_stab(stab);
  if (sub->count("--basis")) c.element.basis = parse_basis(basis);
  if (sub->count("--problem")) c.problem = problem;
  if (quality_only) c.quality_only = true;
  if (no_plots) c.plots = false;
  check_config(c);
  StudyFiles files = run_study_to_dir(c, out, [](const std::string& msg) { std::cerr << msg << "\n"; });
  for (const auto& f : files.written) std::cout << f.string() << "\n";
  return kOk;
}

int cmd_plot(const std::string& input, const std::string& out) {
  std::vector<StudyRow> rows;
  try {
    rows = parse_results_csv(read_file(input));
  } catch (const std::invalid_argument& e) {
    throw IoError(e.what());
  }
  fs::path dir = out.empty() ? fs::path(input).parent_path() : fs::path(out);
  if (dir.empty()) dir = ".";
  for (const auto& f : write_error_plots(rows, dir)) std::cout << f.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual element lab on polygonal mesh datasets"};
  app.require_subcommand(1);
  std::size_t workers = 0;
  app.add_option("--workers", workers, "worker threads (0: all cores)");

  DatasetFlags gen_flags, qual_flags, solve_flags, study_flags;
  std::string out, input, config, stab = "drecipe", basis = "ortho", problem = "sine";
  int k = 1, level = 0;
  std::vector<int> orders;
  bool quality_only = false, no_plots = false;

  auto* gen = app.add_subcommand("generate", "write a dataset as OFF files plus manifest.json");
  gen_flags.add(gen);
  gen->get_option("--kind")->required();
  gen->add_option("--out", out, "output directory (default data/<name>)");

  auto* qual = app.add_subcommand("quality", "score a mesh, a manifest or a generated dataset");
  qual_flags.add(qual);
  qual->add_option("input", input, "OFF mesh or manifest.json");
  qual->add_option("--out", out, "also write the CSV here");

  auto* solve = app.add_subcommand("solve", "solve the model problem on one mesh");
  solve_flags.add(solve, false);
  solve->add_option("input", input, "OFF mesh");
  solve->add_option("--level", level, "dataset level when using --kind")->check(CLI::NonNegativeNumber);
  solve->add_option("--k", k, "polynomial order")->check(CLI::Range(1, 3));
  solve->add_option("--stab", stab, "stabilization")->check(CLI::IsMember({"dd", "drecipe", "trace"}));
  solve->add_option("--basis", basis, "polynomial basis")->check(CLI::IsMember({"monomial", "ortho"}));
  solve->add_option("--problem", problem, "sine or poly")->check(CLI::IsMember({"sine", "poly"}));

  auto* study = app.add_subcommand("study", "convergence study over datasets, levels and orders");
  study->add_option("--config", config, "JSON study config");
  study_flags.add(study);
  study->add_option("--k", orders, "orders to run (repeatable)")->check(CLI::Range(1, 3));
  study->add_option("--stab", stab, "stabilization")->check(CLI::IsMember({"dd", "drecipe", "trace"}));
  study->add_option("--basis", basis, "polynomial basis")->check(CLI::IsMember({"monomial", "ortho"}));
  study->add_option("--problem", problem, "sine or poly")->check(CLI::IsMember({"sine", "poly"}));
  study->add_flag("--quality-only", quality_only, "only score the meshes");
  study->add_flag("--no-plots", no_plots, "skip SVG output");
  study->add_option("--out", out, "output directory")->default_val("study");

  auto* plot = app.add_subcommand("plot", "SVG error plots from a results.csv");
  plot->add_option("input", input, "results.csv")->required();
  plot->add_option("--out", out, "output directory (default: next to the input)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }
  worker_count() = workers;

  try {
    if (*gen) return cmd_generate(gen_flags, out);
    if (*qual) return cmd_quality(qual_flags, input, out);
    if (*solve) return cmd_solve(solve_flags, input, level, k, stab, basis, problem);
    if (*study) {
      if (config.empty() && study_flags.kind.empty()) throw CLI::ValidationError("study", "give --config or --kind");
      return cmd_study(config, study_flags, study, orders, stab, basis, problem, quality_only, no_plots, out);
    }
    if (*plot) return cmd_plot(input, out);
  } catch (const CLI::Error& e) {
    std::cerr << "polyvem: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "polyvem: " << e.what() << "\n";
    return kIo;
  } catch (const MeshParseError& e) {
    std::cerr << "polyvem: " << e.what() << "\n";
    return kIo;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "polyvem: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "polyvem: " << e.what() << "\n";
    return kUsage;
  } catch (const DatasetError& e) {
    std::cerr << "polyvem: level " << e.level() << ": " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "polyvem: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}
