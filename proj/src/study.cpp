#include "polyvem/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "polyvem/parallel.hpp"
#include "polyvem/svg_plot.hpp"

namespace polyvem {

namespace {

using nlohmann::json;

const char* const kHeader =
    "dataset,level,k,n_dof,h,err_L2_rel,err_H1_rel,max_log10_cond_G,max_log10_cond_H,max_log10_pinabla_id,"
    "max_log10_pi0_id,rho,A_ratio,e_ratio,status";

std::string fmt(double v) {
  if (!std::isfinite(v)) return "FAIL";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double parse_number(const std::string& s) {
  if (s == "FAIL") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

void make_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

json spec_json(const DatasetSpec& s) {
  return json{{"kind", to_string(s.kind)}, {"nel", s.n_el},       {"N", s.N},         {"d0", s.d0},
              {"t_min", s.t_min},          {"t_max", s.t_max},    {"seed", s.seed}};
}

struct LevelData {
  std::optional<PolygonalMesh> mesh;
  std::string error;
  double rho = 0, A_ratio = 0, e_ratio = 0;
};

std::vector<std::vector<LevelData>> generate_levels(const StudyConfig& config, const StudyProgress& progress) {
  std::vector<std::pair<std::size_t, int>> jobs;
  std::vector<std::vector<LevelData>> data(config.datasets.size());
  for (std::size_t d = 0; d < config.datasets.size(); ++d) {
    data[d].resize(static_cast<std::size_t>(config.datasets[d].levels) + 1);
    for (int n = 0; n <= config.datasets[d].levels; ++n) jobs.emplace_back(d, n);
  }
  parallel_for(jobs.size(), [&](std::size_t j) {
    auto [d, n] = jobs[j];
    LevelData& out = data[d][static_cast<std::size_t>(n)];
    try {
      out.mesh = generate_level(config.datasets[d].spec, n).mesh;
      MeshStats st = mesh_stats(*out.mesh);
      out.rho = mesh_quality(*out.mesh).rho;
      out.A_ratio = st.A_ratio;
      out.e_ratio = st.e_ratio;
    } catch (const std::exception& e) {
      out.mesh.reset();
      out.error = e.what();
    }
    if (progress) progress("generated " + dataset_name(config.datasets[d].spec) + " level " + std::to_string(n));
  });
  return data;
}

PlotSpec quality_plot(const std::vector<std::pair<std::string, std::vector<DatasetQualityRow>>>& sets) {
  PlotSpec p;
  p.title = "mesh quality";
  p.x_label = "level";
  p.y_label = "rho";
  p.log_x = p.log_y = false;
  for (const auto& [name, rows] : sets) {
    PlotSeries s;
    s.label = name;
    for (const auto& r : rows) {
      s.x.push_back(r.level);
      s.y.push_back(r.rho);
    }
    p.series.push_back(std::move(s));
  }
  return p;
}

}  // namespace

void check_config(const StudyConfig& config) {
  if (config.datasets.empty()) throw std::invalid_argument("study needs at least one dataset");
  if (!config.quality_only && config.orders.empty()) throw std::invalid_argument("study needs at least one order");
  for (int k : config.orders)
    if (k < 1 || k > 3) throw std::invalid_argument("orders must lie in {1, 2, 3}");
  if (config.problem != "sine" && config.problem != "poly")
    throw std::invalid_argument("unknown problem '" + config.problem + "'");
  for (const auto& d : config.datasets) {
    check_spec(d.spec);
    if (d.levels < 0) throw std::invalid_argument("levels must be non-negative");
  }
}

StudyConfig parse_study_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("study config: ") + e.what());
  }
  StudyConfig c;
  try {
    for (const auto& d : j.at("datasets")) {
      StudyDataset sd;
      sd.spec.kind = parse_kind(d.at("kind").get<std::string>());
      sd.spec.n_el = d.value("nel", sd.spec.n_el);
      sd.spec.N = d.value("N", sd.spec.N);
      sd.spec.d0 = d.value("d0", sd.spec.d0);
      sd.spec.t_min = d.value("t_min", sd.spec.t_min);
      sd.spec.t_max = d.value("t_max", sd.spec.t_max);
      sd.spec.seed = d.value("seed", sd.spec.seed);
      sd.levels = d.value("levels", sd.levels);
      c.datasets.push_back(sd);
    }
    if (j.contains("orders")) c.orders = j.at("orders").get<std::vector<int>>();
    if (j.contains("stab")) c.element.stab = parse_stab(j.at("stab").get<std::string>());
    if (j.contains("basis")) c.element.basis = parse_basis(j.at("basis").get<std::string>());
    c.problem = j.value("problem", c.problem);
    c.quality_only = j.value("quality_only", c.quality_only);
    c.plots = j.value("plots", c.plots);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("study config: ") + e.what());
  }
  check_config(c);
  return c;
}

std::string study_config_json(const StudyConfig& config) {
  json j;
  j["datasets"] = json::array();
  for (const auto& d : config.datasets) {
    json s = spec_json(d.spec);
    s["levels"] = d.levels;
    j["datasets"].push_back(s);
  }
  j["orders"] = config.orders;
  j["stab"] = to_string(config.element.stab);
  j["basis"] = to_string(config.element.basis);
  j["problem"] = config.problem;
  j["quality_only"] = config.quality_only;
  j["plots"] = config.plots;
  return j.dump(2) + "\n";
}

std::vector<StudyRow> run_study(const StudyConfig& config, const StudyProgress& progress) {
  check_config(config);
  auto levels = generate_levels(config, progress);

  std::vector<StudyRow> rows;
  for (std::size_t d = 0; d < config.datasets.size(); ++d) {
    for (int n = 0; n <= config.datasets[d].levels; ++n) {
      for (int k : config.orders) {
        StudyRow r;
        r.dataset = dataset_name(config.datasets[d].spec);
        r.level = n;
        r.k = k;
        const LevelData& ld = levels[d][static_cast<std::size_t>(n)];
        r.rho = ld.rho;
        r.A_ratio = ld.A_ratio;
        r.e_ratio = ld.e_ratio;
        rows.push_back(r);
      }
    }
  }
  std::vector<std::pair<std::size_t, int>> owner;
  for (std::size_t d = 0; d < config.datasets.size(); ++d)
    for (int n = 0; n <= config.datasets[d].levels; ++n)
      for (std::size_t i = 0; i < config.orders.size(); ++i) owner.emplace_back(d, n);

  parallel_for(rows.size(), [&](std::size_t i) {
    StudyRow& r = rows[i];
    const LevelData& ld = levels[owner[i].first][static_cast<std::size_t>(owner[i].second)];
    if (!ld.mesh) {
      r.failed = true;
      r.status = sanitize("error: " + ld.error);
      return;
    }
    try {
      ModelProblem p = config.problem == "sine" ? sine_problem() : polynomial_problem(r.k);
      r.report = solve_problem(*ld.mesh, r.k, config.element, p);
      r.status = r.report.status;
    } catch (const std::exception& e) {
      r.failed = true;
      r.status = sanitize(std::string("error: ") + e.what());
    }
    if (progress) progress("solved " + r.dataset + " level " + std::to_string(r.level) + " k=" + std::to_string(r.k));
  });
  flag_blowup(rows);
  return rows;
}

void flag_blowup(std::vector<StudyRow>& rows) {
  std::map<std::pair<std::string, int>, std::pair<int, double>> last;
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rows[a].level < rows[b].level; });
  for (std::size_t i : order) {
    StudyRow& r = rows[i];
    if (r.failed || !std::isfinite(r.report.err_L2_rel)) continue;
    auto key = std::make_pair(r.dataset, r.k);
    auto it = last.find(key);
    if (it != last.end() && it->second.first == r.level - 1 && r.report.err_L2_rel > it->second.second &&
        r.status.find("blowup") == std::string::npos)
      r.status = r.status.empty() || r.status == "ok" ? "blowup" : r.status + "+blowup";
    last[key] = {r.level, r.report.err_L2_rel};
  }
}

std::string results_csv(const std::vector<StudyRow>& rows) {
  std::string out = std::string(kHeader) + "\n";
  for (const auto& r : rows) {
    out += r.dataset + "," + std::to_string(r.level) + "," + std::to_string(r.k) + ",";
    if (r.failed) {
      for (int i = 0; i < 8; ++i) out += "FAIL,";
    } else {
      const SolveReport& s = r.report;
      out += std::to_string(s.n_dof) + ",";
      for (double v : {s.h, s.err_L2_rel, s.err_H1_rel, s.max_log10_cond_G, s.max_log10_cond_H,
                       s.max_log10_pinabla_id, s.max_log10_pi0_id})
        out += fmt(v) + ",";
    }
    out += fmt(r.rho) + "," + fmt(r.A_ratio) + "," + fmt(r.e_ratio) + "," + (r.status.empty() ? "ok" : r.status) +
           "\n";
  }
  return out;
}

std::vector<StudyRow> parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw std::invalid_argument("results.csv: unexpected header");
  std::vector<StudyRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 15) throw std::invalid_argument("results.csv line " + std::to_string(line_no) + ": expected 15 fields");
    try {
      StudyRow r;
      r.dataset = f[0];
      r.level = std::stoi(f[1]);
      r.k = std::stoi(f[2]);
      r.failed = f[3] == "FAIL";
      if (!r.failed) r.report.n_dof = static_cast<std::size_t>(std::stoull(f[3]));
      double* cols[] = {&r.report.h, &r.report.err_L2_rel, &r.report.err_H1_rel, &r.report.max_log10_cond_G,
                        &r.report.max_log10_cond_H, &r.report.max_log10_pinabla_id, &r.report.max_log10_pi0_id,
                        &r.rho, &r.A_ratio, &r.e_ratio};
      for (int i = 0; i < 10; ++i) *cols[i] = parse_number(f[static_cast<std::size_t>(4 + i)]);
      r.status = f[14];
      r.report.status = r.status;
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("results.csv line " + std::to_string(line_no) + ": bad value");
    }
  }
  return rows;
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(x[i] > 0 && y[i] > 0 && std::isfinite(x[i]) && std::isfinite(y[i]))) continue;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  SlopeFit f;
  f.points = lx.size();
  if (lx.size() < 2) {
    f.slope = f.intercept = std::numeric_limits<double>::quiet_NaN();
    return f;
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  f.slope = sxx > 0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
  f.intercept = my - f.slope * mx;
  return f;
}

ConvergenceSlopes convergence_slopes(const std::vector<StudyRow>& rows, const std::string& dataset, int k,
                                     int first_level) {
  std::vector<double> h, l2, h1;
  for (const auto& r : rows) {
    if (r.dataset != dataset || r.k != k || r.level < first_level || r.failed) continue;
    h.push_back(r.report.h);
    l2.push_back(r.report.err_L2_rel);
    h1.push_back(r.report.err_H1_rel);
  }
  return {fit_loglog(h, l2), fit_loglog(h, h1)};
}

std::vector<std::filesystem::path> write_dataset(const DatasetSpec& spec, int levels,
                                                 const std::filesystem::path& out_dir) {
  check_spec(spec);
  make_dir(out_dir);
  const std::string name = dataset_name(spec);
  std::vector<std::filesystem::path> written;
  json manifest;
  manifest["dataset"] = name;
  manifest["spec"] = spec_json(spec);
  manifest["levels"] = json::array();
  for (int n = 0; n <= levels; ++n) {
    GeneratedLevel g = generate_level(spec, n);
    const std::string file = name + "_" + std::to_string(n) + ".off";
    std::ostringstream off;
    write_off(g.mesh, off);
    write_text(out_dir / file, off.str());
    written.push_back(out_dir / file);
    MeshStats st = mesh_stats(g.mesh);
    manifest["levels"].push_back(json{{"level", n},
                                      {"file", file},
                                      {"n_vertices", st.n_vertices},
                                      {"n_elements", st.n_elements},
                                      {"h", st.h},
                                      {"A_ratio", st.A_ratio},
                                      {"e_ratio", st.e_ratio},
                                      {"warnings", g.warnings}});
  }
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
  written.push_back(out_dir / "manifest.json");
  return written;
}

std::vector<std::filesystem::path> write_error_plots(const std::vector<StudyRow>& rows,
                                                     const std::filesystem::path& out_dir) {
  make_dir(out_dir);
  std::vector<std::string> datasets;
  for (const auto& r : rows)
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) datasets.push_back(r.dataset);
  std::vector<std::filesystem::path> written;
  for (const auto& name : datasets) {
    for (int norm = 0; norm < 2; ++norm) {
      PlotSpec p;
      p.title = name + (norm == 0 ? ": relative L2 error" : ": relative H1 error");
      p.x_label = "number of dofs";
      p.y_label = norm == 0 ? "L2 error" : "H1 error";
      for (int k = 1; k <= 3; ++k) {
        PlotSeries s;
        s.label = "k=" + std::to_string(k);
        for (const auto& r : rows) {
          if (r.dataset != name || r.k != k || r.failed) continue;
          s.x.push_back(static_cast<double>(r.report.n_dof));
          s.y.push_back(norm == 0 ? r.report.err_L2_rel : r.report.err_H1_rel);
        }
        if (s.x.empty()) continue;
        // error ~ h^(k+1) resp. h^k and h ~ n_dof^(-1/2)
        const double rate = (norm == 0 ? k + 1 : k) / 2.0;
        char label[32];
        std::snprintf(label, sizeof label, "%g", rate);
        p.slopes.push_back({-rate, label, p.series.size()});
        p.series.push_back(std::move(s));
      }
      if (p.series.empty()) continue;
      auto path = out_dir / (name + (norm == 0 ? "_L2.svg" : "_H1.svg"));
      write_text(path, render_svg(p));
      written.push_back(path);
    }
  }
  return written;
}

StudyFiles run_study_to_dir(const StudyConfig& config, const std::filesystem::path& out_dir,
                            const StudyProgress& progress) {
  check_config(config);
  make_dir(out_dir);
  StudyFiles files;
  write_text(out_dir / "config.json", study_config_json(config));
  files.written.push_back(out_dir / "config.json");

  if (config.quality_only) {
    std::vector<std::pair<std::string, std::vector<DatasetQualityRow>>> sets;
    for (const auto& d : config.datasets) {
      std::vector<PolygonalMesh> meshes;
      for (int n = 0; n <= d.levels; ++n) meshes.push_back(generate_level(d.spec, n).mesh);
      auto rows = dataset_quality(meshes);
      const std::string name = dataset_name(d.spec);
      write_text(out_dir / ("quality_" + name + ".csv"), quality_csv(rows));
      files.written.push_back(out_dir / ("quality_" + name + ".csv"));
      if (progress) progress("scored " + name);
      sets.emplace_back(name, std::move(rows));
    }
    if (config.plots) {
      write_text(out_dir / "quality.svg", render_svg(quality_plot(sets)));
      files.written.push_back(out_dir / "quality.svg");
    }
    return files;
  }

  files.rows = run_study(config, progress);
  write_text(out_dir / "results.csv", results_csv(files.rows));
  files.written.push_back(out_dir / "results.csv");
  if (config.plots) {
    auto plots = write_error_plots(files.rows, out_dir);
    files.written.insert(files.written.end(), plots.begin(), plots.end());
  }
  return files;
}

}  // namespace polyvem
