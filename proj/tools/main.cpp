// Command-line front end: curve sweeps, crossing reports, validity scans
// and basis-size convergence studies on top of the lrcurves library.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lrcurves/blocks.hpp"
#include "lrcurves/constants.hpp"
#include "lrcurves/crossings.hpp"
#include "lrcurves/curves.hpp"
#include "lrcurves/species.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string species_path;
  std::vector<std::string> blocks{"all"};
  int nmax = 17;
  double r_min = 40.0;
  double r_max = 500.0;
  int points = 400;
  double temperature = 1e-3;  // K
  double epsilon = 0.1;
  int quad_nodes = 60;
  std::string out_dir = ".";
  bool allow_overlap_region = false;
  int n_star = 8;
};

struct BlockId {
  int abs_mj;
  lrc::Parity parity;
  lrc::Reflection reflection;
  std::string file_tag;  // e.g. "sigma+_even"
};

// printf-style %.17g keeps doubles round-trip exact and output byte-stable.
std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int usage_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return 2;
}

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j = json::parse(in);
  if (j.contains("species")) cfg.species_path = j.at("species");
  if (j.contains("blocks")) cfg.blocks = j.at("blocks").get<std::vector<std::string>>();
  if (j.contains("nmax")) cfg.nmax = j.at("nmax");
  if (j.contains("rmin")) cfg.r_min = j.at("rmin");
  if (j.contains("rmax")) cfg.r_max = j.at("rmax");
  if (j.contains("points")) cfg.points = j.at("points");
  if (j.contains("temperature")) cfg.temperature = j.at("temperature");
  if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon");
  if (j.contains("quad_nodes")) cfg.quad_nodes = j.at("quad_nodes");
  if (j.contains("out")) cfg.out_dir = j.at("out");
  if (j.contains("allow_overlap_region"))
    cfg.allow_overlap_region = j.at("allow_overlap_region");
  if (j.contains("n_star")) cfg.n_star = j.at("n_star");
}

// "sigma+" -> |m_J| = 0 with + reflection, and so on; "all" = the six
// symmetries Sigma+ ... Gamma (both parities each).
std::vector<BlockId> resolve_blocks(const std::vector<std::string>& names,
                                    std::string* bad) {
  const std::vector<std::pair<std::string, std::pair<int, lrc::Reflection>>>
      table = {
          {"sigma+", {0, lrc::Reflection::kPlus}},
          {"sigma-", {0, lrc::Reflection::kMinus}},
          {"pi", {1, lrc::Reflection::kPlus}},
          {"delta", {2, lrc::Reflection::kPlus}},
          {"phi", {3, lrc::Reflection::kPlus}},
          {"gamma", {4, lrc::Reflection::kPlus}},
          {"h", {5, lrc::Reflection::kPlus}},
      };
  std::vector<BlockId> out;
  const auto add = [&](const std::string& name, int mj, lrc::Reflection refl) {
    for (auto par : {lrc::Parity::kEven, lrc::Parity::kOdd})
      out.push_back({mj, par, refl,
                     name + "_" + lrc::parity_suffix(par)});
  };
  for (std::string n : names) {
    std::transform(n.begin(), n.end(), n.begin(), ::tolower);
    if (n == "all") {
      for (std::size_t k = 0; k < 6; ++k)  // default set stops at Gamma
        add(table[k].first, table[k].second.first, table[k].second.second);
      continue;
    }
    bool found = false;
    for (const auto& [key, id] : table)
      if (n == key) {
        add(key, id.first, id.second);
        found = true;
        break;
      }
    if (!found) {
      if (bad) *bad = n;
      return {};
    }
  }
  return out;
}

int validate(const RunConfig& cfg, std::string* err) {
  if (cfg.species_path.empty()) {
    *err = "no species file given (--species)";
    return 2;
  }
  if (!fs::exists(cfg.species_path)) {
    *err = "species file not found: " + cfg.species_path;
    return 2;
  }
  if (cfg.nmax < 0 || cfg.nmax > 40) {
    *err = "nmax must be in [0, 40]";
    return 2;
  }
  if (cfg.r_min < 40.0 && !cfg.allow_overlap_region) {
    *err = "rmin < 40 a.u. needs --allow-overlap-region";
    return 2;
  }
  if (cfg.r_min <= 0 || cfg.r_min >= cfg.r_max) {
    *err = "need 0 < rmin < rmax";
    return 2;
  }
  if (cfg.points < 2) {
    *err = "points must be >= 2";
    return 2;
  }
  if (cfg.epsilon <= 0) {
    *err = "epsilon must be positive";
    return 2;
  }
  if (cfg.quad_nodes < 1) {
    *err = "quad-nodes must be positive";
    return 2;
  }
  if (cfg.temperature < 0) {
    *err = "temperature must be >= 0";
    return 2;
  }
  return 0;
}

struct BlockResult {
  BlockId id;
  lrc::SymmetryBlock block;
  lrc::BlockKernels kernels;
  lrc::DiabaticBasis dia;
  std::vector<double> grid;  // descending
  std::optional<lrc::CurveSweep> sweep;
};

BlockResult process_block(const BlockId& id, const RunConfig& cfg,
                          const lrc::SpeciesData& species, bool with_sweep) {
  BlockResult res;
  res.id = id;
  res.block = lrc::build_block(id.abs_mj, id.parity, id.reflection, cfg.nmax);
  if (res.block.size() == 0) return res;
  const auto rule =
      lrc::default_quadrature(lrc::default_omega_scale(species), cfg.quad_nodes);
  res.kernels = lrc::build_kernels(res.block, species, rule, cfg.nmax);
  res.dia = lrc::build_diabatic(res.block, res.kernels, species.dimer.b_rot);
  res.grid = lrc::adaptive_grid(res.block, res.kernels, cfg.r_min, cfg.r_max,
                                cfg.points);
  if (with_sweep) res.sweep = lrc::eigensweep(res.block, res.kernels, res.grid);
  return res;
}

std::vector<BlockResult> process_all(const std::vector<BlockId>& ids,
                                     const RunConfig& cfg,
                                     const lrc::SpeciesData& species,
                                     bool with_sweep) {
  std::vector<std::future<BlockResult>> jobs;
  for (const auto& id : ids)
    jobs.push_back(std::async(std::launch::async, [&, id] {
      return process_block(id, cfg, species, with_sweep);
    }));
  std::vector<BlockResult> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

json labels_json(const BlockResult& r) {
  json j;
  j["symmetry"] = r.block.label;
  j["parity"] = lrc::parity_suffix(r.id.parity);
  j["curves"] = json::array();
  if (r.sweep) {
    for (const auto& lab : r.sweep->labels)
      j["curves"].push_back({{"p", lab.p},
                             {"symmetry", r.block.label},
                             {"n_asymptotic", lab.n_asym}});
  }
  j["diabatic"] = json::array();
  for (const auto& st : r.dia.states)
    j["diabatic"].push_back(
        {{"p", st.p}, {"n", st.n}, {"c5_au", st.c5}, {"c6_au", st.c6}});
  const int n = r.block.size();
  json c5 = json::array(), c6 = json::array();
  for (int i = 0; i < n; ++i) {
    json row5 = json::array(), row6 = json::array();
    for (int k = 0; k < n; ++k) {
      row5.push_back(r.dia.c5_matrix(i, k));
      row6.push_back(r.dia.c6_matrix(i, k));
    }
    c5.push_back(row5);
    c6.push_back(row6);
  }
  j["c5_matrix_au"] = c5;
  j["c6_matrix_au"] = c6;
  return j;
}

int cmd_curves(const RunConfig& cfg) {
  const auto species = lrc::load_species(cfg.species_path);
  std::string bad;
  const auto ids = resolve_blocks(cfg.blocks, &bad);
  if (ids.empty()) return usage_error("unknown block label: " + bad);
  fs::create_directories(cfg.out_dir);

  const auto results = process_all(ids, cfg, species, true);
  for (const auto& r : results) {
    if (r.block.size() == 0) continue;
    const int n = r.block.size();
    const auto& sweep = *r.sweep;

    std::string csv = "R_au";
    for (int c = 1; c <= n; ++c) csv += ",E" + std::to_string(c) + "_cm1";
    for (int c = 1; c <= n; ++c) csv += ",E" + std::to_string(c) + "_hartree";
    csv += "\n";
    // rows ascending in R for plotting; the sweep grid is descending
    for (int t = static_cast<int>(r.grid.size()) - 1; t >= 0; --t) {
      csv += fmt(r.grid[t]);
      for (int c = 0; c < n; ++c)
        csv += "," + fmt(lrc::hartree_to_cm1(sweep.energies(t, c)));
      for (int c = 0; c < n; ++c) csv += "," + fmt(sweep.energies(t, c));
      csv += "\n";
    }
    write_file(fs::path(cfg.out_dir) / ("curves_" + r.id.file_tag + ".csv"),
               csv);

    std::string dia_csv = "R_au";
    for (int c = 1; c <= n; ++c) dia_csv += ",W" + std::to_string(c) + "_cm1";
    for (int c = 1; c <= n; ++c)
      dia_csv += ",W" + std::to_string(c) + "_hartree";
    dia_csv += "\n";
    for (int t = static_cast<int>(r.grid.size()) - 1; t >= 0; --t) {
      dia_csv += fmt(r.grid[t]);
      for (int c = 0; c < n; ++c)
        dia_csv +=
            "," + fmt(lrc::hartree_to_cm1(r.dia.diagonal_energy(c, r.grid[t])));
      for (int c = 0; c < n; ++c)
        dia_csv += "," + fmt(r.dia.diagonal_energy(c, r.grid[t]));
      dia_csv += "\n";
    }
    write_file(fs::path(cfg.out_dir) / ("diabatic_" + r.id.file_tag + ".csv"),
               dia_csv);

    write_file(fs::path(cfg.out_dir) / ("labels_" + r.id.file_tag + ".json"),
               labels_json(r).dump(2) + "\n");
  }
  return 0;
}

int cmd_crossings(const RunConfig& cfg) {
  const auto species = lrc::load_species(cfg.species_path);
  std::string bad;
  const auto ids = resolve_blocks(cfg.blocks, &bad);
  if (ids.empty()) return usage_error("unknown block label: " + bad);
  fs::create_directories(cfg.out_dir);

  const double lo = std::max(cfg.r_min, 40.0);
  const double hi = std::min(cfg.r_max, 500.0);
  const auto results = process_all(ids, cfg, species, false);

  json report = json::array();
  std::string table =
      "block        p -> r   R0 (a.u.)   W_pr (cm-1)    v_p (a.u.)   P (%)\n";
  for (const auto& r : results) {
    if (r.block.size() == 0) continue;
    const auto geo = lrc::find_crossings(r.dia, lo, hi, cfg.points);
    const auto events =
        lrc::landau_zener_events(geo, r.dia, species, cfg.temperature);
    for (const auto& ev : events) {
      report.push_back({{"block", r.block.label},
                        {"parity", lrc::parity_suffix(r.id.parity)},
                        {"p", ev.p},
                        {"r", ev.r},
                        {"r0_au", ev.r0},
                        {"w_pr_hartree", ev.w_pr},
                        {"w_pr_cm1", lrc::hartree_to_cm1(ev.w_pr)},
                        {"c5_prime_au", ev.c5_prime},
                        {"c6_prime_au", ev.c6_prime},
                        {"slope_diff_hartree_per_au", ev.slope_diff},
                        {"v_entrance_au", ev.v_entrance},
                        {"gamma", ev.gamma},
                        {"probability", ev.probability},
                        {"temperature_K", ev.temperature},
                        {"entrance_is_upper", ev.entrance_is_upper}});
      char line[160];
      std::snprintf(line, sizeof line,
                    "%-10s %3d -> %-3d %9.3f   %11.4g   %11.4g   %5.1f\n",
                    (r.block.label + "_" + lrc::parity_suffix(r.id.parity))
                        .c_str(),
                    ev.p, ev.r, ev.r0, lrc::hartree_to_cm1(ev.w_pr),
                    ev.v_entrance, 100.0 * ev.probability);
      table += line;
    }
  }
  write_file(fs::path(cfg.out_dir) / "crossings.json", report.dump(2) + "\n");
  write_file(fs::path(cfg.out_dir) / "crossings_table.txt", table);
  std::cout << table;
  return 0;
}

int cmd_validity(const RunConfig& cfg) {
  const auto species = lrc::load_species(cfg.species_path);
  std::string bad;
  const auto ids = resolve_blocks(cfg.blocks, &bad);
  if (ids.empty()) return usage_error("unknown block label: " + bad);
  fs::create_directories(cfg.out_dir);

  const auto results = process_all(ids, cfg, species, false);
  std::string summary = "state,label,epsilon,R_star_au,resonances\n";
  for (const auto& r : results) {
    if (r.block.size() == 0) continue;
    const int n = r.block.size();
    const auto grid = r.grid;
    for (int p = 1; p <= n; ++p) {
      std::string csv = "R_au";
      for (int q = 1; q <= n; ++q)
        if (q != p) csv += ",wbar_" + std::to_string(q);
      csv += ",max_wbar\n";
      for (int t = static_cast<int>(grid.size()) - 1; t >= 0; --t) {
        csv += fmt(grid[t]);
        double maxw = 0.0;
        for (int q = 1; q <= n; ++q) {
          if (q == p) continue;
          const auto w = lrc::normalized_coupling(r.dia, p, q, grid[t]);
          csv += "," + (w.indeterminate ? std::string("nan") : fmt(w.value));
          if (!w.indeterminate) maxw = std::max(maxw, std::abs(w.value));
        }
        csv += "," + fmt(maxw) + "\n";
      }
      const std::string stem = "wbar_" + r.id.file_tag + "_p" +
                               std::to_string(p);
      write_file(fs::path(cfg.out_dir) / (stem + ".csv"), csv);

      const auto rep = lrc::validity_radius(r.dia, p, cfg.epsilon, grid);
      std::string reson;
      for (std::size_t k = 0; k < rep.resonances.size(); ++k)
        reson += (k ? ";" : "") + fmt(rep.resonances[k]);
      summary += "(" + std::to_string(p) + ")" + r.block.label + "_" +
                 lrc::parity_suffix(r.id.parity) + ",N=" +
                 std::to_string(r.dia.states[p - 1].n) + "," +
                 fmt(rep.epsilon) + "," +
                 (rep.criterion_met ? fmt(rep.r_star)
                                    : fmt(rep.r_star) + " (not reached)") +
                 "," + reson + "\n";
    }
  }
  write_file(fs::path(cfg.out_dir) / "validity.csv", summary);
  return 0;
}

int cmd_converge(const RunConfig& cfg) {
  const auto species = lrc::load_species(cfg.species_path);
  std::string bad;
  const auto ids = resolve_blocks(cfg.blocks, &bad);
  if (ids.empty()) return usage_error("unknown block label: " + bad);
  fs::create_directories(cfg.out_dir);

  const auto rule =
      lrc::default_quadrature(lrc::default_omega_scale(species), cfg.quad_nodes);
  const auto grid = lrc::log_grid(cfg.r_min, cfg.r_max, cfg.points);

  std::string csv =
      "block,p,abs_mj,n_asym,shift_step1_hartree,shift_step2_hartree,"
      "shift2_over_spacing\n";
  for (const auto& id : ids) {
    const auto rep = lrc::convergence_study(id.abs_mj, id.parity, id.reflection,
                                            grid, cfg.n_star, species, rule);
    for (const auto& e : rep.entries) {
      csv += lrc::symmetry_label(id.abs_mj, id.reflection) + "_" +
             lrc::parity_suffix(id.parity) + "," + std::to_string(e.label.p) +
             "," + std::to_string(e.label.abs_mj) + "," +
             std::to_string(e.label.n_asym) + "," + fmt(e.max_shift_step1) +
             "," + fmt(e.max_shift_step2) + "," +
             fmt(e.max_shift_over_spacing) + "\n";
    }
  }
  write_file(fs::path(cfg.out_dir) / "convergence.csv", csv);
  std::cout << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-range dimer-atom interaction curves and crossing analysis"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; flags override");
    sub->add_option("--species", cfg.species_path, "species data file (JSON)");
    sub->add_option("--blocks", cfg.blocks,
                    "symmetry labels (sigma+ sigma- pi delta phi gamma h) or all");
    sub->add_option("--nmax", cfg.nmax, "rotational basis cutoff (<= 40)");
    sub->add_option("--rmin", cfg.r_min, "lower radius, bohr");
    sub->add_option("--rmax", cfg.r_max, "upper radius, bohr");
    sub->add_option("--points", cfg.points, "radial grid points");
    sub->add_option("--temperature", cfg.temperature, "temperature, K");
    sub->add_option("--epsilon", cfg.epsilon, "validity threshold");
    sub->add_option("--quad-nodes", cfg.quad_nodes, "quadrature nodes");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_flag("--allow-overlap-region", cfg.allow_overlap_region,
                  "permit rmin below 40 bohr");
    sub->add_option("--nstar", cfg.n_star, "target N* for convergence studies");
  };

  auto* curves = app.add_subcommand("curves", "adiabatic + diabatic curve CSVs");
  auto* crossings =
      app.add_subcommand("crossings", "Landau-Zener crossing report");
  auto* validity =
      app.add_subcommand("validity", "normalized-coupling validity scan");
  auto* converge =
      app.add_subcommand("converge", "basis-size convergence report");
  for (auto* sub : {curves, crossings, validity, converge}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (!config_path.empty()) {
    try {
      RunConfig from_file;
      load_config_file(config_path, from_file);
      // flags win: reparse on top of the file values
      cfg = from_file;
      app.clear();
      app.parse(argc, argv);
    } catch (const std::exception& e) {
      return usage_error(std::string("bad config: ") + e.what());
    }
  }
  try {
    std::string err;
    if (validate(cfg, &err) != 0) return usage_error(err);

    if (curves->parsed()) return cmd_curves(cfg);
    if (crossings->parsed()) return cmd_crossings(cfg);
    if (validity->parsed()) return cmd_validity(cfg);
    if (converge->parsed()) return cmd_converge(cfg);
    return usage_error("no subcommand");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
