#include <algorithm>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sensorforge/io.hpp"
#include "sensorforge/run.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitDegenerate = 3;

struct GridArg {
  sensorforge::rf::GridSpec spec;
};

// --grid "ox,oy,z,nx,ny,cell[,planar]"
sensorforge::rf::GridSpec parse_grid_arg(const std::string& arg) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = arg.find(',', start);
    fields.push_back(arg.substr(start, pos == std::string::npos ? pos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (fields.size() != 6 && fields.size() != 7) {
    throw std::runtime_error("--grid expects 'ox,oy,z,nx,ny,cell[,planar]'");
  }
  sensorforge::rf::GridSpec spec;
  spec.origin_x = std::stod(fields[0]);
  spec.origin_y = std::stod(fields[1]);
  spec.z = std::stod(fields[2]);
  spec.nx = std::stoi(fields[3]);
  spec.ny = std::stoi(fields[4]);
  spec.cell_size_m = std::stod(fields[5]);
  if (fields.size() == 7) {
    if (fields[6] != "planar") throw std::runtime_error("--grid trailing flag must be 'planar'");
    spec.planar = true;
  }
  spec.validate();
  return spec;
}

bool anchors_collinear(const std::vector<sensorforge::rf::Anchor>& anchors) {
  if (anchors.size() < 3) return true;
  const sensorforge::Vec3 a = anchors[0].position;
  for (std::size_t i = 1; i + 1 < anchors.size(); ++i) {
    for (std::size_t k = i + 1; k < anchors.size(); ++k) {
      const sensorforge::Vec3 u = anchors[i].position - a;
      const sensorforge::Vec3 v = anchors[k].position - a;
      if (sensorforge::norm(sensorforge::cross(u, v)) > 1e-9) return false;
    }
  }
  return true;
}

int cmd_generate(const std::string& rules_path, std::uint64_t seed, const std::string& out_path,
                 const std::string& bitmap_path) {
  const auto rules = sensorforge::io::load_generation_rules(rules_path);
  const auto list = sensorforge::procgen::generate(rules, seed);
  sensorforge::io::save_placement(list, out_path);
  if (!bitmap_path.empty()) {
    sensorforge::io::save_bitmap(sensorforge::procgen::to_bitmap(list, rules), bitmap_path);
  }
  std::printf("generated %zu entries (seed %llu) -> %s\n", list.entries.size(),
              static_cast<unsigned long long>(seed), out_path.c_str());
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  auto config = sensorforge::load_run_config(config_path);
  const auto frames = sensorforge::run_simulation(std::move(config), out_dir);
  std::printf("simulated %llu frames -> %s\n", static_cast<unsigned long long>(frames),
              out_dir.c_str());
  return kExitOk;
}

int cmd_eval_placement(const std::string& scene_path, const std::string& anchors_path,
                       const std::string& grid_arg, const std::string& out_path,
                       const sensorforge::rf::RfConfig& rf_cfg) {
  const auto scene = sensorforge::io::load_scene(scene_path);
  const auto anchors = sensorforge::io::load_anchors(anchors_path);
  if (anchors.size() < 3 || anchors_collinear(anchors)) {
    std::fprintf(stderr, "error: anchor set is degenerate (need >= 3 non-collinear anchors, got %zu)\n",
                 anchors.size());
    return kExitDegenerate;
  }
  const auto grid = parse_grid_arg(grid_arg);
  const auto errmap = sensorforge::rf::localization_error_map(scene, anchors, grid, rf_cfg);
  sensorforge::io::save_error_grid(errmap, out_path);

  std::vector<double> reachable;
  for (double e : errmap.cells) {
    if (e >= 0.0) reachable.push_back(e);
  }
  std::sort(reachable.begin(), reachable.end());
  const std::size_t unreachable = errmap.cells.size() - reachable.size();
  std::string summary;
  if (reachable.empty()) {
    summary = "no reachable cells\n";
  } else {
    double mean = 0.0;
    for (double e : reachable) mean += e;
    mean /= static_cast<double>(reachable.size());
    const double median = reachable[reachable.size() / 2];
    const double p95 = reachable[static_cast<std::size_t>(0.95 * (reachable.size() - 1))];
    summary = "cells: " + std::to_string(errmap.cells.size()) +
              "\nunreachable: " + std::to_string(unreachable) +
              "\nmean_error_m: " + sensorforge::io::format_double(mean) +
              "\nmedian_error_m: " + sensorforge::io::format_double(median) +
              "\np95_error_m: " + sensorforge::io::format_double(p95) + "\n";
  }
  sensorforge::io::write_file(out_path + ".summary.txt", summary);
  std::fputs(summary.c_str(), stdout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sensorforge: headless multi-sensor simulation over procedural environments"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a placement list from rules and a seed");
  std::string rules_path, gen_out, bitmap_path;
  std::uint64_t seed = 0;
  gen->add_option("--rules", rules_path, "Generation rules JSON file")->required();
  gen->add_option("--seed", seed, "Master seed")->required();
  gen->add_option("--out", gen_out, "Output placement list path")->required();
  gen->add_option("--bitmap", bitmap_path, "Also write the grid bitmap to this path");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run a configured simulation");
  std::string config_path, sim_out;
  sim->add_option("--config", config_path, "Run configuration JSON file")->required();
  sim->add_option("--out", sim_out, "Output directory")->required();

  // eval-placement
  auto* eval = app.add_subcommand("eval-placement",
                                  "Evaluate localization error over a grid of tag positions");
  std::string scene_path, anchors_path, grid_arg, eval_out;
  sensorforge::rf::RfConfig rf_cfg;
  rf_cfg.wavelength_m = 0.06;  // ~5 GHz
  rf_cfg.attenuation_floor_db = 120.0;
  eval->add_option("--scene", scene_path, "Scene description JSON file")->required();
  eval->add_option("--anchors", anchors_path, "Anchor CSV (anchor_id,x,y,z)")->required();
  eval->add_option("--grid", grid_arg, "Grid spec 'ox,oy,z,nx,ny,cell[,planar]'")->required();
  eval->add_option("--out", eval_out, "Output error map path")->required();
  eval->add_option("--wavelength", rf_cfg.wavelength_m, "RF wavelength in meters");
  eval->add_option("--attenuation-floor", rf_cfg.attenuation_floor_db,
                   "Path loss pruning threshold in dB");
  eval->add_option("--max-interactions", rf_cfg.max_interactions,
                   "Maximum reflections + transmissions per path");
  eval->add_option("--spreading-ref", rf_cfg.spreading_ref_m, "Spreading reference distance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (gen->parsed()) return cmd_generate(rules_path, seed, gen_out, bitmap_path);
    if (sim->parsed()) return cmd_simulate(config_path, sim_out);
    if (eval->parsed()) return cmd_eval_placement(scene_path, anchors_path, grid_arg, eval_out, rf_cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfigError;
  }
  return kExitConfigError;
}
