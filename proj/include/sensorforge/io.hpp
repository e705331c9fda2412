#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sensorforge/echo.hpp"
#include "sensorforge/lidar.hpp"
#include "sensorforge/motion.hpp"
#include "sensorforge/procgen.hpp"
#include "sensorforge/rf.hpp"
#include "sensorforge/scene.hpp"

namespace sensorforge::io {

// Doubles are printed with 17 significant digits throughout so every writer /
// reader pair round-trips exactly.

// --- scene description (JSON) ---
Scene parse_scene(const std::string& text);
Scene load_scene(const std::string& path);

// --- label table (CSV: name,label_id,r,g,b) ---
struct LabelRow {
  std::string name;
  LabelId label_id = 0;
  Rgb888 color;
};
std::string label_table_to_csv(const LabelRegistry& registry);
std::vector<LabelRow> parse_label_table_csv(const std::string& text);
void save_label_table(const LabelRegistry& registry, const std::string& path);

// --- generation rules (JSON) ---
procgen::GenerationRules parse_generation_rules(const std::string& text);
procgen::GenerationRules load_generation_rules(const std::string& path);

// --- placement lists (JSON) ---
std::string placement_to_string(const procgen::PlacementList& list);
procgen::PlacementList placement_from_string(const std::string& text);
void save_placement(const procgen::PlacementList& list, const std::string& path);
procgen::PlacementList load_placement(const std::string& path);

// --- grid bitmaps and error maps (text matrix: "W H" header + rows) ---
std::string bitmap_to_string(const procgen::GridBitmap& bitmap);
procgen::GridBitmap bitmap_from_string(const std::string& text);
void save_bitmap(const procgen::GridBitmap& bitmap, const std::string& path);
procgen::GridBitmap load_bitmap(const std::string& path);

std::string error_grid_to_string(const rf::ErrorGrid& grid);
rf::ErrorGrid error_grid_from_string(const std::string& text);
void save_error_grid(const rf::ErrorGrid& grid, const std::string& path);
rf::ErrorGrid load_error_grid(const std::string& path);

// --- LiDAR point clouds ---
// Plain ASCII: one point per line "x y z intensity label_id timestamp".
std::string point_cloud_to_ascii(const std::vector<lidar::LidarReturn>& points);
std::vector<lidar::LidarReturn> point_cloud_from_ascii(const std::string& text);
void save_point_cloud_ascii(const std::vector<lidar::LidarReturn>& points, const std::string& path);
std::vector<lidar::LidarReturn> load_point_cloud_ascii(const std::string& path);

// PCD v0.7 (ascii data, F8 coordinates).
std::string point_cloud_to_pcd(const std::vector<lidar::LidarReturn>& points);
std::vector<lidar::LidarReturn> point_cloud_from_pcd(const std::string& text);
void save_point_cloud_pcd(const std::vector<lidar::LidarReturn>& points, const std::string& path);
std::vector<lidar::LidarReturn> load_point_cloud_pcd(const std::string& path);

// --- echoes (CSV: x,y,z,total_path_m,power_db,bounces) ---
std::string echoes_to_csv(const std::vector<echo::Echo>& echoes);
std::vector<echo::Echo> echoes_from_csv(const std::string& text);
void save_echoes(const std::vector<echo::Echo>& echoes, const std::string& path);
std::vector<echo::Echo> load_echoes(const std::string& path);

// --- anchors (CSV: anchor_id,x,y,z) ---
std::string anchors_to_csv(const std::vector<rf::Anchor>& anchors);
std::vector<rf::Anchor> anchors_from_csv(const std::string& text);
void save_anchors(const std::vector<rf::Anchor>& anchors, const std::string& path);
std::vector<rf::Anchor> load_anchors(const std::string& path);

// --- RF path dumps
// (CSV: anchor_id,tof_s,aod_az,aod_el,aoa_az,aoa_el,loss_db,phase_rad,interactions) ---
struct RfPathRow {
  std::uint32_t anchor_id = 0;
  double tof_s = 0.0;
  double aod_az = 0.0, aod_el = 0.0;
  double aoa_az = 0.0, aoa_el = 0.0;
  double loss_db = 0.0;
  double phase_rad = 0.0;
  int interactions = 0;
};
std::string rf_paths_to_csv(const std::vector<RfPathRow>& rows);
std::vector<RfPathRow> rf_paths_from_csv(const std::string& text);
std::vector<RfPathRow> rf_path_rows(std::uint32_t anchor_id, const std::vector<rf::RfPath>& paths);

// --- trajectories (CSV: t,x,y,z,qw,qx,qy,qz) ---
std::string trajectory_to_csv(const Trajectory& traj);
Trajectory trajectory_from_csv(const std::string& text);
void save_trajectory(const Trajectory& traj, const std::string& path);
Trajectory load_trajectory(const std::string& path);

// --- plumbing ---
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
std::string format_double(double v);  // %.17g

}  // namespace sensorforge::io
