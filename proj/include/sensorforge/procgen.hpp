#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sensorforge/rf.hpp"
#include "sensorforge/scene.hpp"

namespace sensorforge::procgen {

enum class EntryType { kWall, kRack, kPallet, kAnchor, kFiducialMarker, kDoor, kConveyor };

const char* to_string(EntryType type);
std::optional<EntryType> entry_type_from(const std::string& name);

struct PlacementEntry {
  EntryType type = EntryType::kWall;
  int cell_i = 0, cell_j = 0;
  std::optional<Pose> pose;  // free placement; grid cell used when absent
  std::map<std::string, double> params;
  std::uint64_t sub_seed = 0;
};

struct PlacementList {
  std::uint64_t master_seed = 0;
  double cell_size_m = 1.0;
  std::vector<PlacementEntry> entries;
};

enum class WallPolicy { kPerimeter, kPerimeterWithPartitions };

struct GenerationRules {
  int grid_width = 0, grid_height = 0;
  double cell_size_m = 1.0;
  WallPolicy wall_policy = WallPolicy::kPerimeter;
  int partition_count = 0;
  double rack_density = 0.0, pallet_density = 0.0;
  double rack_height_min_m = 1.0, rack_height_max_m = 5.0;  // within [1, 5]
  int anchor_count = 0, marker_count = 0;
  std::set<EntryType> allowed_types;  // empty set = everything allowed

  bool allows(EntryType t) const { return allowed_types.empty() || allowed_types.contains(t); }
  void validate() const;
};

// Deterministic layout generation: perimeter walls (plus seeded partition
// walls with door gaps), density-driven racks and pallets over interior
// cells, anchors and fiducial markers on free wall-adjacent cells. Every
// entry carries sub_seed = derive_seed(seed, entry_index). Over-constrained
// rules are rejected with the violated constraint in the message.
PlacementList generate(const GenerationRules& rules, std::uint64_t seed);

// Grid codes: 0 empty, 1 wall, 2-6 rack of height 1-5 m, 7 anchor,
// 8 fiducial marker. Doors, pallets and conveyors have no code and are
// omitted on export.
struct GridBitmap {
  int width = 0, height = 0;
  std::vector<std::uint8_t> cells;  // row-major [j * width + i]

  std::uint8_t at(int i, int j) const { return cells[static_cast<std::size_t>(j) * width + i]; }
  std::uint8_t& at(int i, int j) { return cells[static_cast<std::size_t>(j) * width + i]; }
  bool operator==(const GridBitmap&) const = default;
};

GridBitmap to_bitmap(const PlacementList& list, const GenerationRules& rules);
PlacementList from_bitmap(const GridBitmap& bitmap, double cell_size_m);

// Draws the concrete state of a changeable object from its sub-seed:
// doors gain "open_fraction" in [0, 1]; pallets gain "box_count" and per-box
// stack offsets. Other types pass through unchanged.
std::map<std::string, double> randomize_changeable(EntryType type,
                                                   const std::map<std::string, double>& params,
                                                   std::uint64_t sub_seed);

struct InstantiateResult {
  std::vector<ObjectId> object_ids;
  std::vector<rf::Anchor> anchors;         // forwarded to RF ranging by the caller
  std::vector<std::size_t> skipped_entries;  // indices of entries that collided
};

// Adds every entry to the scene as runtime objects (racks and pallets become
// compound meshes, walls boxes, markers thin panels). Blocking entries whose
// footprint overlaps existing geometry are skipped and reported.
InstantiateResult instantiate(Scene& scene, const PlacementList& list);

}  // namespace sensorforge::procgen
