#include "sensorforge/procgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sensorforge/rng.hpp"

namespace sensorforge::procgen {

const char* to_string(EntryType type) {
  switch (type) {
    case EntryType::kWall: return "wall";
    case EntryType::kRack: return "rack";
    case EntryType::kPallet: return "pallet";
    case EntryType::kAnchor: return "anchor";
    case EntryType::kFiducialMarker: return "fiducial_marker";
    case EntryType::kDoor: return "door";
    case EntryType::kConveyor: return "conveyor";
  }
  return "?";
}

std::optional<EntryType> entry_type_from(const std::string& name) {
  for (EntryType t : {EntryType::kWall, EntryType::kRack, EntryType::kPallet, EntryType::kAnchor,
                      EntryType::kFiducialMarker, EntryType::kDoor, EntryType::kConveyor}) {
    if (name == to_string(t)) return t;
  }
  return std::nullopt;
}

void GenerationRules::validate() const {
  if (grid_width < 1 || grid_height < 1) {
    throw std::invalid_argument("generation rules: grid dimensions must be >= 1");
  }
  if (!(cell_size_m > 0.0)) throw std::invalid_argument("generation rules: cell_size must be > 0");
  if (rack_density < 0.0 || rack_density > 1.0 || pallet_density < 0.0 || pallet_density > 1.0) {
    throw std::invalid_argument("generation rules: densities must be in [0,1]");
  }
  if (rack_height_min_m < 1.0 || rack_height_max_m > 5.0 || rack_height_min_m > rack_height_max_m) {
    throw std::invalid_argument("generation rules: rack heights must satisfy 1 <= min <= max <= 5");
  }
  if (anchor_count < 0 || marker_count < 0 || partition_count < 0) {
    throw std::invalid_argument("generation rules: counts must be >= 0");
  }
}

namespace {

struct CellGrid {
  int w, h;
  std::vector<std::uint8_t> blocked;  // any blocking entry
  std::vector<std::uint8_t> wall;     // wall entries specifically

  CellGrid(int w_, int h_) : w(w_), h(h_), blocked(w_ * h_, 0), wall(w_ * h_, 0) {}
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * w + i; }
  bool in(int i, int j) const { return i >= 0 && i < w && j >= 0 && j < h; }
  bool is_free(int i, int j) const { return !blocked[idx(i, j)]; }
  bool wall_adjacent(int i, int j) const {
    static constexpr int di[4] = {1, -1, 0, 0};
    static constexpr int dj[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int ni = i + di[k], nj = j + dj[k];
      if (in(ni, nj) && wall[idx(ni, nj)]) return true;
    }
    return false;
  }
};

}  // namespace

PlacementList generate(const GenerationRules& rules, std::uint64_t seed) {
  rules.validate();
  Rng rng(seed);
  const int w = rules.grid_width;
  const int h = rules.grid_height;
  CellGrid grid(w, h);

  PlacementList list;
  list.master_seed = seed;
  list.cell_size_m = rules.cell_size_m;

  auto emit = [&](EntryType type, int i, int j, std::map<std::string, double> params = {}) {
    PlacementEntry e;
    e.type = type;
    e.cell_i = i;
    e.cell_j = j;
    e.params = std::move(params);
    list.entries.push_back(std::move(e));
  };

  // Perimeter walls, row-major.
  if (rules.allows(EntryType::kWall)) {
    for (int j = 0; j < h; ++j) {
      for (int i = 0; i < w; ++i) {
        if (i == 0 || j == 0 || i == w - 1 || j == h - 1) {
          emit(EntryType::kWall, i, j);
          grid.blocked[grid.idx(i, j)] = 1;
          grid.wall[grid.idx(i, j)] = 1;
        }
      }
    }
  }

  // Partition walls with one door gap each.
  if (rules.wall_policy == WallPolicy::kPerimeterWithPartitions && rules.partition_count > 0 &&
      rules.allows(EntryType::kWall)) {
    if (w < 4 || h < 4) {
      throw std::invalid_argument("generation rules: partitions require a grid of at least 4x4");
    }
    for (int p = 0; p < rules.partition_count; ++p) {
      const bool vertical = rng.next_index(2) == 0;
      const int span = vertical ? h : w;
      const int line = 1 + static_cast<int>(rng.next_index(static_cast<std::uint64_t>(
                               (vertical ? w : h) - 2)));
      const int door_at = 1 + static_cast<int>(rng.next_index(static_cast<std::uint64_t>(span - 2)));
      for (int t = 1; t < span - 1; ++t) {
        const int i = vertical ? line : t;
        const int j = vertical ? t : line;
        if (!grid.is_free(i, j)) continue;
        if (t == door_at) {
          if (rules.allows(EntryType::kDoor)) {
            emit(EntryType::kDoor, i, j, {{"hinge_yaw_rad", vertical ? std::numbers::pi / 2 : 0.0}});
            grid.blocked[grid.idx(i, j)] = 1;
          }
          continue;
        }
        emit(EntryType::kWall, i, j);
        grid.blocked[grid.idx(i, j)] = 1;
        grid.wall[grid.idx(i, j)] = 1;
      }
    }
  }

  // Density-driven racks then pallets over free interior cells, row-major.
  if (rules.allows(EntryType::kRack) && rules.rack_density > 0.0) {
    for (int j = 1; j < h - 1; ++j) {
      for (int i = 1; i < w - 1; ++i) {
        if (!grid.is_free(i, j)) continue;
        if (rng.next_double() < rules.rack_density) {
          const double height = rng.next_double(rules.rack_height_min_m, rules.rack_height_max_m);
          emit(EntryType::kRack, i, j, {{"height_m", height}});
          grid.blocked[grid.idx(i, j)] = 1;
        }
      }
    }
  }
  if (rules.allows(EntryType::kPallet) && rules.pallet_density > 0.0) {
    for (int j = 1; j < h - 1; ++j) {
      for (int i = 1; i < w - 1; ++i) {
        if (!grid.is_free(i, j)) continue;
        if (rng.next_double() < rules.pallet_density) {
          emit(EntryType::kPallet, i, j);
          grid.blocked[grid.idx(i, j)] = 1;
        }
      }
    }
  }

  // Anchors and markers on free wall-adjacent cells, sampled without
  // replacement.
  auto place_on_wall_adjacent = [&](EntryType type, int count, const char* what) {
    if (count == 0 || !rules.allows(type)) return;
    std::vector<std::pair<int, int>> candidates;
    for (int j = 0; j < h; ++j) {
      for (int i = 0; i < w; ++i) {
        if (grid.is_free(i, j) && grid.wall_adjacent(i, j)) candidates.emplace_back(i, j);
      }
    }
    if (static_cast<int>(candidates.size()) < count) {
      throw std::invalid_argument(std::string("generation rules over-constrained: ") + what + " " +
                                  std::to_string(count) + " exceeds " +
                                  std::to_string(candidates.size()) +
                                  " free wall-adjacent cells");
    }
    for (int k = 0; k < count; ++k) {
      const std::size_t pick =
          k + static_cast<std::size_t>(rng.next_index(candidates.size() - k));
      std::swap(candidates[k], candidates[pick]);
      const auto [i, j] = candidates[k];
      std::map<std::string, double> params;
      if (type == EntryType::kAnchor) params["height_m"] = rng.next_double(1.5, 3.0);
      emit(type, i, j, std::move(params));
      // Reserve the cell against later passes; anchors and markers still do
      // not block physically.
      grid.blocked[grid.idx(i, j)] = 1;
    }
  };
  place_on_wall_adjacent(EntryType::kAnchor, rules.anchor_count, "anchor_count");
  place_on_wall_adjacent(EntryType::kFiducialMarker, rules.marker_count, "marker_count");

  for (std::size_t k = 0; k < list.entries.size(); ++k) {
    list.entries[k].sub_seed = derive_seed(seed, k);
  }
  return list;
}

// ---------------------------------------------------------------------------
// Bitmap exchange

namespace {

// Maps an entry to its grid cell; free-posed entries must sit exactly on a
// cell center.
std::pair<int, int> cell_of(const PlacementEntry& e, double cell_size, std::size_t index) {
  if (!e.pose) return {e.cell_i, e.cell_j};
  const double fx = e.pose->position.x / cell_size - 0.5;
  const double fy = e.pose->position.y / cell_size - 0.5;
  const int i = static_cast<int>(std::llround(fx));
  const int j = static_cast<int>(std::llround(fy));
  if (std::abs(fx - i) > 1e-9 || std::abs(fy - j) > 1e-9) {
    throw std::invalid_argument("entry " + std::to_string(index) + " (" + to_string(e.type) +
                                ") is not grid-aligned");
  }
  return {i, j};
}

}  // namespace

GridBitmap to_bitmap(const PlacementList& list, const GenerationRules& rules) {
  GridBitmap bitmap;
  bitmap.width = rules.grid_width;
  bitmap.height = rules.grid_height;
  bitmap.cells.assign(static_cast<std::size_t>(bitmap.width) * bitmap.height, 0);
  for (std::size_t k = 0; k < list.entries.size(); ++k) {
    const PlacementEntry& e = list.entries[k];
    const auto [i, j] = cell_of(e, list.cell_size_m, k);
    if (i < 0 || i >= bitmap.width || j < 0 || j >= bitmap.height) {
      throw std::invalid_argument("entry " + std::to_string(k) + " (" + to_string(e.type) +
                                  ") lies outside the grid");
    }
    std::uint8_t code = 0;
    switch (e.type) {
      case EntryType::kWall: code = 1; break;
      case EntryType::kRack: {
        const auto it = e.params.find("height_m");
        const double height = it != e.params.end() ? it->second : 1.0;
        code = static_cast<std::uint8_t>(1 + std::clamp<long long>(std::llround(height), 1, 5));
        break;
      }
      case EntryType::kAnchor: code = 7; break;
      case EntryType::kFiducialMarker: code = 8; break;
      default: continue;  // pallets, doors, conveyors have no bitmap code
    }
    bitmap.at(i, j) = code;
  }
  return bitmap;
}

PlacementList from_bitmap(const GridBitmap& bitmap, double cell_size_m) {
  if (!(cell_size_m > 0.0)) throw std::invalid_argument("from_bitmap: cell_size must be > 0");
  PlacementList list;
  list.master_seed = 0;
  list.cell_size_m = cell_size_m;
  for (int j = 0; j < bitmap.height; ++j) {
    for (int i = 0; i < bitmap.width; ++i) {
      const std::uint8_t code = bitmap.at(i, j);
      if (code == 0) continue;
      PlacementEntry e;
      e.cell_i = i;
      e.cell_j = j;
      if (code == 1) {
        e.type = EntryType::kWall;
      } else if (code >= 2 && code <= 6) {
        e.type = EntryType::kRack;
        e.params["height_m"] = static_cast<double>(code - 1);
      } else if (code == 7) {
        e.type = EntryType::kAnchor;
      } else if (code == 8) {
        e.type = EntryType::kFiducialMarker;
      } else {
        throw std::invalid_argument("bitmap code " + std::to_string(code) + " at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ") is invalid");
      }
      list.entries.push_back(std::move(e));
    }
  }
  for (std::size_t k = 0; k < list.entries.size(); ++k) {
    list.entries[k].sub_seed = derive_seed(list.master_seed, k);
  }
  return list;
}

// ---------------------------------------------------------------------------
// Changeable-object randomization

std::map<std::string, double> randomize_changeable(EntryType type,
                                                   const std::map<std::string, double>& params,
                                                   std::uint64_t sub_seed) {
  std::map<std::string, double> out = params;
  Rng rng(sub_seed);
  switch (type) {
    case EntryType::kDoor:
      out["open_fraction"] = rng.next_double();
      break;
    case EntryType::kPallet: {
      const int boxes = 1 + static_cast<int>(rng.next_index(4));
      out["box_count"] = boxes;
      for (int b = 0; b < boxes; ++b) {
        out["box_" + std::to_string(b) + "_dx"] = rng.next_double(-0.05, 0.05);
        out["box_" + std::to_string(b) + "_dy"] = rng.next_double(-0.05, 0.05);
      }
      break;
    }
    default:
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Instantiation

namespace {

void append_box(TriangleMesh& mesh, const Vec3& center, const Vec3& half) {
  const std::uint32_t base = static_cast<std::uint32_t>(mesh.vertices.size());
  for (int corner = 0; corner < 8; ++corner) {
    mesh.vertices.push_back(center + Vec3{(corner & 1) ? half.x : -half.x,
                                          (corner & 2) ? half.y : -half.y,
                                          (corner & 4) ? half.z : -half.z});
  }
  static constexpr std::uint32_t kFaces[12][3] = {
      {0, 2, 1}, {1, 2, 3},  // z-
      {4, 5, 6}, {5, 7, 6},  // z+
      {0, 1, 4}, {1, 5, 4},  // y-
      {2, 6, 3}, {3, 6, 7},  // y+
      {0, 4, 2}, {2, 4, 6},  // x-
      {1, 3, 5}, {3, 7, 5},  // x+
  };
  for (const auto& f : kFaces) mesh.triangles.push_back({base + f[0], base + f[1], base + f[2]});
}

MaterialId material_for(const Scene& scene, const char* name) {
  return scene.find_material(name).value_or(0);
}

double param_or(const std::map<std::string, double>& params, const std::string& key, double def) {
  const auto it = params.find(key);
  return it != params.end() ? it->second : def;
}

}  // namespace

InstantiateResult instantiate(Scene& scene, const PlacementList& list) {
  InstantiateResult result;
  const double s = list.cell_size_m;
  std::uint32_t next_anchor_id = 1;

  for (std::size_t k = 0; k < list.entries.size(); ++k) {
    const PlacementEntry& e = list.entries[k];
    const Vec3 cell_center =
        e.pose ? e.pose->position : Vec3{(e.cell_i + 0.5) * s, (e.cell_j + 0.5) * s, 0.0};
    const Quat orient = e.pose ? e.pose->orientation : Quat::identity();
    const std::string base_name = std::string(to_string(e.type)) + "_" + std::to_string(k);

    auto add = [&](ObjectInstance obj) {
      obj.name = base_name;
      const ObjectId id = scene.add_object(std::move(obj));
      result.object_ids.push_back(id);
      return id;
    };

    // Blocking entries are collision-checked against what is already there.
    auto blocked = [&](double height) {
      Aabb box;
      const double shrink = 0.05 * s;
      box.expand(cell_center + Vec3{-s / 2 + shrink, -s / 2 + shrink, 1e-3});
      box.expand(cell_center + Vec3{s / 2 - shrink, s / 2 - shrink, height});
      return !scene.query_overlaps(box).empty();
    };

    switch (e.type) {
      case EntryType::kWall: {
        const double height = param_or(e.params, "height_m", 3.0);
        if (blocked(height)) {
          result.skipped_entries.push_back(k);
          break;
        }
        ObjectInstance obj;
        obj.geometry = BoxShape{{s / 2, s / 2, height / 2}};
        obj.pose = {cell_center + Vec3{0, 0, height / 2}, orient};
        obj.material_id = material_for(scene, "wall");
        add(std::move(obj));
        break;
      }
      case EntryType::kRack: {
        const double height = param_or(e.params, "height_m", 2.0);
        if (blocked(height)) {
          result.skipped_entries.push_back(k);
          break;
        }
        TriangleMesh mesh;
        const double post = 0.04;
        for (double sx : {-1.0, 1.0}) {
          for (double sy : {-1.0, 1.0}) {
            append_box(mesh, {sx * (s / 2 - post), sy * (s / 2 - post), height / 2},
                       {post, post, height / 2});
          }
        }
        const int levels = std::max(1, static_cast<int>(height));
        for (int level = 0; level <= levels; ++level) {
          const double z = std::min(height, level * height / levels);
          append_box(mesh, {0, 0, std::max(0.025, z)}, {s / 2 * 0.95, s / 2 * 0.95, 0.025});
        }
        ObjectInstance obj;
        obj.geometry = std::move(mesh);
        obj.pose = {cell_center, orient};
        obj.material_id = material_for(scene, "rack");
        obj.dynamics = DynamicsClass::kStatic;
        add(std::move(obj));
        break;
      }
      case EntryType::kPallet: {
        if (blocked(1.0)) {
          result.skipped_entries.push_back(k);
          break;
        }
        const auto state = randomize_changeable(EntryType::kPallet, e.params, e.sub_seed);
        TriangleMesh mesh;
        append_box(mesh, {0, 0, 0.072}, {0.4 * s, 0.4 * s, 0.072});
        const int boxes = static_cast<int>(param_or(state, "box_count", 1));
        for (int b = 0; b < boxes; ++b) {
          const double dx = param_or(state, "box_" + std::to_string(b) + "_dx", 0.0) * s;
          const double dy = param_or(state, "box_" + std::to_string(b) + "_dy", 0.0) * s;
          append_box(mesh, {dx, dy, 0.144 + (b + 0.5) * 0.3}, {0.3 * s, 0.3 * s, 0.15});
        }
        ObjectInstance obj;
        obj.geometry = std::move(mesh);
        obj.pose = {cell_center, orient};
        obj.material_id = material_for(scene, "pallet");
        obj.dynamics = DynamicsClass::kMovable;
        add(std::move(obj));
        break;
      }
      case EntryType::kAnchor: {
        const double height = param_or(e.params, "height_m", 2.5);
        result.anchors.push_back({next_anchor_id++, cell_center + Vec3{0, 0, height}});
        break;
      }
      case EntryType::kFiducialMarker: {
        ObjectInstance obj;
        obj.geometry = BoxShape{{0.01, 0.2, 0.2}};
        obj.pose = {cell_center + Vec3{0, 0, 1.5}, orient};
        obj.material_id = material_for(scene, "marker");
        add(std::move(obj));
        break;
      }
      case EntryType::kDoor: {
        const auto state = randomize_changeable(EntryType::kDoor, e.params, e.sub_seed);
        const double open = std::clamp(param_or(state, "open_fraction", 0.0), 0.0, 1.0);
        const double hinge_yaw = param_or(e.params, "hinge_yaw_rad", 0.0);
        const double yaw = hinge_yaw + open * std::numbers::pi / 2;
        // Panel swings about the hinge at the cell edge.
        const Vec3 hinge = cell_center + Quat::from_yaw(hinge_yaw).rotate(Vec3{-s / 2, 0, 0});
        const Quat q = Quat::from_yaw(yaw);
        ObjectInstance obj;
        obj.geometry = BoxShape{{s / 2 * 0.95, 0.03, 1.0}};
        obj.pose = {hinge + q.rotate(Vec3{s / 2, 0, 0}) + Vec3{0, 0, 1.0}, q};
        obj.material_id = material_for(scene, "door");
        obj.dynamics = DynamicsClass::kMovable;
        add(std::move(obj));
        break;
      }
      case EntryType::kConveyor: {
        if (blocked(0.8)) {
          result.skipped_entries.push_back(k);
          break;
        }
        ObjectInstance obj;
        obj.geometry = BoxShape{{s / 2, s / 4, 0.4}};
        obj.pose = {cell_center + Vec3{0, 0, 0.4}, orient};
        obj.material_id = material_for(scene, "conveyor");
        obj.dynamics = DynamicsClass::kDynamic;
        add(std::move(obj));
        break;
      }
    }
  }
  return result;
}

}  // namespace sensorforge::procgen
