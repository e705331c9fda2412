#include "sensorforge/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sensorforge::io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Plumbing

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(std::string_view s, const char* what) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{}) {
    throw std::runtime_error(std::string("cannot parse ") + what + " from '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{}) {
    throw std::runtime_error(std::string("cannot parse ") + what + " from '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

bool starts_with_digit(const std::string& s) {
  for (char c : s) {
    if (c == ' ' || c == '\t') continue;
    return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
  }
  return false;
}

Vec3 vec3_from(const json& j, const char* key) {
  if (!j.is_array() || j.size() != 3) {
    throw std::runtime_error(std::string("key '") + key + "' must be an array of 3 numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Pose pose_from(const json& j) {
  Pose pose;
  if (j.contains("position")) pose.position = vec3_from(j.at("position"), "position");
  if (j.contains("orientation")) {
    const json& q = j.at("orientation");
    if (!q.is_array() || q.size() != 4) {
      throw std::runtime_error("key 'orientation' must be [w, x, y, z]");
    }
    pose.orientation =
        Quat{q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>()}
            .normalized();
  } else if (j.contains("yaw")) {
    pose.orientation = Quat::from_yaw(j.at("yaw").get<double>());
  }
  return pose;
}

json pose_to_json(const Pose& pose) {
  json j;
  j["position"] = {pose.position.x, pose.position.y, pose.position.z};
  j["orientation"] = {pose.orientation.w, pose.orientation.x, pose.orientation.y,
                      pose.orientation.z};
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------
// Scene description

Scene parse_scene(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("scene file is not valid JSON: ") + e.what());
  }

  Scene scene;
  if (j.contains("materials")) {
    for (const json& jm : j.at("materials")) {
      Material m;
      if (!jm.contains("name")) throw std::runtime_error("material missing key 'name'");
      m.name = jm.at("name").get<std::string>();
      if (jm.contains("optical_reflectance")) {
        for (const auto& [band, rho] : jm.at("optical_reflectance").items()) {
          m.optical_reflectance[band] = rho.get<double>();
        }
      }
      m.acoustic_reflection_loss_db = jm.value("acoustic_reflection_loss_db", 0.0);
      m.rf_reflection_loss_db = jm.value("rf_reflection_loss_db", 0.0);
      m.rf_transmission_loss_db = jm.value("rf_transmission_loss_db", 0.0);
      scene.add_material(std::move(m));
    }
  }

  if (j.contains("objects")) {
    for (const json& jo : j.at("objects")) {
      ObjectInstance obj;
      obj.name = jo.value("name", "");
      if (jo.contains("id")) obj.object_id = jo.at("id").get<ObjectId>();

      if (!jo.contains("geometry")) {
        throw std::runtime_error("object '" + obj.name + "' missing key 'geometry'");
      }
      const json& jg = jo.at("geometry");
      const std::string type = jg.value("type", "");
      if (type == "box") {
        obj.geometry = BoxShape{vec3_from(jg.at("half_extents"), "half_extents")};
      } else if (type == "sphere") {
        obj.geometry = SphereShape{jg.at("radius").get<double>()};
      } else if (type == "plane") {
        obj.geometry = PlaneShape{normalized(vec3_from(jg.at("normal"), "normal")),
                                  jg.value("offset", 0.0)};
      } else if (type == "mesh") {
        TriangleMesh mesh;
        for (const json& v : jg.at("vertices")) mesh.vertices.push_back(vec3_from(v, "vertices"));
        for (const json& t : jg.at("triangles")) {
          if (!t.is_array() || t.size() != 3) {
            throw std::runtime_error("mesh triangles must be arrays of 3 indices");
          }
          mesh.triangles.push_back(
              {t[0].get<std::uint32_t>(), t[1].get<std::uint32_t>(), t[2].get<std::uint32_t>()});
        }
        obj.geometry = std::move(mesh);
      } else {
        throw std::runtime_error("object '" + obj.name + "': unknown geometry.type '" + type + "'");
      }

      if (jo.contains("pose")) obj.pose = pose_from(jo.at("pose"));
      if (jo.contains("material")) {
        const std::string mat = jo.at("material").get<std::string>();
        const auto id = scene.find_material(mat);
        if (!id) throw std::runtime_error("object '" + obj.name + "': unknown material '" + mat + "'");
        obj.material_id = *id;
      }
      const std::string dyn = jo.value("dynamics", "static");
      if (dyn == "static") {
        obj.dynamics = DynamicsClass::kStatic;
      } else if (dyn == "movable") {
        obj.dynamics = DynamicsClass::kMovable;
      } else if (dyn == "dynamic") {
        obj.dynamics = DynamicsClass::kDynamic;
      } else {
        throw std::runtime_error("object '" + obj.name + "': unknown dynamics '" + dyn + "'");
      }
      if (jo.contains("invisible_to")) {
        for (const json& s : jo.at("invisible_to")) {
          obj.invisible_to.push_back(scene.sensor_id(s.get<std::string>()));
        }
      }
      if (jo.contains("label")) {
        obj.label_id = scene.labels().register_label(jo.at("label").get<std::string>());
      }
      scene.add_object(std::move(obj));
    }
  }
  return scene;
}

Scene load_scene(const std::string& path) { return parse_scene(read_file(path)); }

// ---------------------------------------------------------------------------
// Label table

std::string label_table_to_csv(const LabelRegistry& registry) {
  std::string out = "name,label_id,r,g,b\n";
  for (LabelId id = 1; id <= registry.size(); ++id) {
    const Rgb888 c = LabelRegistry::color_of(id);
    out += registry.name_of(id) + "," + std::to_string(id) + "," + std::to_string(c.r) + "," +
           std::to_string(c.g) + "," + std::to_string(c.b) + "\n";
  }
  return out;
}

std::vector<LabelRow> parse_label_table_csv(const std::string& text) {
  std::vector<LabelRow> rows;
  bool first = true;
  for (const std::string& line : lines_of(text)) {
    if (first && line.rfind("name,", 0) == 0) {
      first = false;
      continue;  // header
    }
    first = false;
    // Names may contain commas; the four numeric fields come from the right.
    const auto fields = split(line, ',');
    if (fields.size() < 5) throw std::runtime_error("label table row too short: " + line);
    const std::size_t n = fields.size();
    LabelRow row;
    row.color.b = static_cast<std::uint8_t>(parse_u64(fields[n - 1], "b"));
    row.color.g = static_cast<std::uint8_t>(parse_u64(fields[n - 2], "g"));
    row.color.r = static_cast<std::uint8_t>(parse_u64(fields[n - 3], "r"));
    row.label_id = static_cast<LabelId>(parse_u64(fields[n - 4], "label_id"));
    row.name = fields[0];
    for (std::size_t i = 1; i + 4 < n; ++i) row.name += "," + fields[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

void save_label_table(const LabelRegistry& registry, const std::string& path) {
  write_file(path, label_table_to_csv(registry));
}

// ---------------------------------------------------------------------------
// Generation rules

procgen::GenerationRules parse_generation_rules(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("rules file is not valid JSON: ") + e.what());
  }
  procgen::GenerationRules rules;
  if (!j.contains("grid_width") || !j.contains("grid_height")) {
    throw std::runtime_error("rules file: 'grid_width' and 'grid_height' are required");
  }
  rules.grid_width = j.at("grid_width").get<int>();
  rules.grid_height = j.at("grid_height").get<int>();
  rules.cell_size_m = j.value("cell_size_m", 1.0);
  const std::string policy = j.value("wall_policy", "perimeter");
  if (policy == "perimeter") {
    rules.wall_policy = procgen::WallPolicy::kPerimeter;
  } else if (policy == "perimeter+partitions") {
    rules.wall_policy = procgen::WallPolicy::kPerimeterWithPartitions;
  } else {
    throw std::runtime_error("rules file: wall_policy must be 'perimeter' or 'perimeter+partitions'");
  }
  rules.partition_count = j.value("partition_count", 0);
  rules.rack_density = j.value("rack_density", 0.0);
  rules.pallet_density = j.value("pallet_density", 0.0);
  rules.rack_height_min_m = j.value("rack_height_min_m", 1.0);
  rules.rack_height_max_m = j.value("rack_height_max_m", 5.0);
  rules.anchor_count = j.value("anchor_count", 0);
  rules.marker_count = j.value("marker_count", 0);
  if (j.contains("allowed_types")) {
    for (const json& t : j.at("allowed_types")) {
      const auto type = procgen::entry_type_from(t.get<std::string>());
      if (!type) {
        throw std::runtime_error("rules file: unknown allowed_types entry '" +
                                 t.get<std::string>() + "'");
      }
      rules.allowed_types.insert(*type);
    }
  }
  rules.validate();
  return rules;
}

procgen::GenerationRules load_generation_rules(const std::string& path) {
  return parse_generation_rules(read_file(path));
}

// ---------------------------------------------------------------------------
// Placement lists

std::string placement_to_string(const procgen::PlacementList& list) {
  json j;
  j["master_seed"] = list.master_seed;
  j["cell_size_m"] = list.cell_size_m;
  json entries = json::array();
  for (const procgen::PlacementEntry& e : list.entries) {
    json je;
    je["type"] = procgen::to_string(e.type);
    if (e.pose) {
      je["pose"] = pose_to_json(*e.pose);
    } else {
      je["cell"] = {e.cell_i, e.cell_j};
    }
    if (!e.params.empty()) je["params"] = e.params;
    je["sub_seed"] = e.sub_seed;
    entries.push_back(std::move(je));
  }
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

procgen::PlacementList placement_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("placement file is not valid JSON: ") + e.what());
  }
  procgen::PlacementList list;
  list.master_seed = j.value("master_seed", std::uint64_t{0});
  list.cell_size_m = j.value("cell_size_m", 1.0);
  for (const json& je : j.value("entries", json::array())) {
    procgen::PlacementEntry e;
    const std::string type = je.value("type", "");
    const auto parsed = procgen::entry_type_from(type);
    if (!parsed) throw std::runtime_error("placement entry has unknown type '" + type + "'");
    e.type = *parsed;
    if (je.contains("pose")) {
      e.pose = pose_from(je.at("pose"));
    } else if (je.contains("cell")) {
      const json& c = je.at("cell");
      if (!c.is_array() || c.size() != 2) {
        throw std::runtime_error("placement entry key 'cell' must be [i, j]");
      }
      e.cell_i = c[0].get<int>();
      e.cell_j = c[1].get<int>();
    } else {
      throw std::runtime_error("placement entry needs either 'cell' or 'pose'");
    }
    if (je.contains("params")) {
      for (const auto& [key, value] : je.at("params").items()) e.params[key] = value.get<double>();
    }
    e.sub_seed = je.value("sub_seed", std::uint64_t{0});
    list.entries.push_back(std::move(e));
  }
  return list;
}

void save_placement(const procgen::PlacementList& list, const std::string& path) {
  write_file(path, placement_to_string(list));
}

procgen::PlacementList load_placement(const std::string& path) {
  return placement_from_string(read_file(path));
}

// ---------------------------------------------------------------------------
// Grid bitmaps / error maps

std::string bitmap_to_string(const procgen::GridBitmap& bitmap) {
  std::string out = std::to_string(bitmap.width) + " " + std::to_string(bitmap.height) + "\n";
  for (int j = 0; j < bitmap.height; ++j) {
    for (int i = 0; i < bitmap.width; ++i) {
      out += std::to_string(static_cast<int>(bitmap.at(i, j)));
      out += i + 1 < bitmap.width ? ' ' : '\n';
    }
  }
  return out;
}

procgen::GridBitmap bitmap_from_string(const std::string& text) {
  std::istringstream in(text);
  procgen::GridBitmap bitmap;
  if (!(in >> bitmap.width >> bitmap.height) || bitmap.width < 1 || bitmap.height < 1) {
    throw std::runtime_error("bitmap file must start with 'width height'");
  }
  bitmap.cells.resize(static_cast<std::size_t>(bitmap.width) * bitmap.height);
  for (auto& cell : bitmap.cells) {
    int code;
    if (!(in >> code)) throw std::runtime_error("bitmap file truncated");
    if (code < 0 || code > 8) throw std::runtime_error("bitmap code out of range: " + std::to_string(code));
    cell = static_cast<std::uint8_t>(code);
  }
  return bitmap;
}

void save_bitmap(const procgen::GridBitmap& bitmap, const std::string& path) {
  write_file(path, bitmap_to_string(bitmap));
}

procgen::GridBitmap load_bitmap(const std::string& path) {
  return bitmap_from_string(read_file(path));
}

std::string error_grid_to_string(const rf::ErrorGrid& grid) {
  std::string out = std::to_string(grid.width) + " " + std::to_string(grid.height) + "\n";
  for (int j = 0; j < grid.height; ++j) {
    for (int i = 0; i < grid.width; ++i) {
      out += format_double(grid.at(i, j));
      out += i + 1 < grid.width ? ' ' : '\n';
    }
  }
  return out;
}

rf::ErrorGrid error_grid_from_string(const std::string& text) {
  std::istringstream in(text);
  rf::ErrorGrid grid;
  if (!(in >> grid.width >> grid.height) || grid.width < 1 || grid.height < 1) {
    throw std::runtime_error("error map file must start with 'width height'");
  }
  grid.cells.resize(static_cast<std::size_t>(grid.width) * grid.height);
  for (auto& cell : grid.cells) {
    if (!(in >> cell)) throw std::runtime_error("error map file truncated");
  }
  return grid;
}

void save_error_grid(const rf::ErrorGrid& grid, const std::string& path) {
  write_file(path, error_grid_to_string(grid));
}

rf::ErrorGrid load_error_grid(const std::string& path) {
  return error_grid_from_string(read_file(path));
}

// ---------------------------------------------------------------------------
// Point clouds

namespace {
std::string point_line(const lidar::LidarReturn& p) {
  return format_double(p.x) + " " + format_double(p.y) + " " + format_double(p.z) + " " +
         format_double(p.intensity) + " " + std::to_string(p.label_id) + " " +
         format_double(p.timestamp_s) + "\n";
}

lidar::LidarReturn point_from_fields(const std::vector<std::string>& f, const std::string& line) {
  if (f.size() != 6) throw std::runtime_error("point line needs 6 fields: " + line);
  lidar::LidarReturn p;
  p.x = parse_double(f[0], "x");
  p.y = parse_double(f[1], "y");
  p.z = parse_double(f[2], "z");
  p.intensity = parse_double(f[3], "intensity");
  p.label_id = static_cast<LabelId>(parse_u64(f[4], "label_id"));
  p.timestamp_s = parse_double(f[5], "timestamp");
  return p;
}

std::vector<std::string> space_fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string field;
  while (in >> field) out.push_back(field);
  return out;
}
}  // namespace

std::string point_cloud_to_ascii(const std::vector<lidar::LidarReturn>& points) {
  std::string out;
  for (const auto& p : points) out += point_line(p);
  return out;
}

std::vector<lidar::LidarReturn> point_cloud_from_ascii(const std::string& text) {
  std::vector<lidar::LidarReturn> points;
  for (const std::string& line : lines_of(text)) {
    if (line[0] == '#') continue;
    points.push_back(point_from_fields(space_fields(line), line));
  }
  return points;
}

void save_point_cloud_ascii(const std::vector<lidar::LidarReturn>& points, const std::string& path) {
  write_file(path, point_cloud_to_ascii(points));
}

std::vector<lidar::LidarReturn> load_point_cloud_ascii(const std::string& path) {
  return point_cloud_from_ascii(read_file(path));
}

std::string point_cloud_to_pcd(const std::vector<lidar::LidarReturn>& points) {
  std::string out;
  out += "# .PCD v0.7 - Point Cloud Data file format\n";
  out += "VERSION 0.7\n";
  out += "FIELDS x y z intensity label timestamp\n";
  out += "SIZE 8 8 8 8 4 8\n";
  out += "TYPE F F F F U F\n";
  out += "COUNT 1 1 1 1 1 1\n";
  out += "WIDTH " + std::to_string(points.size()) + "\n";
  out += "HEIGHT 1\n";
  out += "VIEWPOINT 0 0 0 1 0 0 0\n";
  out += "POINTS " + std::to_string(points.size()) + "\n";
  out += "DATA ascii\n";
  for (const auto& p : points) out += point_line(p);
  return out;
}

std::vector<lidar::LidarReturn> point_cloud_from_pcd(const std::string& text) {
  std::vector<lidar::LidarReturn> points;
  bool in_data = false;
  std::size_t expected = 0;
  for (const std::string& line : lines_of(text)) {
    if (!in_data) {
      if (line[0] == '#') continue;
      const auto fields = space_fields(line);
      if (fields.empty()) continue;
      if (fields[0] == "POINTS" && fields.size() == 2) expected = parse_u64(fields[1], "POINTS");
      if (fields[0] == "DATA") {
        if (fields.size() != 2 || fields[1] != "ascii") {
          throw std::runtime_error("only 'DATA ascii' PCD files are supported");
        }
        in_data = true;
      }
      continue;
    }
    points.push_back(point_from_fields(space_fields(line), line));
  }
  if (!in_data) throw std::runtime_error("PCD file has no DATA section");
  if (expected != points.size()) {
    throw std::runtime_error("PCD point count mismatch: header says " + std::to_string(expected) +
                             ", data has " + std::to_string(points.size()));
  }
  return points;
}

void save_point_cloud_pcd(const std::vector<lidar::LidarReturn>& points, const std::string& path) {
  write_file(path, point_cloud_to_pcd(points));
}

std::vector<lidar::LidarReturn> load_point_cloud_pcd(const std::string& path) {
  return point_cloud_from_pcd(read_file(path));
}

// ---------------------------------------------------------------------------
// Echoes

std::string echoes_to_csv(const std::vector<echo::Echo>& echoes) {
  std::string out = "x,y,z,total_path_m,power_db,bounces\n";
  for (const auto& e : echoes) {
    out += format_double(e.point.x) + "," + format_double(e.point.y) + "," +
           format_double(e.point.z) + "," + format_double(e.total_path_m) + "," +
           format_double(e.power_db) + "," + std::to_string(e.bounce_count) + "\n";
  }
  return out;
}

std::vector<echo::Echo> echoes_from_csv(const std::string& text) {
  std::vector<echo::Echo> echoes;
  for (const std::string& line : lines_of(text)) {
    if (!starts_with_digit(line)) continue;  // header
    const auto f = split(line, ',');
    if (f.size() != 6) throw std::runtime_error("echo row needs 6 fields: " + line);
    echo::Echo e;
    e.point = {parse_double(f[0], "x"), parse_double(f[1], "y"), parse_double(f[2], "z")};
    e.total_path_m = parse_double(f[3], "total_path_m");
    e.power_db = parse_double(f[4], "power_db");
    e.bounce_count = static_cast<int>(parse_u64(f[5], "bounces"));
    e.arrival_direction = e.total_path_m > 0.0 ? e.point / (e.total_path_m * 0.5) : Vec3{1, 0, 0};
    echoes.push_back(std::move(e));
  }
  return echoes;
}

void save_echoes(const std::vector<echo::Echo>& echoes, const std::string& path) {
  write_file(path, echoes_to_csv(echoes));
}

std::vector<echo::Echo> load_echoes(const std::string& path) {
  return echoes_from_csv(read_file(path));
}

// ---------------------------------------------------------------------------
// Anchors

std::string anchors_to_csv(const std::vector<rf::Anchor>& anchors) {
  std::string out = "anchor_id,x,y,z\n";
  for (const auto& a : anchors) {
    out += std::to_string(a.anchor_id) + "," + format_double(a.position.x) + "," +
           format_double(a.position.y) + "," + format_double(a.position.z) + "\n";
  }
  return out;
}

std::vector<rf::Anchor> anchors_from_csv(const std::string& text) {
  std::vector<rf::Anchor> anchors;
  for (const std::string& line : lines_of(text)) {
    if (!starts_with_digit(line)) continue;
    const auto f = split(line, ',');
    if (f.size() != 4) throw std::runtime_error("anchor row needs 4 fields: " + line);
    rf::Anchor a;
    a.anchor_id = static_cast<std::uint32_t>(parse_u64(f[0], "anchor_id"));
    a.position = {parse_double(f[1], "x"), parse_double(f[2], "y"), parse_double(f[3], "z")};
    for (const auto& existing : anchors) {
      if (existing.anchor_id == a.anchor_id) {
        throw std::runtime_error("duplicate anchor id " + std::to_string(a.anchor_id));
      }
    }
    anchors.push_back(a);
  }
  return anchors;
}

void save_anchors(const std::vector<rf::Anchor>& anchors, const std::string& path) {
  write_file(path, anchors_to_csv(anchors));
}

std::vector<rf::Anchor> load_anchors(const std::string& path) {
  return anchors_from_csv(read_file(path));
}

// ---------------------------------------------------------------------------
// RF path dumps

namespace {
void append_az_el(std::string& out, const Vec3& dir) {
  out += "," + format_double(std::atan2(dir.y, dir.x));
  out += "," + format_double(std::asin(std::clamp(dir.z, -1.0, 1.0)));
}
}  // namespace

std::vector<RfPathRow> rf_path_rows(std::uint32_t anchor_id, const std::vector<rf::RfPath>& paths) {
  std::vector<RfPathRow> rows;
  rows.reserve(paths.size());
  for (const auto& p : paths) {
    RfPathRow row;
    row.anchor_id = anchor_id;
    row.tof_s = p.tof_s;
    row.aod_az = std::atan2(p.departure_dir.y, p.departure_dir.x);
    row.aod_el = std::asin(std::clamp(p.departure_dir.z, -1.0, 1.0));
    row.aoa_az = std::atan2(p.arrival_dir.y, p.arrival_dir.x);
    row.aoa_el = std::asin(std::clamp(p.arrival_dir.z, -1.0, 1.0));
    row.loss_db = p.path_loss_db;
    row.phase_rad = p.phase_rad;
    row.interactions = p.interaction_count;
    rows.push_back(row);
  }
  return rows;
}

std::string rf_paths_to_csv(const std::vector<RfPathRow>& rows) {
  std::string out = "anchor_id,tof_s,aod_az,aod_el,aoa_az,aoa_el,loss_db,phase_rad,interactions\n";
  for (const auto& r : rows) {
    out += std::to_string(r.anchor_id) + "," + format_double(r.tof_s);
    out += "," + format_double(r.aod_az) + "," + format_double(r.aod_el);
    out += "," + format_double(r.aoa_az) + "," + format_double(r.aoa_el);
    out += "," + format_double(r.loss_db) + "," + format_double(r.phase_rad) + "," +
           std::to_string(r.interactions) + "\n";
  }
  return out;
}

std::vector<RfPathRow> rf_paths_from_csv(const std::string& text) {
  std::vector<RfPathRow> rows;
  for (const std::string& line : lines_of(text)) {
    if (!starts_with_digit(line)) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) throw std::runtime_error("rf path row needs 9 fields: " + line);
    RfPathRow r;
    r.anchor_id = static_cast<std::uint32_t>(parse_u64(f[0], "anchor_id"));
    r.tof_s = parse_double(f[1], "tof_s");
    r.aod_az = parse_double(f[2], "aod_az");
    r.aod_el = parse_double(f[3], "aod_el");
    r.aoa_az = parse_double(f[4], "aoa_az");
    r.aoa_el = parse_double(f[5], "aoa_el");
    r.loss_db = parse_double(f[6], "loss_db");
    r.phase_rad = parse_double(f[7], "phase_rad");
    r.interactions = static_cast<int>(parse_u64(f[8], "interactions"));
    rows.push_back(r);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Trajectories

std::string trajectory_to_csv(const Trajectory& traj) {
  std::string out = "t,x,y,z,qw,qx,qy,qz\n";
  for (const auto& s : traj.samples()) {
    out += format_double(s.t) + "," + format_double(s.pose.position.x) + "," +
           format_double(s.pose.position.y) + "," + format_double(s.pose.position.z) + "," +
           format_double(s.pose.orientation.w) + "," + format_double(s.pose.orientation.x) + "," +
           format_double(s.pose.orientation.y) + "," + format_double(s.pose.orientation.z) + "\n";
  }
  return out;
}

Trajectory trajectory_from_csv(const std::string& text) {
  Trajectory traj;
  for (const std::string& line : lines_of(text)) {
    if (!starts_with_digit(line)) continue;
    const auto f = split(line, ',');
    if (f.size() != 8) throw std::runtime_error("trajectory row needs 8 fields: " + line);
    Pose pose;
    pose.position = {parse_double(f[1], "x"), parse_double(f[2], "y"), parse_double(f[3], "z")};
    pose.orientation = {parse_double(f[4], "qw"), parse_double(f[5], "qx"),
                        parse_double(f[6], "qy"), parse_double(f[7], "qz")};
    traj.record(parse_double(f[0], "t"), pose);
  }
  return traj;
}

void save_trajectory(const Trajectory& traj, const std::string& path) {
  write_file(path, trajectory_to_csv(traj));
}

Trajectory load_trajectory(const std::string& path) {
  return trajectory_from_csv(read_file(path));
}

}  // namespace sensorforge::io
