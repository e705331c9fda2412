#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sensorforge/bvh.hpp"
#include "sensorforge/geometry.hpp"

namespace sensorforge {

using ObjectId = std::uint32_t;
using MaterialId = std::uint32_t;
using LabelId = std::uint32_t;  // 24-bit instance label, 0 = unlabeled/miss
using SensorId = std::uint32_t;

struct Rgb888 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb888&) const = default;
};

// Per-instance label table. Every registration mints a fresh id whose RGB888
// color is the big-endian bit split of the id itself, so id <-> color is a
// bijection over the full 24-bit range.
class LabelRegistry {
 public:
  static constexpr std::uint32_t kCapacity = (1u << 24) - 1;

  LabelId register_label(std::string name);

  static Rgb888 color_of(LabelId id) {
    return {static_cast<std::uint8_t>((id >> 16) & 0xff), static_cast<std::uint8_t>((id >> 8) & 0xff),
            static_cast<std::uint8_t>(id & 0xff)};
  }
  static LabelId id_from_color(Rgb888 c) {
    return (static_cast<LabelId>(c.r) << 16) | (static_cast<LabelId>(c.g) << 8) | c.b;
  }

  bool contains(LabelId id) const { return id >= 1 && id <= names_.size(); }
  const std::string& name_of(LabelId id) const;
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;  // id = index + 1
};

struct Material {
  std::string name;
  std::map<std::string, double> optical_reflectance;  // band -> Lambertian rho in [0, 1]
  double acoustic_reflection_loss_db = 0.0;           // per bounce
  double rf_reflection_loss_db = 0.0;                 // per bounce
  double rf_transmission_loss_db = 0.0;               // per penetration

  // Lambertian rho for a band. A "*" entry answers any band; a material with
  // neither the band nor "*" reports failure to the caller.
  std::optional<double> reflectance(const std::string& band) const {
    auto it = optical_reflectance.find(band);
    if (it == optical_reflectance.end()) it = optical_reflectance.find("*");
    if (it == optical_reflectance.end()) return std::nullopt;
    return it->second;
  }

  void validate() const;  // throws std::invalid_argument on bad ranges
};

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;
};
struct BoxShape {
  Vec3 half_extents;
};
struct SphereShape {
  double radius = 0.0;
};
struct PlaneShape {
  Vec3 normal{0, 0, 1};  // local frame, normalized on validation
  double offset = 0.0;   // dot(normal, p) = offset
};
using Geometry = std::variant<TriangleMesh, BoxShape, SphereShape, PlaneShape>;

void validate_geometry(const Geometry& g);  // throws std::invalid_argument

enum class DynamicsClass { kStatic, kMovable, kDynamic };

struct ObjectInstance {
  ObjectId object_id = 0;  // 0 = let the scene assign one
  std::string name;
  Geometry geometry;
  Pose pose;
  MaterialId material_id = 0;
  LabelId label_id = 0;  // 0 = auto-register under `name` on insert
  DynamicsClass dynamics = DynamicsClass::kStatic;
  std::vector<SensorId> invisible_to;
};

struct RayHit {
  double distance = 0.0;
  Vec3 point;
  Vec3 normal;                   // unit, flipped toward the ray origin
  double incidence_angle = 0.0;  // [0, pi/2] between reversed ray and normal
  bool backface = false;         // geometric normal faced away from the ray
  ObjectId object_id = 0;
  MaterialId material_id = 0;
  LabelId label_id = 0;
};

struct RaycastFilter {
  SensorId sensor = 0;    // objects invisible to this sensor are skipped
  ObjectId ignore = 0;    // one object skipped outright (self-exclusion)
};

// Ray origins are pushed this far off a surface after a bounce to avoid
// re-hitting it.
constexpr double kSurfaceEpsilon = 1e-6;

// Ray-castable world: objects + materials + labels + a lazily rebuilt BVH.
// Immutable while sensors run (readers may raycast concurrently); mutations
// happen single-writer at the frame barrier.
class Scene {
 public:
  Scene();
  Scene(Scene&& other) noexcept;
  Scene& operator=(Scene&& other) noexcept;
  Scene(const Scene&) = delete;
  Scene& operator=(const Scene&) = delete;

  // --- materials ---
  MaterialId add_material(Material m);
  const Material& material(MaterialId id) const;
  std::optional<MaterialId> find_material(const std::string& name) const;
  std::size_t material_count() const { return materials_.size(); }

  // --- sensor name interning (for visibility masks) ---
  SensorId sensor_id(const std::string& name);
  std::optional<SensorId> find_sensor(const std::string& name) const;
  const std::vector<std::string>& sensor_names() const { return sensor_names_; }

  // --- labels ---
  LabelRegistry& labels() { return labels_; }
  const LabelRegistry& labels() const { return labels_; }

  // --- objects ---
  ObjectId add_object(ObjectInstance obj);
  void remove_object(ObjectId id);
  void set_object_pose(ObjectId id, const Pose& pose);
  const ObjectInstance* find_object(ObjectId id) const;
  const std::vector<ObjectInstance>& objects() const { return objects_; }

  // --- queries ---
  std::optional<RayHit> raycast(const Vec3& origin, const Vec3& direction, double max_range,
                                const RaycastFilter& filter = {}) const;

  // All hits along the ray up to max_range, sorted by distance. Grazing
  // duplicates from shared mesh edges are not filtered.
  std::vector<RayHit> raycast_all(const Vec3& origin, const Vec3& direction, double max_range,
                                  const RaycastFilter& filter = {}) const;

  std::vector<ObjectId> query_overlaps(const Aabb& box) const;

  // True when the point lies inside a closed shape (box or sphere). Meshes
  // and planes are treated as thin surfaces without an interior.
  bool contains_point(const Vec3& point) const;

  Aabb bounds() const;
  std::size_t accel_leaf_count() const;

 private:
  struct Prim {
    enum Kind : std::uint8_t { kTriangle, kBox, kSphere };
    Kind kind;
    std::uint32_t object_index;
    std::uint32_t tri_index;
  };
  struct ObjectCache {
    Mat3 rotation;        // local -> world
    Mat3 inv_rotation;    // world -> local
    std::vector<Vec3> world_verts;  // meshes only
    Vec3 sphere_center;
    Vec3 plane_normal;    // world frame
    double plane_offset = 0.0;
  };

  void refresh_cache(std::uint32_t index);
  void ensure_accel() const;
  bool intersect_prim(const Prim& prim, const Vec3& origin, const Vec3& dir, double tmax,
                      double& t_out, Vec3& geo_normal_out) const;
  RayHit make_hit(std::uint32_t object_index, const Vec3& origin, const Vec3& dir, double t,
                  const Vec3& geo_normal) const;

  std::vector<ObjectInstance> objects_;
  std::vector<ObjectCache> caches_;
  std::map<ObjectId, std::uint32_t> index_of_;
  ObjectId next_object_id_ = 1;

  std::vector<Material> materials_;
  std::map<std::string, MaterialId> material_by_name_;
  LabelRegistry labels_;
  std::vector<std::string> sensor_names_;

  // Acceleration data, rebuilt lazily after mutations.
  mutable Bvh bvh_;
  mutable std::vector<Prim> prims_;
  mutable std::vector<std::uint32_t> plane_objects_;
  mutable std::atomic<bool> accel_dirty_{true};
  mutable std::mutex accel_mutex_;
};

// Builds a scene from a full object list. Duplicate ids are rejected.
Scene build_scene(std::vector<ObjectInstance> objects);

}  // namespace sensorforge
