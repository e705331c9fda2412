#include "sensorforge/scene.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

namespace sensorforge {

// ---------------------------------------------------------------------------
// LabelRegistry

LabelId LabelRegistry::register_label(std::string name) {
  if (names_.size() >= kCapacity) {
    throw std::length_error("label registry full: 2^24-1 labels already registered");
  }
  names_.push_back(std::move(name));
  return static_cast<LabelId>(names_.size());
}

const std::string& LabelRegistry::name_of(LabelId id) const {
  if (!contains(id)) throw std::out_of_range("unknown label id " + std::to_string(id));
  return names_[id - 1];
}

// ---------------------------------------------------------------------------
// Validation

void Material::validate() const {
  for (const auto& [band, rho] : optical_reflectance) {
    if (!(rho >= 0.0 && rho <= 1.0)) {
      throw std::invalid_argument("material '" + name + "': reflectance for band '" + band +
                                  "' outside [0,1]");
    }
  }
  if (acoustic_reflection_loss_db < 0.0 || rf_reflection_loss_db < 0.0 ||
      rf_transmission_loss_db < 0.0) {
    throw std::invalid_argument("material '" + name + "': losses must be >= 0 dB");
  }
}

void validate_geometry(const Geometry& g) {
  if (const auto* mesh = std::get_if<TriangleMesh>(&g)) {
    const std::size_t n = mesh->vertices.size();
    for (const auto& tri : mesh->triangles) {
      if (tri[0] >= n || tri[1] >= n || tri[2] >= n) {
        throw std::invalid_argument("mesh triangle index out of range");
      }
      const Vec3 e1 = mesh->vertices[tri[1]] - mesh->vertices[tri[0]];
      const Vec3 e2 = mesh->vertices[tri[2]] - mesh->vertices[tri[0]];
      if (0.5 * norm(cross(e1, e2)) <= 1e-12) {
        throw std::invalid_argument("degenerate mesh triangle (area <= 1e-12 m^2)");
      }
    }
  } else if (const auto* box = std::get_if<BoxShape>(&g)) {
    if (!(box->half_extents.x > 0.0 && box->half_extents.y > 0.0 && box->half_extents.z > 0.0)) {
      throw std::invalid_argument("box half-extents must be > 0");
    }
  } else if (const auto* sphere = std::get_if<SphereShape>(&g)) {
    if (!(sphere->radius > 0.0)) throw std::invalid_argument("sphere radius must be > 0");
  } else if (const auto* plane = std::get_if<PlaneShape>(&g)) {
    if (!(norm(plane->normal) > 0.0)) throw std::invalid_argument("plane normal must be nonzero");
  }
}

// ---------------------------------------------------------------------------
// Primitive intersection helpers

namespace {

// Moeller-Trumbore, two-sided, inclusive barycentric bounds.
bool ray_triangle(const Vec3& o, const Vec3& d, const Vec3& a, const Vec3& b, const Vec3& c,
                  double tmax, double& t_out, Vec3& n_out) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 pvec = cross(d, e2);
  const double det = dot(e1, pvec);
  if (std::abs(det) < 1e-14) return false;
  const double inv_det = 1.0 / det;
  const Vec3 tvec = o - a;
  const double u = dot(tvec, pvec) * inv_det;
  if (u < 0.0 || u > 1.0) return false;
  const Vec3 qvec = cross(tvec, e1);
  const double v = dot(d, qvec) * inv_det;
  if (v < 0.0 || u + v > 1.0) return false;
  const double t = dot(e2, qvec) * inv_det;
  if (t <= 0.0 || t > tmax) return false;
  t_out = t;
  n_out = normalized(cross(e1, e2));
  return true;
}

// Slab intersection in the box local frame. Reports entry and exit distances
// with outward face normals; either may be skipped when non-positive.
bool ray_box_span(const Vec3& o, const Vec3& d, const Vec3& half, double& t_enter, double& t_exit,
                  Vec3& n_enter, Vec3& n_exit) {
  double tnear = -std::numeric_limits<double>::infinity();
  double tfar = std::numeric_limits<double>::infinity();
  int near_axis = -1, far_axis = -1;
  for (int a = 0; a < 3; ++a) {
    const double da = d[a], oa = o[a], h = half[a];
    if (std::abs(da) < 1e-300) {
      if (std::abs(oa) > h) return false;
      continue;
    }
    double t0 = (-h - oa) / da;
    double t1 = (h - oa) / da;
    if (t0 > t1) std::swap(t0, t1);
    if (t0 > tnear) {
      tnear = t0;
      near_axis = a;
    }
    if (t1 < tfar) {
      tfar = t1;
      far_axis = a;
    }
  }
  if (tnear > tfar || far_axis < 0) return false;
  auto face_normal = [](int axis, double sign) {
    Vec3 n;
    if (axis == 0) n.x = sign;
    if (axis == 1) n.y = sign;
    if (axis == 2) n.z = sign;
    return n;
  };
  t_enter = tnear;
  t_exit = tfar;
  n_enter = near_axis >= 0 ? face_normal(near_axis, d[near_axis] > 0.0 ? -1.0 : 1.0) : Vec3{};
  n_exit = face_normal(far_axis, d[far_axis] > 0.0 ? 1.0 : -1.0);
  return true;
}

bool ray_sphere_span(const Vec3& o, const Vec3& d, const Vec3& center, double radius,
                     double& t_enter, double& t_exit) {
  const Vec3 oc = o - center;
  const double b = dot(oc, d);
  const double c = norm_sq(oc) - radius * radius;
  const double disc = b * b - c;
  if (disc < 0.0) return false;
  const double s = std::sqrt(disc);
  t_enter = -b - s;
  t_exit = -b + s;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Scene

Scene::Scene() {
  // Material 0: perfect Lambertian fallback; "*" answers any band.
  Material def;
  def.name = "default";
  def.optical_reflectance["*"] = 1.0;
  materials_.push_back(std::move(def));
  material_by_name_["default"] = 0;
}

// Moves transfer the world and drop the acceleration cache; it is rebuilt on
// the next query.
Scene::Scene(Scene&& other) noexcept
    : objects_(std::move(other.objects_)),
      caches_(std::move(other.caches_)),
      index_of_(std::move(other.index_of_)),
      next_object_id_(other.next_object_id_),
      materials_(std::move(other.materials_)),
      material_by_name_(std::move(other.material_by_name_)),
      labels_(std::move(other.labels_)),
      sensor_names_(std::move(other.sensor_names_)) {}

Scene& Scene::operator=(Scene&& other) noexcept {
  objects_ = std::move(other.objects_);
  caches_ = std::move(other.caches_);
  index_of_ = std::move(other.index_of_);
  next_object_id_ = other.next_object_id_;
  materials_ = std::move(other.materials_);
  material_by_name_ = std::move(other.material_by_name_);
  labels_ = std::move(other.labels_);
  sensor_names_ = std::move(other.sensor_names_);
  accel_dirty_ = true;
  return *this;
}

MaterialId Scene::add_material(Material m) {
  m.validate();
  if (m.name.empty()) throw std::invalid_argument("material name must be non-empty");
  if (material_by_name_.contains(m.name)) {
    throw std::invalid_argument("duplicate material name '" + m.name + "'");
  }
  const MaterialId id = static_cast<MaterialId>(materials_.size());
  material_by_name_[m.name] = id;
  materials_.push_back(std::move(m));
  return id;
}

const Material& Scene::material(MaterialId id) const {
  if (id >= materials_.size()) throw std::out_of_range("unknown material id " + std::to_string(id));
  return materials_[id];
}

std::optional<MaterialId> Scene::find_material(const std::string& name) const {
  auto it = material_by_name_.find(name);
  if (it == material_by_name_.end()) return std::nullopt;
  return it->second;
}

SensorId Scene::sensor_id(const std::string& name) {
  for (std::size_t i = 0; i < sensor_names_.size(); ++i) {
    if (sensor_names_[i] == name) return static_cast<SensorId>(i + 1);
  }
  sensor_names_.push_back(name);
  return static_cast<SensorId>(sensor_names_.size());
}

std::optional<SensorId> Scene::find_sensor(const std::string& name) const {
  for (std::size_t i = 0; i < sensor_names_.size(); ++i) {
    if (sensor_names_[i] == name) return static_cast<SensorId>(i + 1);
  }
  return std::nullopt;
}

ObjectId Scene::add_object(ObjectInstance obj) {
  if (obj.object_id == 0) {
    obj.object_id = next_object_id_;
  } else if (index_of_.contains(obj.object_id)) {
    throw std::invalid_argument("duplicate object id " + std::to_string(obj.object_id));
  }
  next_object_id_ = std::max(next_object_id_, obj.object_id + 1);

  validate_geometry(obj.geometry);
  if (!obj.pose.orientation.is_unit()) {
    throw std::invalid_argument("object " + std::to_string(obj.object_id) +
                                ": orientation quaternion not unit length");
  }
  if (obj.material_id >= materials_.size()) {
    throw std::invalid_argument("object " + std::to_string(obj.object_id) +
                                ": unknown material id " + std::to_string(obj.material_id));
  }
  if (obj.label_id == 0) {
    obj.label_id = labels_.register_label(
        obj.name.empty() ? "object_" + std::to_string(obj.object_id) : obj.name);
  } else if (!labels_.contains(obj.label_id)) {
    throw std::invalid_argument("object " + std::to_string(obj.object_id) +
                                ": label id " + std::to_string(obj.label_id) + " not registered");
  }
  std::sort(obj.invisible_to.begin(), obj.invisible_to.end());
  obj.invisible_to.erase(std::unique(obj.invisible_to.begin(), obj.invisible_to.end()),
                         obj.invisible_to.end());

  const ObjectId id = obj.object_id;
  index_of_[id] = static_cast<std::uint32_t>(objects_.size());
  objects_.push_back(std::move(obj));
  caches_.emplace_back();
  refresh_cache(static_cast<std::uint32_t>(objects_.size() - 1));
  accel_dirty_ = true;
  return id;
}

void Scene::remove_object(ObjectId id) {
  auto it = index_of_.find(id);
  if (it == index_of_.end()) {
    throw std::invalid_argument("cannot remove unknown object id " + std::to_string(id));
  }
  const std::uint32_t index = it->second;
  const std::uint32_t last = static_cast<std::uint32_t>(objects_.size() - 1);
  if (index != last) {
    objects_[index] = std::move(objects_[last]);
    caches_[index] = std::move(caches_[last]);
    index_of_[objects_[index].object_id] = index;
  }
  objects_.pop_back();
  caches_.pop_back();
  index_of_.erase(it);
  accel_dirty_ = true;
}

void Scene::set_object_pose(ObjectId id, const Pose& pose) {
  auto it = index_of_.find(id);
  if (it == index_of_.end()) {
    throw std::invalid_argument("cannot move unknown object id " + std::to_string(id));
  }
  if (!pose.orientation.is_unit()) {
    throw std::invalid_argument("pose orientation quaternion not unit length");
  }
  objects_[it->second].pose = pose;
  refresh_cache(it->second);
  accel_dirty_ = true;
}

const ObjectInstance* Scene::find_object(ObjectId id) const {
  auto it = index_of_.find(id);
  return it == index_of_.end() ? nullptr : &objects_[it->second];
}

void Scene::refresh_cache(std::uint32_t index) {
  const ObjectInstance& obj = objects_[index];
  ObjectCache& cache = caches_[index];
  cache.rotation = obj.pose.orientation.to_matrix();
  cache.inv_rotation = cache.rotation.transposed();
  if (const auto* mesh = std::get_if<TriangleMesh>(&obj.geometry)) {
    cache.world_verts.resize(mesh->vertices.size());
    for (std::size_t i = 0; i < mesh->vertices.size(); ++i) {
      cache.world_verts[i] = obj.pose.transform_point(mesh->vertices[i]);
    }
  } else if (std::holds_alternative<SphereShape>(obj.geometry)) {
    cache.sphere_center = obj.pose.position;
  } else if (const auto* plane = std::get_if<PlaneShape>(&obj.geometry)) {
    const Vec3 n = normalized(obj.pose.rotate(plane->normal));
    cache.plane_normal = n;
    cache.plane_offset = plane->offset + dot(n, obj.pose.position);
  }
}

void Scene::ensure_accel() const {
  if (!accel_dirty_) return;
  std::lock_guard<std::mutex> lock(accel_mutex_);
  if (!accel_dirty_) return;

  prims_.clear();
  plane_objects_.clear();
  std::vector<Aabb> bounds;
  for (std::uint32_t i = 0; i < objects_.size(); ++i) {
    const ObjectInstance& obj = objects_[i];
    if (const auto* mesh = std::get_if<TriangleMesh>(&obj.geometry)) {
      for (std::uint32_t t = 0; t < mesh->triangles.size(); ++t) {
        Aabb b;
        for (int k = 0; k < 3; ++k) b.expand(caches_[i].world_verts[mesh->triangles[t][k]]);
        prims_.push_back({Prim::kTriangle, i, t});
        bounds.push_back(b);
      }
    } else if (const auto* box = std::get_if<BoxShape>(&obj.geometry)) {
      Aabb b;
      const Vec3& h = box->half_extents;
      for (int corner = 0; corner < 8; ++corner) {
        const Vec3 local{(corner & 1) ? h.x : -h.x, (corner & 2) ? h.y : -h.y,
                         (corner & 4) ? h.z : -h.z};
        b.expand(obj.pose.transform_point(local));
      }
      prims_.push_back({Prim::kBox, i, 0});
      bounds.push_back(b);
    } else if (const auto* sphere = std::get_if<SphereShape>(&obj.geometry)) {
      Aabb b;
      const Vec3 c = caches_[i].sphere_center;
      const double r = sphere->radius;
      b.expand(c - Vec3{r, r, r});
      b.expand(c + Vec3{r, r, r});
      prims_.push_back({Prim::kSphere, i, 0});
      bounds.push_back(b);
    } else {
      plane_objects_.push_back(i);
    }
  }
  bvh_.build(bounds);
  accel_dirty_ = false;
}

bool Scene::intersect_prim(const Prim& prim, const Vec3& origin, const Vec3& dir, double tmax,
                           double& t_out, Vec3& geo_normal_out) const {
  const ObjectInstance& obj = objects_[prim.object_index];
  const ObjectCache& cache = caches_[prim.object_index];
  switch (prim.kind) {
    case Prim::kTriangle: {
      const auto& tri = std::get<TriangleMesh>(obj.geometry).triangles[prim.tri_index];
      return ray_triangle(origin, dir, cache.world_verts[tri[0]], cache.world_verts[tri[1]],
                          cache.world_verts[tri[2]], tmax, t_out, geo_normal_out);
    }
    case Prim::kBox: {
      const Vec3 o_local = cache.inv_rotation * (origin - obj.pose.position);
      const Vec3 d_local = cache.inv_rotation * dir;
      double t_enter, t_exit;
      Vec3 n_enter, n_exit;
      if (!ray_box_span(o_local, d_local, std::get<BoxShape>(obj.geometry).half_extents, t_enter,
                        t_exit, n_enter, n_exit)) {
        return false;
      }
      double t = t_enter;
      Vec3 n = n_enter;
      if (t <= 0.0) {
        t = t_exit;
        n = n_exit;
      }
      if (t <= 0.0 || t > tmax) return false;
      t_out = t;
      geo_normal_out = cache.rotation * n;
      return true;
    }
    case Prim::kSphere: {
      const SphereShape& sphere = std::get<SphereShape>(obj.geometry);
      double t_enter, t_exit;
      if (!ray_sphere_span(origin, dir, cache.sphere_center, sphere.radius, t_enter, t_exit)) {
        return false;
      }
      double t = t_enter > 0.0 ? t_enter : t_exit;
      if (t <= 0.0 || t > tmax) return false;
      t_out = t;
      geo_normal_out = (origin + dir * t - cache.sphere_center) / sphere.radius;
      return true;
    }
  }
  return false;
}

RayHit Scene::make_hit(std::uint32_t object_index, const Vec3& origin, const Vec3& dir, double t,
                       const Vec3& geo_normal) const {
  const ObjectInstance& obj = objects_[object_index];
  RayHit hit;
  hit.distance = t;
  hit.point = origin + dir * t;
  hit.backface = dot(geo_normal, dir) > 0.0;
  hit.normal = hit.backface ? -geo_normal : geo_normal;
  hit.incidence_angle = std::acos(std::clamp(-dot(dir, hit.normal), 0.0, 1.0));
  hit.object_id = obj.object_id;
  hit.material_id = obj.material_id;
  hit.label_id = obj.label_id;
  return hit;
}

namespace {
bool filtered_out(const ObjectInstance& obj, const RaycastFilter& filter) {
  if (filter.ignore != 0 && obj.object_id == filter.ignore) return true;
  if (filter.sensor != 0 &&
      std::binary_search(obj.invisible_to.begin(), obj.invisible_to.end(), filter.sensor)) {
    return true;
  }
  return false;
}

void check_ray_args(const Vec3& direction, double max_range) {
  if (!is_unit(direction)) throw std::invalid_argument("raycast direction must be unit length");
  if (!(max_range > 0.0)) throw std::invalid_argument("raycast max_range must be > 0");
}
}  // namespace

std::optional<RayHit> Scene::raycast(const Vec3& origin, const Vec3& direction, double max_range,
                                     const RaycastFilter& filter) const {
  check_ray_args(direction, max_range);
  ensure_accel();

  double best_t = max_range;
  Vec3 best_normal;
  std::uint32_t best_object = 0;
  bool found = false;

  bvh_.traverse(origin, direction, max_range, [&](std::uint32_t prim_index, double tmax) {
    const Prim& prim = prims_[prim_index];
    if (filtered_out(objects_[prim.object_index], filter)) return tmax;
    double t;
    Vec3 n;
    if (intersect_prim(prim, origin, direction, tmax, t, n)) {
      best_t = t;
      best_normal = n;
      best_object = prim.object_index;
      found = true;
      return t;
    }
    return tmax;
  });

  for (std::uint32_t index : plane_objects_) {
    if (filtered_out(objects_[index], filter)) continue;
    const ObjectCache& cache = caches_[index];
    const double denom = dot(cache.plane_normal, direction);
    if (std::abs(denom) < 1e-14) continue;
    const double t = (cache.plane_offset - dot(cache.plane_normal, origin)) / denom;
    if (t > 0.0 && t <= best_t) {
      best_t = t;
      best_normal = cache.plane_normal;
      best_object = index;
      found = true;
    }
  }

  if (!found) return std::nullopt;
  return make_hit(best_object, origin, direction, best_t, best_normal);
}

std::vector<RayHit> Scene::raycast_all(const Vec3& origin, const Vec3& direction, double max_range,
                                       const RaycastFilter& filter) const {
  check_ray_args(direction, max_range);
  ensure_accel();

  std::vector<RayHit> hits;
  bvh_.traverse(origin, direction, max_range, [&](std::uint32_t prim_index, double tmax) {
    const Prim& prim = prims_[prim_index];
    const ObjectInstance& obj = objects_[prim.object_index];
    if (filtered_out(obj, filter)) return tmax;
    const ObjectCache& cache = caches_[prim.object_index];
    switch (prim.kind) {
      case Prim::kTriangle: {
        double t;
        Vec3 n;
        if (intersect_prim(prim, origin, direction, tmax, t, n)) {
          hits.push_back(make_hit(prim.object_index, origin, direction, t, n));
        }
        break;
      }
      case Prim::kBox: {
        const Vec3 o_local = cache.inv_rotation * (origin - obj.pose.position);
        const Vec3 d_local = cache.inv_rotation * direction;
        double t_enter, t_exit;
        Vec3 n_enter, n_exit;
        if (ray_box_span(o_local, d_local, std::get<BoxShape>(obj.geometry).half_extents, t_enter,
                         t_exit, n_enter, n_exit)) {
          if (t_enter > 0.0 && t_enter <= tmax) {
            hits.push_back(
                make_hit(prim.object_index, origin, direction, t_enter, cache.rotation * n_enter));
          }
          if (t_exit > 0.0 && t_exit <= tmax && t_exit != t_enter) {
            hits.push_back(
                make_hit(prim.object_index, origin, direction, t_exit, cache.rotation * n_exit));
          }
        }
        break;
      }
      case Prim::kSphere: {
        const SphereShape& sphere = std::get<SphereShape>(obj.geometry);
        double t_enter, t_exit;
        if (ray_sphere_span(origin, direction, cache.sphere_center, sphere.radius, t_enter,
                            t_exit)) {
          for (double t : {t_enter, t_exit}) {
            if (t > 0.0 && t <= tmax) {
              const Vec3 n = (origin + direction * t - cache.sphere_center) / sphere.radius;
              hits.push_back(make_hit(prim.object_index, origin, direction, t, n));
            }
          }
        }
        break;
      }
    }
    return tmax;  // collect everything, never tighten
  });

  for (std::uint32_t index : plane_objects_) {
    if (filtered_out(objects_[index], filter)) continue;
    const ObjectCache& cache = caches_[index];
    const double denom = dot(cache.plane_normal, direction);
    if (std::abs(denom) < 1e-14) continue;
    const double t = (cache.plane_offset - dot(cache.plane_normal, origin)) / denom;
    if (t > 0.0 && t <= max_range) {
      hits.push_back(make_hit(index, origin, direction, t, cache.plane_normal));
    }
  }

  std::sort(hits.begin(), hits.end(),
            [](const RayHit& a, const RayHit& b) { return a.distance < b.distance; });
  return hits;
}

std::vector<ObjectId> Scene::query_overlaps(const Aabb& box) const {
  ensure_accel();
  std::vector<ObjectId> ids;
  bvh_.query(box, [&](std::uint32_t prim_index) {
    const ObjectId id = objects_[prims_[prim_index].object_index].object_id;
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  });
  for (std::uint32_t index : plane_objects_) {
    const ObjectCache& cache = caches_[index];
    // Plane overlaps the box when the box straddles it.
    const Vec3 c = box.center();
    const Vec3 e = box.extent() * 0.5;
    const double dist = dot(cache.plane_normal, c) - cache.plane_offset;
    const double radius = std::abs(cache.plane_normal.x) * e.x +
                          std::abs(cache.plane_normal.y) * e.y +
                          std::abs(cache.plane_normal.z) * e.z;
    if (std::abs(dist) <= radius) {
      const ObjectId id = objects_[index].object_id;
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
  }
  return ids;
}

bool Scene::contains_point(const Vec3& point) const {
  ensure_accel();
  Aabb probe;
  probe.expand(point);
  bool inside = false;
  bvh_.query(probe, [&](std::uint32_t prim_index) {
    if (inside) return;
    const Prim& prim = prims_[prim_index];
    const ObjectInstance& obj = objects_[prim.object_index];
    if (prim.kind == Prim::kBox) {
      const Vec3 local = caches_[prim.object_index].inv_rotation * (point - obj.pose.position);
      const Vec3& h = std::get<BoxShape>(obj.geometry).half_extents;
      if (std::abs(local.x) <= h.x && std::abs(local.y) <= h.y && std::abs(local.z) <= h.z) {
        inside = true;
      }
    } else if (prim.kind == Prim::kSphere) {
      const SphereShape& sphere = std::get<SphereShape>(obj.geometry);
      if (norm(point - caches_[prim.object_index].sphere_center) <= sphere.radius) inside = true;
    }
  });
  return inside;
}

Aabb Scene::bounds() const {
  ensure_accel();
  Aabb b;
  for (std::uint32_t i = 0; i < objects_.size(); ++i) {
    const ObjectInstance& obj = objects_[i];
    if (std::holds_alternative<PlaneShape>(obj.geometry)) continue;
    if (const auto* mesh = std::get_if<TriangleMesh>(&obj.geometry)) {
      for (const Vec3& v : caches_[i].world_verts) b.expand(v);
    } else if (const auto* box = std::get_if<BoxShape>(&obj.geometry)) {
      const Vec3& h = box->half_extents;
      for (int corner = 0; corner < 8; ++corner) {
        const Vec3 local{(corner & 1) ? h.x : -h.x, (corner & 2) ? h.y : -h.y,
                         (corner & 4) ? h.z : -h.z};
        b.expand(obj.pose.transform_point(local));
      }
    } else if (const auto* sphere = std::get_if<SphereShape>(&obj.geometry)) {
      const double r = sphere->radius;
      b.expand(caches_[i].sphere_center - Vec3{r, r, r});
      b.expand(caches_[i].sphere_center + Vec3{r, r, r});
    }
  }
  return b;
}

std::size_t Scene::accel_leaf_count() const {
  ensure_accel();
  return bvh_.leaf_count();
}

Scene build_scene(std::vector<ObjectInstance> objects) {
  Scene scene;
  for (auto& obj : objects) scene.add_object(std::move(obj));
  return scene;
}

}  // namespace sensorforge
