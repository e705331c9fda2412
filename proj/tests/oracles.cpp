#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oracles {

using namespace sensorforge;

namespace {

struct LocalHit {
  double t;
  Vec3 normal;  // geometric, world frame
};

// Face-by-face box intersection: each of the six faces is a bounded plane.
std::optional<LocalHit> box_hit(const Vec3& o, const Vec3& d, const Vec3& half) {
  std::optional<LocalHit> best;
  for (int axis = 0; axis < 3; ++axis) {
    for (double sign : {-1.0, 1.0}) {
      const double da = d[axis];
      if (std::abs(da) < 1e-15) continue;
      const double t = (sign * half[axis] - o[axis]) / da;
      if (t <= 0.0) continue;
      const Vec3 p = o + d * t;
      const int u = (axis + 1) % 3;
      const int v = (axis + 2) % 3;
      if (std::abs(p[u]) <= half[u] && std::abs(p[v]) <= half[v]) {
        if (!best || t < best->t) {
          Vec3 n{};
          if (axis == 0) n.x = sign;
          if (axis == 1) n.y = sign;
          if (axis == 2) n.z = sign;
          best = LocalHit{t, n};
        }
      }
    }
  }
  return best;
}

// Plane intersection followed by a barycentric inside test.
std::optional<LocalHit> triangle_hit(const Vec3& o, const Vec3& d, const Vec3& a, const Vec3& b,
                                     const Vec3& c) {
  const Vec3 n = cross(b - a, c - a);
  const double denom = dot(n, d);
  if (std::abs(denom) < 1e-15) return std::nullopt;
  const double t = dot(n, a - o) / denom;
  if (t <= 0.0) return std::nullopt;
  const Vec3 p = o + d * t;
  const Vec3 v0 = b - a, v1 = c - a, v2 = p - a;
  const double d00 = dot(v0, v0), d01 = dot(v0, v1), d11 = dot(v1, v1);
  const double d20 = dot(v2, v0), d21 = dot(v2, v1);
  const double det = d00 * d11 - d01 * d01;
  if (std::abs(det) < 1e-300) return std::nullopt;
  const double beta = (d11 * d20 - d01 * d21) / det;
  const double gamma = (d00 * d21 - d01 * d20) / det;
  if (beta < 0.0 || gamma < 0.0 || beta + gamma > 1.0) return std::nullopt;
  return LocalHit{t, normalized(n)};
}

std::optional<LocalHit> sphere_hit(const Vec3& o, const Vec3& d, const Vec3& center, double r) {
  const Vec3 oc = o - center;
  const double b = dot(oc, d);
  const double c = dot(oc, oc) - r * r;
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  const double s = std::sqrt(disc);
  double t = -b - s;
  if (t <= 0.0) t = -b + s;
  if (t <= 0.0) return std::nullopt;
  return LocalHit{t, (o + d * t - center) / r};
}

}  // namespace

std::optional<OracleHit> brute_force_raycast(const Scene& scene, const Vec3& origin,
                                             const Vec3& dir, double max_range,
                                             const RaycastFilter& filter) {
  std::optional<OracleHit> best;
  for (const ObjectInstance& obj : scene.objects()) {
    if (filter.ignore != 0 && obj.object_id == filter.ignore) continue;
    if (filter.sensor != 0 &&
        std::find(obj.invisible_to.begin(), obj.invisible_to.end(), filter.sensor) !=
            obj.invisible_to.end()) {
      continue;
    }

    std::optional<LocalHit> hit;
    if (const auto* mesh = std::get_if<TriangleMesh>(&obj.geometry)) {
      for (const auto& tri : mesh->triangles) {
        const auto h = triangle_hit(origin, dir, obj.pose.transform_point(mesh->vertices[tri[0]]),
                                    obj.pose.transform_point(mesh->vertices[tri[1]]),
                                    obj.pose.transform_point(mesh->vertices[tri[2]]));
        if (h && (!hit || h->t < hit->t)) hit = h;
      }
    } else if (const auto* box = std::get_if<BoxShape>(&obj.geometry)) {
      const Quat inv = obj.pose.orientation.conjugate();
      const Vec3 o_local = inv.rotate(origin - obj.pose.position);
      const Vec3 d_local = inv.rotate(dir);
      auto h = box_hit(o_local, d_local, box->half_extents);
      if (h) h->normal = obj.pose.orientation.rotate(h->normal);
      hit = h;
    } else if (const auto* sphere = std::get_if<SphereShape>(&obj.geometry)) {
      hit = sphere_hit(origin, dir, obj.pose.position, sphere->radius);
    } else if (const auto* plane = std::get_if<PlaneShape>(&obj.geometry)) {
      const Vec3 n = normalized(obj.pose.rotate(plane->normal));
      const double offset = plane->offset + dot(n, obj.pose.position);
      const double denom = dot(n, dir);
      if (std::abs(denom) > 1e-15) {
        const double t = (offset - dot(n, origin)) / denom;
        if (t > 0.0) hit = LocalHit{t, n};
      }
    }

    if (hit && hit->t <= max_range && (!best || hit->t < best->distance)) {
      OracleHit oh;
      oh.distance = hit->t;
      const bool backface = dot(hit->normal, dir) > 0.0;
      oh.normal = backface ? -hit->normal : hit->normal;
      oh.incidence_angle = std::acos(std::clamp(-dot(dir, oh.normal), 0.0, 1.0));
      oh.object_id = obj.object_id;
      oh.material_id = obj.material_id;
      oh.label_id = obj.label_id;
      best = oh;
    }
  }
  return best;
}

double limit_curve_lookup(const std::vector<std::pair<double, double>>& knots, double rho) {
  if (knots.empty()) throw std::invalid_argument("empty curve");
  if (rho <= knots.front().first) return knots.front().second;
  if (rho >= knots.back().first) return knots.back().second;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (rho <= knots[i].first) {
      const double u = (rho - knots[i - 1].first) / (knots[i].first - knots[i - 1].first);
      return knots[i - 1].second + u * (knots[i].second - knots[i - 1].second);
    }
  }
  return knots.back().second;
}

double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_stddev(const std::vector<double>& xs) {
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

// Regularized incomplete gamma by series (x < a + 1) or continued fraction.
double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q domain");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) {
    // P(a, x) series, return 1 - P.
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  // Lentz continued fraction for Q(a, x).
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double chi2_pvalue(double statistic, int dof) {
  return gamma_q(0.5 * dof, 0.5 * statistic);
}

Vec3 random_unit(Rng& rng) {
  const double z = rng.next_double(-1.0, 1.0);
  const double az = rng.next_double(0.0, 2.0 * std::numbers::pi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(az), r * std::sin(az), z};
}

Scene random_box_scene(int n_objects, std::uint64_t seed, double half_extent_of_world) {
  Rng rng(seed);
  Scene scene;
  for (int i = 0; i < n_objects; ++i) {
    ObjectInstance obj;
    obj.name = "box_" + std::to_string(i);
    obj.geometry = BoxShape{{rng.next_double(0.2, 2.0), rng.next_double(0.2, 2.0),
                             rng.next_double(0.2, 2.0)}};
    obj.pose.position = {rng.next_double(-half_extent_of_world, half_extent_of_world),
                         rng.next_double(-half_extent_of_world, half_extent_of_world),
                         rng.next_double(-half_extent_of_world, half_extent_of_world)};
    obj.pose.orientation = Quat::from_yaw(rng.next_double(0.0, 2.0 * std::numbers::pi));
    scene.add_object(std::move(obj));
  }
  return scene;
}

TriangleMesh random_triangle_soup(int triangles, Rng& rng, double r_min, double r_max) {
  TriangleMesh mesh;
  for (int t = 0; t < triangles; ++t) {
    const double az = rng.next_double(0.0, 2.0 * std::numbers::pi);
    const double r = rng.next_double(r_min, r_max);
    const Vec3 center{r * std::cos(az), r * std::sin(az), rng.next_double(-3.0, 6.0)};
    const std::uint32_t base = static_cast<std::uint32_t>(mesh.vertices.size());
    for (int v = 0; v < 3; ++v) {
      mesh.vertices.push_back(center + Vec3{rng.next_double(-0.6, 0.6), rng.next_double(-0.6, 0.6),
                                            rng.next_double(-0.6, 0.6)});
    }
    mesh.triangles.push_back({base, base + 1, base + 2});
  }
  return mesh;
}

Scene random_mixed_scene(int n_objects, std::uint64_t seed) {
  Rng rng(seed);
  Scene scene;
  for (int i = 0; i < n_objects; ++i) {
    ObjectInstance obj;
    obj.name = "obj_" + std::to_string(i);
    obj.pose.position = {rng.next_double(-40.0, 40.0), rng.next_double(-40.0, 40.0),
                         rng.next_double(-10.0, 10.0)};
    const std::uint64_t kind = rng.next_index(3);
    if (kind == 0) {
      obj.geometry = BoxShape{{rng.next_double(0.2, 2.0), rng.next_double(0.2, 2.0),
                               rng.next_double(0.2, 2.0)}};
      obj.pose.orientation =
          Quat::from_axis_angle(random_unit(rng), rng.next_double(0.0, std::numbers::pi));
    } else if (kind == 1) {
      obj.geometry = SphereShape{rng.next_double(0.2, 2.0)};
    } else {
      TriangleMesh mesh;
      const int tris = 2 + static_cast<int>(rng.next_index(6));
      for (int t = 0; t < tris; ++t) {
        const std::uint32_t base = static_cast<std::uint32_t>(mesh.vertices.size());
        const Vec3 c{rng.next_double(-2.0, 2.0), rng.next_double(-2.0, 2.0),
                     rng.next_double(-2.0, 2.0)};
        for (int v = 0; v < 3; ++v) {
          mesh.vertices.push_back(c + Vec3{rng.next_double(-1.0, 1.0), rng.next_double(-1.0, 1.0),
                                           rng.next_double(-1.0, 1.0)});
        }
        mesh.triangles.push_back({base, base + 1, base + 2});
      }
      obj.geometry = std::move(mesh);
      obj.pose.orientation = Quat::from_yaw(rng.next_double(0.0, 2.0 * std::numbers::pi));
    }
    scene.add_object(std::move(obj));
  }
  return scene;
}

}  // namespace oracles
