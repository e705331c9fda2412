#include "sensorforge/rf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sensorforge/threading.hpp"

namespace sensorforge::rf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFaceEps = 1e-9;       // in-face slack, meters
constexpr double kEndpointEps = 1e-6;   // transmission hits this close to segment ends are the
                                        // reflectors themselves

double spreading_db(double len, double ref) {
  return len <= ref ? 0.0 : 20.0 * std::log10(len / ref);
}

Vec3 mirror(const Vec3& p, const Vec3& n, double offset) {
  return p - n * (2.0 * (dot(n, p) - offset));
}

}  // namespace

void RfConfig::validate() const {
  if (!(wavelength_m > 0.0)) throw std::invalid_argument("rf.wavelength must be > 0");
  if (!(speed_mps > 0.0)) throw std::invalid_argument("rf.speed must be > 0");
  if (max_interactions < 0) throw std::invalid_argument("rf.max_interactions must be >= 0");
  if (!(attenuation_floor_db > 0.0)) throw std::invalid_argument("rf.attenuation_floor must be > 0");
  if (!(spreading_ref_m > 0.0)) throw std::invalid_argument("rf.spreading_ref must be > 0");
}

RfTracer::RfTracer(const Scene& scene, RfConfig cfg) : scene_(scene), cfg_(cfg) {
  cfg_.validate();
  for (const ObjectInstance& obj : scene.objects()) {
    const double refl_loss = scene.material(obj.material_id).rf_reflection_loss_db;
    if (const auto* box = std::get_if<BoxShape>(&obj.geometry)) {
      const Mat3 rot = obj.pose.orientation.to_matrix();
      const Vec3 axes[3] = {rot * Vec3{1, 0, 0}, rot * Vec3{0, 1, 0}, rot * Vec3{0, 0, 1}};
      const Vec3 h = box->half_extents;
      for (int a = 0; a < 3; ++a) {
        for (double sign : {-1.0, 1.0}) {
          Face f;
          f.kind = Face::Kind::kRect;
          f.normal = axes[a] * sign;
          f.center = obj.pose.position + f.normal * h[a];
          f.offset = dot(f.normal, f.center);
          f.u_axis = axes[(a + 1) % 3];
          f.v_axis = axes[(a + 2) % 3];
          f.u_half = h[(a + 1) % 3];
          f.v_half = h[(a + 2) % 3];
          f.reflection_loss_db = refl_loss;
          faces_.push_back(f);
        }
      }
    } else if (const auto* mesh = std::get_if<TriangleMesh>(&obj.geometry)) {
      for (const auto& tri : mesh->triangles) {
        Face f;
        f.kind = Face::Kind::kTriangle;
        f.a = obj.pose.transform_point(mesh->vertices[tri[0]]);
        f.b = obj.pose.transform_point(mesh->vertices[tri[1]]);
        f.c = obj.pose.transform_point(mesh->vertices[tri[2]]);
        f.normal = normalized(cross(f.b - f.a, f.c - f.a));
        f.offset = dot(f.normal, f.a);
        f.reflection_loss_db = refl_loss;
        faces_.push_back(f);
      }
    } else if (const auto* plane = std::get_if<PlaneShape>(&obj.geometry)) {
      Face f;
      f.kind = Face::Kind::kInfinite;
      f.normal = normalized(obj.pose.rotate(plane->normal));
      f.offset = plane->offset + dot(f.normal, obj.pose.position);
      f.reflection_loss_db = refl_loss;
      faces_.push_back(f);
    }
    // Spheres transmit (handled by the segment walk) but host no specular image.
  }
}

bool RfTracer::point_in_face(const Face& face, const Vec3& p) const {
  switch (face.kind) {
    case Face::Kind::kInfinite:
      return true;
    case Face::Kind::kRect: {
      const Vec3 d = p - face.center;
      return std::abs(dot(d, face.u_axis)) <= face.u_half + kFaceEps &&
             std::abs(dot(d, face.v_axis)) <= face.v_half + kFaceEps;
    }
    case Face::Kind::kTriangle: {
      // Barycentric test in the triangle plane.
      const Vec3 v0 = face.b - face.a;
      const Vec3 v1 = face.c - face.a;
      const Vec3 v2 = p - face.a;
      const double d00 = dot(v0, v0), d01 = dot(v0, v1), d11 = dot(v1, v1);
      const double d20 = dot(v2, v0), d21 = dot(v2, v1);
      const double denom = d00 * d11 - d01 * d01;
      if (std::abs(denom) < 1e-300) return false;
      const double v = (d11 * d20 - d01 * d21) / denom;
      const double w = (d00 * d21 - d01 * d20) / denom;
      return v >= -kFaceEps && w >= -kFaceEps && v + w <= 1.0 + kFaceEps;
    }
  }
  return false;
}

// Attempts to realize the reflector sequence held in `chain` as a geometric
// path. chain[i].second is the anchor image mirrored through the last i+1
// chosen faces, so walking from the tag the j-th reflection aims at
// chain[size-j].second.
void RfTracer::close_path(const Vec3& tag, const Vec3& anchor,
                          const std::vector<std::pair<std::size_t, Vec3>>& chain,
                          double reflection_loss, std::vector<RfPath>& out) const {
  const std::size_t k = chain.size();
  const Vec3& unfolded_target = k == 0 ? anchor : chain.back().second;
  const double total_len = norm(unfolded_target - tag);
  if (total_len < 1e-9) return;

  double loss = spreading_db(total_len, cfg_.spreading_ref_m) + reflection_loss;
  if (loss > cfg_.attenuation_floor_db) return;

  std::vector<Vec3> waypoints;
  waypoints.reserve(k + 2);
  waypoints.push_back(tag);
  Vec3 current = tag;
  for (std::size_t j = 0; j < k; ++j) {
    const Face& face = faces_[chain[k - 1 - j].first];
    const Vec3& image = chain[k - 1 - j].second;
    const Vec3 seg = image - current;
    const double denom = dot(face.normal, seg);
    if (std::abs(denom) < 1e-14) return;
    const double s = (face.offset - dot(face.normal, current)) / denom;
    if (s <= 1e-12 || s >= 1.0 - 1e-12) return;  // must cross the plane properly
    const Vec3 x = current + seg * s;
    if (!point_in_face(face, x)) return;
    waypoints.push_back(x);
    current = x;
  }
  waypoints.push_back(anchor);

  // Straight transmissions along each leg add penetration loss. Entering a
  // closed shape counts once (the exit crossing is free); thin surfaces count
  // on every crossing.
  int interactions = static_cast<int>(k);
  for (std::size_t j = 0; j + 1 < waypoints.size(); ++j) {
    const Vec3 seg = waypoints[j + 1] - waypoints[j];
    const double len = norm(seg);
    if (len < 1e-9) return;
    const Vec3 dir = seg / len;
    for (const RayHit& hit : scene_.raycast_all(waypoints[j], dir, len)) {
      if (hit.distance <= kEndpointEps || hit.distance >= len - kEndpointEps) continue;
      const ObjectInstance* obj = scene_.find_object(hit.object_id);
      const bool closed = std::holds_alternative<BoxShape>(obj->geometry) ||
                          std::holds_alternative<SphereShape>(obj->geometry);
      if (closed && hit.backface) continue;  // leaving the volume
      loss += scene_.material(hit.material_id).rf_transmission_loss_db;
      if (++interactions > cfg_.max_interactions) return;
      if (loss > cfg_.attenuation_floor_db) return;
    }
  }

  RfPath path;
  path.waypoints = std::move(waypoints);
  path.total_length_m = total_len;
  path.tof_s = total_len / cfg_.speed_mps;
  path.departure_dir = normalized(path.waypoints[1] - path.waypoints[0]);
  path.arrival_dir = normalized(path.waypoints.back() - path.waypoints[path.waypoints.size() - 2]);
  path.path_loss_db = loss;
  path.reflection_count = static_cast<int>(k);
  path.interaction_count = interactions;
  path.phase_rad = std::fmod(kTwoPi * total_len / cfg_.wavelength_m +
                                 std::numbers::pi * static_cast<double>(k),
                             kTwoPi);
  out.push_back(std::move(path));
}

void RfTracer::enumerate(const Vec3& tag, const Vec3& anchor,
                         std::vector<std::pair<std::size_t, Vec3>>& chain, double reflection_loss,
                         std::vector<RfPath>& out) const {
  close_path(tag, anchor, chain, reflection_loss, out);
  if (static_cast<int>(chain.size()) >= cfg_.max_interactions) return;
  const Vec3 base = chain.empty() ? anchor : chain.back().second;
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    if (!chain.empty() && chain.back().first == f) continue;  // immediate repeat is degenerate
    const double next_loss = reflection_loss + faces_[f].reflection_loss_db;
    if (next_loss > cfg_.attenuation_floor_db) continue;
    chain.emplace_back(f, mirror(base, faces_[f].normal, faces_[f].offset));
    enumerate(tag, anchor, chain, next_loss, out);
    chain.pop_back();
  }
}

std::vector<RfPath> RfTracer::trace(const Vec3& tag, const Vec3& anchor) const {
  std::vector<RfPath> paths;
  std::vector<std::pair<std::size_t, Vec3>> chain;
  enumerate(tag, anchor, chain, 0.0, paths);
  return paths;
}

std::vector<RfPath> trace_paths(const Scene& scene, const Pose& tag_pose, const Anchor& anchor,
                                const RfConfig& cfg) {
  return RfTracer(scene, cfg).trace(tag_pose.position, anchor.position);
}

std::optional<double> measure_range(const std::vector<RfPath>& paths) {
  if (paths.empty()) return std::nullopt;
  const RfPath* best = &paths.front();
  for (const RfPath& p : paths) {
    if (p.path_loss_db < best->path_loss_db ||
        (p.path_loss_db == best->path_loss_db && p.total_length_m < best->total_length_m)) {
      best = &p;
    }
  }
  return best->total_length_m;
}

namespace {

// Eigenvalues of a symmetric 3x3 matrix (trigonometric method).
void sym3_eigenvalues(const double m[3][3], double eig[3]) {
  const double p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
  if (p1 == 0.0) {
    eig[0] = m[0][0];
    eig[1] = m[1][1];
    eig[2] = m[2][2];
    std::sort(eig, eig + 3);
    return;
  }
  const double q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
  const double p2 = (m[0][0] - q) * (m[0][0] - q) + (m[1][1] - q) * (m[1][1] - q) +
                    (m[2][2] - q) * (m[2][2] - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  double b[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) b[i][j] = (m[i][j] - (i == j ? q : 0.0)) / p;
  }
  const double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                      b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                      b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const double r = std::clamp(detb / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  eig[2] = q + 2.0 * p * std::cos(phi);
  eig[0] = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  eig[1] = 3.0 * q - eig[0] - eig[2];
  std::sort(eig, eig + 3);
}

bool solve3(const double a[3][3], const double rhs[3], double x[3]) {
  const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                     a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  if (std::abs(det) < 1e-300) return false;
  const double inv = 1.0 / det;
  x[0] = inv * (rhs[0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                a[0][1] * (rhs[1] * a[2][2] - a[1][2] * rhs[2]) +
                a[0][2] * (rhs[1] * a[2][1] - a[1][1] * rhs[2]));
  x[1] = inv * (a[0][0] * (rhs[1] * a[2][2] - a[1][2] * rhs[2]) -
                rhs[0] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                a[0][2] * (a[1][0] * rhs[2] - rhs[1] * a[2][0]));
  x[2] = inv * (a[0][0] * (a[1][1] * rhs[2] - rhs[1] * a[2][1]) -
                a[0][1] * (a[1][0] * rhs[2] - rhs[1] * a[2][0]) +
                rhs[0] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]));
  return true;
}

}  // namespace

MultilaterateResult multilaterate(const std::vector<Vec3>& anchors,
                                  const std::vector<double>& ranges, bool planar,
                                  double planar_z) {
  if (anchors.size() != ranges.size()) {
    throw std::invalid_argument("multilaterate: anchors and ranges must have equal size");
  }
  const std::size_t min_anchors = planar ? 3 : 4;
  if (anchors.size() < min_anchors) {
    throw std::invalid_argument("multilaterate: need at least " + std::to_string(min_anchors) +
                                " anchors");
  }

  MultilaterateResult result;
  Vec3 x{};
  for (const Vec3& a : anchors) x += a;
  x = x / static_cast<double>(anchors.size());
  if (planar) x.z = planar_z;

  const int dims = planar ? 2 : 3;
  for (int iter = 0; iter < 100; ++iter) {
    double jtj[3][3] = {};
    double jtr[3] = {};
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      const Vec3 diff = x - anchors[i];
      const double dist = std::max(norm(diff), 1e-12);
      const double row[3] = {diff.x / dist, diff.y / dist, diff.z / dist};
      const double resid = dist - ranges[i];
      for (int r = 0; r < dims; ++r) {
        for (int c = 0; c < dims; ++c) jtj[r][c] += row[r] * row[c];
        jtr[r] += row[r] * resid;
      }
    }

    // Rank / conditioning check on J^T J.
    double cond_sq;
    if (planar) {
      const double tr = jtj[0][0] + jtj[1][1];
      const double det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[0][1];
      const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
      const double lo = tr / 2.0 - disc;
      const double hi = tr / 2.0 + disc;
      if (lo <= 0.0) {
        result.degenerate = true;
        break;
      }
      cond_sq = hi / lo;
    } else {
      double eig[3];
      sym3_eigenvalues(jtj, eig);
      if (eig[0] <= 0.0) {
        result.degenerate = true;
        break;
      }
      cond_sq = eig[2] / eig[0];
    }
    if (std::sqrt(cond_sq) > 1e12) {
      result.degenerate = true;
      break;
    }

    double step[3] = {};
    if (planar) {
      const double det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[1][0];
      step[0] = -(jtr[0] * jtj[1][1] - jtj[0][1] * jtr[1]) / det;
      step[1] = -(jtj[0][0] * jtr[1] - jtr[0] * jtj[1][0]) / det;
    } else {
      const double rhs[3] = {-jtr[0], -jtr[1], -jtr[2]};
      if (!solve3(jtj, rhs, step)) {
        result.degenerate = true;
        break;
      }
    }

    x += Vec3{step[0], step[1], dims == 3 ? step[2] : 0.0};
    const double step_norm = std::sqrt(step[0] * step[0] + step[1] * step[1] + step[2] * step[2]);
    if (step_norm < 1e-9) break;
    result.iterations = iter + 1;
  }

  result.estimate = x;
  double ss = 0.0;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const double r = norm(x - anchors[i]) - ranges[i];
    ss += r * r;
  }
  result.rms_residual_m = std::sqrt(ss / static_cast<double>(anchors.size()));
  return result;
}

void GridSpec::validate() const {
  if (nx < 1 || ny < 1) throw std::invalid_argument("grid dimensions must be >= 1");
  if (!(cell_size_m > 0.0)) throw std::invalid_argument("grid cell size must be > 0");
}

namespace {

ErrorGrid error_map_impl(const Scene& scene, const std::vector<Anchor>& anchors,
                         const GridSpec& grid, const RfConfig& cfg, bool parallel) {
  grid.validate();
  ErrorGrid out;
  out.width = grid.nx;
  out.height = grid.ny;
  out.cells.assign(static_cast<std::size_t>(grid.nx) * grid.ny, ErrorGrid::kUnreachable);

  const RfTracer tracer(scene, cfg);
  const std::size_t need = grid.planar ? 3 : 4;
  const std::int64_t n_cells = static_cast<std::int64_t>(grid.nx) * grid.ny;

  auto eval_cell = [&](std::int64_t cell) {
    const int i = static_cast<int>(cell % grid.nx);
    const int j = static_cast<int>(cell / grid.nx);
    const Vec3 truth{grid.origin_x + (i + 0.5) * grid.cell_size_m,
                     grid.origin_y + (j + 0.5) * grid.cell_size_m, grid.z};
    if (scene.contains_point(truth)) return;  // inside blocking geometry

    std::vector<Vec3> reachable;
    std::vector<double> measured;
    for (const Anchor& anchor : anchors) {
      const auto range = measure_range(tracer.trace(truth, anchor.position));
      if (range) {
        reachable.push_back(anchor.position);
        measured.push_back(*range);
      }
    }
    if (reachable.size() < need) return;
    const MultilaterateResult fix = multilaterate(reachable, measured, grid.planar, grid.z);
    if (fix.degenerate) return;
    out.at(i, j) = norm(fix.estimate - truth);
  };

#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 4) num_threads(worker_count())
    for (std::int64_t cell = 0; cell < n_cells; ++cell) eval_cell(cell);
  }
#else
  parallel = false;
#endif
  if (!parallel) {
    for (std::int64_t cell = 0; cell < n_cells; ++cell) eval_cell(cell);
  }
  return out;
}

}  // namespace

ErrorGrid localization_error_map(const Scene& scene, const std::vector<Anchor>& anchors,
                                 const GridSpec& grid, const RfConfig& cfg) {
  return error_map_impl(scene, anchors, grid, cfg, true);
}

ErrorGrid localization_error_map_serial(const Scene& scene, const std::vector<Anchor>& anchors,
                                        const GridSpec& grid, const RfConfig& cfg) {
  return error_map_impl(scene, anchors, grid, cfg, false);
}

}  // namespace sensorforge::rf
