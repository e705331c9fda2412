#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sensorforge/scene.hpp"

namespace sensorforge::rf {

struct Anchor {
  std::uint32_t anchor_id = 0;
  Vec3 position;
};

struct RfConfig {
  double wavelength_m = 0.0;
  double speed_mps = 299'792'458.0;
  int max_interactions = 3;        // reflections + transmissions per path
  double attenuation_floor_db = 0.0;  // paths above this cumulative loss are pruned
  double spreading_ref_m = 1.0;

  void validate() const;
};

struct RfPath {
  std::vector<Vec3> waypoints;   // tag, interaction points..., anchor
  double total_length_m = 0.0;
  double tof_s = 0.0;            // total_length / c
  Vec3 departure_dir;            // unit, first segment (at the tag)
  Vec3 arrival_dir;              // unit, last segment (into the anchor)
  double path_loss_db = 0.0;
  double phase_rad = 0.0;        // (2 pi L / lambda + pi * reflections) mod 2 pi
  int interaction_count = 0;
  int reflection_count = 0;
};

// Multipath tracer. Specular paths are constructed exactly with the mirror
// image method over the scene's planar faces (box faces, mesh triangles,
// planes); straight transmissions through surfaces en route are accumulated
// as interactions with the material's penetration loss. Curved surfaces do
// not act as specular RF reflectors in this model.
class RfTracer {
 public:
  RfTracer(const Scene& scene, RfConfig cfg);

  std::vector<RfPath> trace(const Vec3& tag, const Vec3& anchor) const;
  std::size_t face_count() const { return faces_.size(); }

 private:
  struct Face {
    enum class Kind { kRect, kTriangle, kInfinite };
    Kind kind = Kind::kInfinite;
    Vec3 normal;       // unit, world frame
    double offset = 0.0;  // dot(normal, p) = offset
    Vec3 center, u_axis, v_axis;  // rect
    double u_half = 0.0, v_half = 0.0;
    Vec3 a, b, c;  // triangle
    double reflection_loss_db = 0.0;
  };

  bool point_in_face(const Face& face, const Vec3& p) const;
  void close_path(const Vec3& tag, const Vec3& anchor,
                  const std::vector<std::pair<std::size_t, Vec3>>& chain,
                  double reflection_loss, std::vector<RfPath>& out) const;
  void enumerate(const Vec3& tag, const Vec3& anchor,
                 std::vector<std::pair<std::size_t, Vec3>>& chain, double reflection_loss,
                 std::vector<RfPath>& out) const;

  const Scene& scene_;
  RfConfig cfg_;
  std::vector<Face> faces_;
};

// Convenience wrapper: prepares a tracer and traces one tag/anchor pair.
std::vector<RfPath> trace_paths(const Scene& scene, const Pose& tag_pose, const Anchor& anchor,
                                const RfConfig& cfg);

// Range measurement: length of the strongest (minimum-loss, ties broken by
// shorter length) path; empty input means no signal.
std::optional<double> measure_range(const std::vector<RfPath>& paths);

struct MultilaterateResult {
  Vec3 estimate;
  double rms_residual_m = 0.0;
  int iterations = 0;
  bool degenerate = false;
};

// Gauss-Newton least squares on sum (|x - a_i| - r_i)^2, initialized at the
// anchor centroid; stops when the step drops below 1e-9 m or after 100
// iterations. Planar mode fixes z and solves in the plane (>= 3 anchors);
// full mode needs >= 4. Rank-deficient geometry (condition > 1e12) comes
// back flagged degenerate.
MultilaterateResult multilaterate(const std::vector<Vec3>& anchors,
                                  const std::vector<double>& ranges, bool planar = false,
                                  double planar_z = 0.0);

struct GridSpec {
  double origin_x = 0.0, origin_y = 0.0;  // world corner of cell (0, 0)
  double z = 0.0;                          // evaluation height
  int nx = 0, ny = 0;
  double cell_size_m = 0.0;
  bool planar = false;

  void validate() const;
};

struct ErrorGrid {
  static constexpr double kUnreachable = -1.0;
  int width = 0, height = 0;
  std::vector<double> cells;  // row-major [j * width + i], meters or kUnreachable

  double at(int i, int j) const { return cells[static_cast<std::size_t>(j) * width + i]; }
  double& at(int i, int j) { return cells[static_cast<std::size_t>(j) * width + i]; }
};

// Localization error over the grid: per free cell, range against every anchor
// through the multipath tracer, multilaterate, and record the distance to the
// true cell center. Cells that are occupied, see too few anchors, or hit a
// degenerate solve are marked unreachable.
ErrorGrid localization_error_map(const Scene& scene, const std::vector<Anchor>& anchors,
                                 const GridSpec& grid, const RfConfig& cfg);
ErrorGrid localization_error_map_serial(const Scene& scene, const std::vector<Anchor>& anchors,
                                        const GridSpec& grid, const RfConfig& cfg);

}  // namespace sensorforge::rf
