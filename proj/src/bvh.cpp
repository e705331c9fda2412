#include "sensorforge/bvh.hpp"

#include <algorithm>
#include <numeric>

namespace sensorforge {

namespace {
constexpr std::uint32_t kLeafSize = 4;
constexpr int kNumBins = 16;
constexpr int kMaxDepth = 48;  // traversal stack holds 64 entries
}  // namespace

void Bvh::clear() {
  nodes_.clear();
  order_.clear();
}

std::size_t Bvh::leaf_count() const {
  std::size_t n = 0;
  for (const Node& node : nodes_) n += node.count > 0 ? 1 : 0;
  return n;
}

void Bvh::build(const std::vector<Aabb>& prim_bounds) {
  clear();
  const std::uint32_t n = static_cast<std::uint32_t>(prim_bounds.size());
  if (n == 0) return;

  std::vector<Vec3> centroids(n);
  for (std::uint32_t i = 0; i < n; ++i) centroids[i] = prim_bounds[i].center();
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.reserve(2 * n);
  nodes_.emplace_back();
  build_into(0, prim_bounds, centroids, 0, n, 0);
}

std::uint32_t Bvh::build_into(std::uint32_t node_index, const std::vector<Aabb>& bounds,
                              const std::vector<Vec3>& centroids, std::uint32_t begin,
                              std::uint32_t end, int depth) {
  Aabb node_bounds;
  Aabb centroid_bounds;
  for (std::uint32_t i = begin; i < end; ++i) {
    node_bounds.expand(bounds[order_[i]]);
    centroid_bounds.expand(centroids[order_[i]]);
  }
  nodes_[node_index].bounds = node_bounds;

  const std::uint32_t count = end - begin;
  const Vec3 extent = centroid_bounds.extent();
  int axis = 0;
  if (extent.y > extent.x) axis = 1;
  if (extent.z > extent[axis]) axis = 2;

  const bool splittable = count > kLeafSize && depth < kMaxDepth && extent[axis] > 1e-12;
  if (!splittable) {
    nodes_[node_index].first = begin;
    nodes_[node_index].count = count;
    return node_index;
  }

  // Bin centroids along the widest axis and take the cheapest SAH split.
  struct Bin {
    Aabb bounds;
    std::uint32_t count = 0;
  };
  Bin bins[kNumBins];
  const double k = kNumBins / extent[axis];
  const double lo = centroid_bounds.lo[axis];
  auto bin_of = [&](std::uint32_t prim) {
    int b = static_cast<int>(k * (centroids[prim][axis] - lo));
    return std::clamp(b, 0, kNumBins - 1);
  };
  for (std::uint32_t i = begin; i < end; ++i) {
    Bin& bin = bins[bin_of(order_[i])];
    bin.bounds.expand(bounds[order_[i]]);
    bin.count++;
  }

  double right_area[kNumBins];
  std::uint32_t right_counts[kNumBins];
  Aabb acc;
  std::uint32_t rc = 0;
  for (int b = kNumBins - 1; b > 0; --b) {
    acc.expand(bins[b].bounds);
    rc += bins[b].count;
    right_area[b] = acc.surface_area();
    right_counts[b] = rc;
  }

  double best_cost = std::numeric_limits<double>::infinity();
  int best_split = -1;
  acc = Aabb{};
  std::uint32_t lc = 0;
  for (int b = 0; b < kNumBins - 1; ++b) {
    acc.expand(bins[b].bounds);
    lc += bins[b].count;
    if (lc == 0 || right_counts[b + 1] == 0) continue;
    const double cost = acc.surface_area() * lc + right_area[b + 1] * right_counts[b + 1];
    if (cost < best_cost) {
      best_cost = cost;
      best_split = b;
    }
  }

  std::uint32_t mid = begin + count / 2;
  if (best_split >= 0) {
    auto it = std::partition(order_.begin() + begin, order_.begin() + end,
                             [&](std::uint32_t prim) { return bin_of(prim) <= best_split; });
    mid = static_cast<std::uint32_t>(it - order_.begin());
    if (mid == begin || mid == end) mid = begin + count / 2;  // degenerate partition
  }

  // Reserve both children up front so the right child sits at left + 1.
  const std::uint32_t left = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  nodes_.emplace_back();
  nodes_[node_index].first = left;
  nodes_[node_index].count = 0;
  nodes_[node_index].axis = static_cast<std::uint8_t>(axis);
  build_into(left, bounds, centroids, begin, mid, depth + 1);
  build_into(left + 1, bounds, centroids, mid, end, depth + 1);
  return node_index;
}

}  // namespace sensorforge
