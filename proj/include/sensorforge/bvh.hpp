#pragma once

#include <cstdint>
#include <vector>

#include "sensorforge/geometry.hpp"

namespace sensorforge {

// Binned-SAH bounding volume hierarchy over caller-owned primitives.
// The tree stores primitive indices only; intersection happens in the visitor.
class Bvh {
 public:
  void build(const std::vector<Aabb>& prim_bounds);
  void clear();
  bool empty() const { return nodes_.empty(); }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_count() const;

  // Ray traversal, near child first. visit(prim_index, tmax) returns the new
  // cull distance (return tmax unchanged to keep collecting).
  template <typename Visit>
  void traverse(const Vec3& origin, const Vec3& dir, double tmax, Visit&& visit) const {
    if (nodes_.empty()) return;
    const Vec3 inv{1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z};
    const bool neg[3] = {dir.x < 0.0, dir.y < 0.0, dir.z < 0.0};
    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& node = nodes_[stack[--top]];
      if (!node.bounds.hit_by(origin, inv, tmax)) continue;
      if (node.count > 0) {
        for (std::uint32_t i = 0; i < node.count; ++i) {
          tmax = visit(order_[node.first + i], tmax);
        }
      } else {
        // Push far child first so the near one pops next.
        if (neg[node.axis]) {
          stack[top++] = node.first;
          stack[top++] = node.first + 1;
        } else {
          stack[top++] = node.first + 1;
          stack[top++] = node.first;
        }
      }
    }
  }

  template <typename Visit>
  void query(const Aabb& box, Visit&& visit) const {
    if (nodes_.empty()) return;
    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& node = nodes_[stack[--top]];
      if (!node.bounds.overlaps(box)) continue;
      if (node.count > 0) {
        for (std::uint32_t i = 0; i < node.count; ++i) visit(order_[node.first + i]);
      } else {
        stack[top++] = node.first;
        stack[top++] = node.first + 1;
      }
    }
  }

 private:
  struct Node {
    Aabb bounds;
    std::uint32_t first = 0;  // leaf: offset into order_; inner: left child, right = first + 1
    std::uint32_t count = 0;  // > 0 marks a leaf
    std::uint8_t axis = 0;
  };

  std::uint32_t build_into(std::uint32_t node_index, const std::vector<Aabb>& bounds,
                           const std::vector<Vec3>& centroids, std::uint32_t begin,
                           std::uint32_t end, int depth);

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> order_;
};

}  // namespace sensorforge
