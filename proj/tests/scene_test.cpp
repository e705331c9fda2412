#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sensorforge/rng.hpp"
#include "sensorforge/scene.hpp"

using namespace sensorforge;

namespace {

ObjectInstance box_at(const Vec3& pos, const Vec3& half, const std::string& name = "box") {
  ObjectInstance obj;
  obj.name = name;
  obj.geometry = BoxShape{half};
  obj.pose.position = pos;
  return obj;
}

}  // namespace

TEST_SUITE_BEGIN("scene");

TEST_CASE("empty scene misses everywhere") {
  Scene scene = build_scene({});
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const Vec3 o{rng.next_double(-10, 10), rng.next_double(-10, 10), rng.next_double(-10, 10)};
    CHECK_FALSE(scene.raycast(o, oracles::random_unit(rng), 1000.0).has_value());
  }
}

TEST_CASE("single box becomes one BVH leaf") {
  std::vector<ObjectInstance> objects;
  objects.push_back(box_at({5, 0, 0}, {0.5, 0.5, 0.5}));
  Scene scene = build_scene(std::move(objects));
  CHECK(scene.accel_leaf_count() == 1);
}

TEST_CASE("axis-aligned box hit reports distance, normal, incidence") {
  std::vector<ObjectInstance> objects;
  objects.push_back(box_at({5, 0, 0}, {0.5, 0.5, 0.5}));
  Scene scene = build_scene(std::move(objects));

  const auto hit = scene.raycast({0, 0, 0}, {1, 0, 0}, 100.0);
  REQUIRE(hit.has_value());
  CHECK(hit->distance == doctest::Approx(4.5).epsilon(1e-12));
  CHECK(hit->normal.x == doctest::Approx(-1.0));
  CHECK(std::abs(hit->normal.y) < 1e-12);
  CHECK(hit->incidence_angle == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("per-sensor invisibility passes through to the next surface") {
  Scene scene;
  const SensorId lidar0 = scene.sensor_id("lidar0");

  ObjectInstance box = box_at({5, 0, 0}, {0.5, 0.5, 0.5});
  box.invisible_to = {lidar0};
  scene.add_object(std::move(box));

  ObjectInstance wall;
  wall.name = "wall";
  wall.geometry = PlaneShape{{-1, 0, 0}, -10.0};  // plane x = 10
  scene.add_object(std::move(wall));

  const auto filtered = scene.raycast({0, 0, 0}, {1, 0, 0}, 100.0, {lidar0, 0});
  REQUIRE(filtered.has_value());
  CHECK(filtered->distance == doctest::Approx(10.0));

  const auto unfiltered = scene.raycast({0, 0, 0}, {1, 0, 0}, 100.0);
  REQUIRE(unfiltered.has_value());
  CHECK(unfiltered->distance == doctest::Approx(4.5));
}

TEST_CASE("ray into empty half-space misses") {
  std::vector<ObjectInstance> objects;
  objects.push_back(box_at({5, 0, -3}, {0.5, 0.5, 0.5}));
  Scene scene = build_scene(std::move(objects));
  CHECK_FALSE(scene.raycast({0, 0, 0}, {0, 0, 1}, 1000.0).has_value());
}

TEST_CASE("non-unit direction is rejected") {
  Scene scene = build_scene({});
  CHECK_THROWS_AS(scene.raycast({0, 0, 0}, {1, 1, 0}, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(scene.raycast({0, 0, 0}, {1, 0, 0}, 0.0), std::invalid_argument);
}

TEST_CASE("duplicate object ids are rejected with the offending id") {
  Scene scene;
  ObjectInstance a = box_at({0, 0, 0}, {1, 1, 1}, "a");
  a.object_id = 7;
  scene.add_object(std::move(a));
  ObjectInstance b = box_at({5, 0, 0}, {1, 1, 1}, "b");
  b.object_id = 7;
  CHECK_THROWS_WITH_AS(scene.add_object(std::move(b)), doctest::Contains("7"),
                       std::invalid_argument);
}

TEST_CASE("label registry: bit-split colors and bijection") {
  LabelRegistry registry;
  CHECK(registry.register_label("first") == 1);
  CHECK(LabelRegistry::color_of(1) == Rgb888{0, 0, 1});

  // 24-bit decomposition: 70000 = 0x011170.
  CHECK(LabelRegistry::color_of(70000) == Rgb888{1, 17, 112});
  CHECK(LabelRegistry::id_from_color({1, 17, 112}) == 70000);

  // 300 registrations exceed the old 255-class ceiling with distinct colors.
  std::set<std::tuple<int, int, int>> colors;
  colors.insert({0, 0, 1});
  for (int i = 1; i < 300; ++i) {
    const LabelId id = registry.register_label("obj_" + std::to_string(i));
    const Rgb888 c = LabelRegistry::color_of(id);
    colors.insert({c.r, c.g, c.b});
  }
  CHECK(colors.size() == 300);

  // decode(encode(id)) = id across the range, including > 255.
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const LabelId id = 1 + static_cast<LabelId>(rng.next_index(LabelRegistry::kCapacity));
    CHECK(LabelRegistry::id_from_color(LabelRegistry::color_of(id)) == id);
  }
}

TEST_CASE("runtime add/remove changes raycast results") {
  Scene scene;
  const Vec3 dir{1, 0, 0};
  CHECK_FALSE(scene.raycast({0, 0, 0}, dir, 100.0).has_value());

  const ObjectId id = scene.add_object(box_at({5, 0, 0}, {0.5, 0.5, 0.5}));
  CHECK(scene.raycast({0, 0, 0}, dir, 100.0).has_value());

  scene.remove_object(id);
  CHECK_FALSE(scene.raycast({0, 0, 0}, dir, 100.0).has_value());

  CHECK_THROWS_AS(scene.remove_object(id), std::invalid_argument);
}

TEST_CASE("build-vs-mutate equivalence over 1000 runtime objects") {
  Rng rng(11);
  std::vector<ObjectInstance> objects;
  for (int i = 0; i < 1000; ++i) {
    ObjectInstance obj = box_at({rng.next_double(-50, 50), rng.next_double(-50, 50),
                                 rng.next_double(-50, 50)},
                                {rng.next_double(0.2, 1.5), rng.next_double(0.2, 1.5),
                                 rng.next_double(0.2, 1.5)},
                                "pallet_" + std::to_string(i));
    obj.object_id = static_cast<ObjectId>(i + 1);
    objects.push_back(obj);
  }

  Scene incremental;
  for (const auto& obj : objects) incremental.add_object(obj);
  Scene batch = build_scene(std::move(objects));

  Rng ray_rng(12);
  for (int i = 0; i < 2000; ++i) {
    const Vec3 o{ray_rng.next_double(-60, 60), ray_rng.next_double(-60, 60),
                 ray_rng.next_double(-60, 60)};
    const Vec3 d = oracles::random_unit(ray_rng);
    const auto a = incremental.raycast(o, d, 200.0);
    const auto b = batch.raycast(o, d, 200.0);
    REQUIRE(a.has_value() == b.has_value());
    if (a) {
      CHECK(a->object_id == b->object_id);
      CHECK(a->distance == doctest::Approx(b->distance).epsilon(1e-12));
    }
  }
}

TEST_CASE("BVH agrees with brute force on a 10k-triangle mesh") {
  Rng rng(21);
  Scene scene;
  ObjectInstance obj;
  obj.name = "soup";
  obj.geometry = oracles::random_triangle_soup(10000, rng);
  obj.pose.orientation = Quat::from_yaw(0.3);
  scene.add_object(std::move(obj));

  Rng ray_rng(22);
  int hits = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3 o{ray_rng.next_double(-5, 5), ray_rng.next_double(-5, 5), ray_rng.next_double(-2, 2)};
    const Vec3 d = oracles::random_unit(ray_rng);
    const auto fast = scene.raycast(o, d, 200.0);
    const auto slow = oracles::brute_force_raycast(scene, o, d, 200.0);
    REQUIRE(fast.has_value() == slow.has_value());
    if (fast) {
      ++hits;
      CHECK(fast->distance ==
            doctest::Approx(slow->distance).epsilon(1e-9));
    }
  }
  CHECK(hits > 100);  // the soup must actually be in the way for this to test anything
}

TEST_CASE("visibility filtering equals deletion") {
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    Scene scene = oracles::random_box_scene(50, 100 + trial, 20.0);
    const SensorId sensor = scene.sensor_id("s");
    const ObjectId victim = scene.objects()[trial * 7 % 50].object_id;

    Scene without = oracles::random_box_scene(50, 100 + trial, 20.0);
    without.remove_object(victim);

    // Mark the victim invisible in the original.
    ObjectInstance copy = *scene.find_object(victim);
    scene.remove_object(victim);
    copy.invisible_to = {sensor};
    copy.label_id = 0;  // fresh label in this registry
    scene.add_object(std::move(copy));

    for (int i = 0; i < 300; ++i) {
      const Vec3 o{rng.next_double(-25, 25), rng.next_double(-25, 25), rng.next_double(-25, 25)};
      const Vec3 d = oracles::random_unit(rng);
      const auto masked = scene.raycast(o, d, 100.0, {sensor, 0});
      const auto deleted = without.raycast(o, d, 100.0);
      REQUIRE(masked.has_value() == deleted.has_value());
      if (masked) {
        CHECK(masked->object_id == deleted->object_id);
        CHECK(masked->distance == doctest::Approx(deleted->distance).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("incidence angle is in [0, pi/2] with cos = |dot(-dir, normal)|") {
  Scene scene = oracles::random_mixed_scene(80, 41);
  Rng rng(42);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const Vec3 o{rng.next_double(-45, 45), rng.next_double(-45, 45), rng.next_double(-12, 12)};
    const Vec3 d = oracles::random_unit(rng);
    const auto hit = scene.raycast(o, d, 200.0);
    if (!hit) continue;
    ++checked;
    CHECK(hit->incidence_angle >= 0.0);
    CHECK(hit->incidence_angle <= std::numbers::pi / 2 + 1e-12);
    CHECK(std::cos(hit->incidence_angle) == doctest::Approx(std::abs(dot(-d, hit->normal))));
    CHECK(norm(hit->normal) == doctest::Approx(1.0));
    CHECK(dot(hit->normal, d) <= 1e-12);  // flipped toward the origin
  }
  CHECK(checked > 200);
}

TEST_CASE("degenerate geometry is rejected") {
  CHECK_THROWS_AS(validate_geometry(Geometry{BoxShape{{0.0, 1.0, 1.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_geometry(Geometry{SphereShape{0.0}}), std::invalid_argument);
  TriangleMesh degenerate;
  degenerate.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};  // collinear
  degenerate.triangles = {{0, 1, 2}};
  CHECK_THROWS_AS(validate_geometry(Geometry{std::move(degenerate)}), std::invalid_argument);
}

TEST_SUITE_END();
