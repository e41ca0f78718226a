#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "focuseval/errors.hpp"
#include "focuseval/grid.hpp"
#include "focuseval/random.hpp"

namespace focuseval {

enum class Size : std::uint8_t { Small, Large };
enum class Color : std::uint8_t { Gray, Red, Blue, Green, Brown, Purple, Cyan, Yellow };
enum class Material : std::uint8_t { Rubber, Metal };
enum class Shape : std::uint8_t { Cube, Sphere, Cylinder };

/// Fixed attribute vocabulary. Names are unique across all four categories.
struct Vocab {
  static constexpr std::array<std::string_view, 2> sizes{"small", "large"};
  static constexpr std::array<std::string_view, 8> colors{"gray",   "red",    "blue", "green",
                                                          "brown",  "purple", "cyan", "yellow"};
  static constexpr std::array<std::string_view, 2> materials{"rubber", "metal"};
  static constexpr std::array<std::string_view, 3> shapes{"cube", "sphere", "cylinder"};
};

namespace detail {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::string_view, N>& names, std::string_view s) {
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == s) return static_cast<E>(i);
  return std::nullopt;
}

template <typename E, std::size_t N>
E parse_or_throw(const std::array<std::string_view, N>& names, std::string_view s, const char* what) {
  if (auto v = lookup<E>(names, s)) return *v;
  throw FormatError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

}  // namespace detail

inline std::string_view to_string(Size v) { return Vocab::sizes[static_cast<std::size_t>(v)]; }
inline std::string_view to_string(Color v) { return Vocab::colors[static_cast<std::size_t>(v)]; }
inline std::string_view to_string(Material v) { return Vocab::materials[static_cast<std::size_t>(v)]; }
inline std::string_view to_string(Shape v) { return Vocab::shapes[static_cast<std::size_t>(v)]; }

inline Size parse_size(std::string_view s) { return detail::parse_or_throw<Size>(Vocab::sizes, s, "size"); }
inline Color parse_color(std::string_view s) { return detail::parse_or_throw<Color>(Vocab::colors, s, "color"); }
inline Material parse_material(std::string_view s) {
  return detail::parse_or_throw<Material>(Vocab::materials, s, "material");
}
inline Shape parse_shape(std::string_view s) { return detail::parse_or_throw<Shape>(Vocab::shapes, s, "shape"); }

using ObjectId = std::uint32_t;

struct ObjectSpec {
  ObjectId id = 0;
  Size size = Size::Small;
  Color color = Color::Gray;
  Material material = Material::Rubber;
  Shape shape = Shape::Cube;
  int cx = 0;
  int cy = 0;
  int extent = 0;

  friend bool operator==(const ObjectSpec&, const ObjectSpec&) = default;
};

struct Scene {
  int width = 0;
  int height = 0;
  std::uint64_t seed = 0;
  std::vector<ObjectSpec> objects;

  const ObjectSpec* find(ObjectId id) const {
    auto it = std::find_if(objects.begin(), objects.end(), [id](const auto& o) { return o.id == id; });
    return it == objects.end() ? nullptr : &*it;
  }

  friend bool operator==(const Scene&, const Scene&) = default;
};

struct SceneConfig {
  int width = 192;
  int height = 192;
  int min_objects = 4;
  int max_objects = 10;
  int small_radius = 6;
  int large_radius = 11;
  int min_gap = 2;
  int placement_attempts = 10'000;

  int radius_for(Size s) const { return s == Size::Small ? small_radius : large_radius; }

  void validate() const {
    if (width <= 0 || height <= 0) throw InvalidArgument("canvas size must be positive");
    if (min_objects < 1 || max_objects < min_objects)
      throw InvalidArgument("object count range must satisfy 1 <= min <= max");
    if (small_radius < 1 || large_radius <= small_radius)
      throw InvalidArgument("radii must satisfy 1 <= small < large");
    if (min_gap < 0) throw InvalidArgument("min gap must be nonnegative");
    if (placement_attempts < 1) throw InvalidArgument("placement attempts must be positive");
    if (2 * (large_radius + 1) + 1 > std::min(width, height))
      throw InvalidArgument("canvas too small for a large object");
  }
};

/// Pixel-center membership in an object's footprint. `dx`, `dy` are offsets
/// from the object center in pixels.
///   cube     : axis-aligned square of half-width r
///   sphere   : disc of radius r
///   cylinder : upward-pointing equilateral triangle inscribed in the disc
inline bool footprint_contains(Shape shape, int r, int dx, int dy) {
  switch (shape) {
    case Shape::Cube:
      return std::abs(dx) <= r && std::abs(dy) <= r;
    case Shape::Sphere:
      return dx * dx + dy * dy <= r * r;
    case Shape::Cylinder:
      return 2 * dy <= r && std::sqrt(3.0) * std::abs(dx) - dy <= r;
  }
  return false;
}

/// Radius of the smallest disc around the center that holds the footprint.
inline double bounding_radius(Shape shape, int r) {
  return shape == Shape::Cube ? r * std::sqrt(2.0) : static_cast<double>(r);
}

/// Places objects by rejection sampling. Attributes are uniform over the
/// vocabulary; footprints keep a 1-pixel canvas margin and pairwise
/// bounding discs stay at least `min_gap` apart.
inline Scene generate_scene(const SceneConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  Scene scene{cfg.width, cfg.height, seed, {}};
  const auto count = static_cast<int>(rng.between(cfg.min_objects, cfg.max_objects));
  int attempts = 0;
  for (int k = 0; k < count; ++k) {
    ObjectSpec obj;
    obj.id = static_cast<ObjectId>(k + 1);
    obj.size = static_cast<Size>(rng.below(Vocab::sizes.size()));
    obj.color = static_cast<Color>(rng.below(Vocab::colors.size()));
    obj.material = static_cast<Material>(rng.below(Vocab::materials.size()));
    obj.shape = static_cast<Shape>(rng.below(Vocab::shapes.size()));
    obj.extent = cfg.radius_for(obj.size);
    const double reach = bounding_radius(obj.shape, obj.extent);
    for (;;) {
      if (++attempts > cfg.placement_attempts)
        throw PlacementExhausted("could not place " + std::to_string(count) + " objects within " +
                                 std::to_string(cfg.placement_attempts) + " attempts");
      obj.cx = static_cast<int>(rng.between(obj.extent + 1, cfg.width - 2 - obj.extent));
      obj.cy = static_cast<int>(rng.between(obj.extent + 1, cfg.height - 2 - obj.extent));
      const bool clear = std::all_of(scene.objects.begin(), scene.objects.end(), [&](const ObjectSpec& o) {
        const double need = reach + bounding_radius(o.shape, o.extent) + cfg.min_gap;
        return std::hypot(obj.cx - o.cx, obj.cy - o.cy) >= need;
      });
      if (clear) break;
    }
    scene.objects.push_back(obj);
  }
  return scene;
}

/// Label grid: 0 is background, k is object id k.
struct SegmentationMap {
  Grid<std::uint32_t> labels;

  std::size_t width() const { return labels.width(); }
  std::size_t height() const { return labels.height(); }

  friend bool operator==(const SegmentationMap&, const SegmentationMap&) = default;
};

inline SegmentationMap rasterize_segmentation(const Scene& scene) {
  SegmentationMap seg{Grid<std::uint32_t>(static_cast<std::size_t>(scene.width),
                                          static_cast<std::size_t>(scene.height), 0)};
  for (const auto& o : scene.objects) {
    const int y0 = std::max(0, o.cy - o.extent), y1 = std::min(scene.height - 1, o.cy + o.extent);
    const int x0 = std::max(0, o.cx - o.extent), x1 = std::min(scene.width - 1, o.cx + o.extent);
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x)
        if (footprint_contains(o.shape, o.extent, x - o.cx, y - o.cy)) seg.labels(y, x) = o.id;
  }
  return seg;
}

struct Pixel {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

/// Pixels labeled `id`, in row-major order.
inline std::vector<Pixel> object_pixels(const SegmentationMap& seg, ObjectId id) {
  std::vector<Pixel> out;
  if (id != 0) {
    for (std::size_t y = 0; y < seg.height(); ++y)
      for (std::size_t x = 0; x < seg.width(); ++x)
        if (seg.labels(y, x) == id) out.push_back({static_cast<int>(x), static_cast<int>(y)});
  }
  if (out.empty()) throw UnknownObject("object " + std::to_string(id) + " has no pixels in segmentation");
  return out;
}

/// Distinct nonzero labels in ascending order.
inline std::vector<ObjectId> object_ids(const SegmentationMap& seg) {
  std::vector<ObjectId> ids;
  for (auto v : seg.labels.values())
    if (v != 0) ids.push_back(v);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace focuseval
