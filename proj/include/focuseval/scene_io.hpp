#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "focuseval/scene.hpp"
#include "focuseval/grid_io.hpp"

namespace focuseval {

inline nlohmann::ordered_json scene_to_json(const Scene& scene) {
  nlohmann::ordered_json objects = nlohmann::ordered_json::array();
  for (const auto& o : scene.objects) {
    objects.push_back({{"id", o.id},
                       {"size", to_string(o.size)},
                       {"color", to_string(o.color)},
                       {"material", to_string(o.material)},
                       {"shape", to_string(o.shape)},
                       {"cx", o.cx},
                       {"cy", o.cy},
                       {"extent", o.extent}});
  }
  return {{"width", scene.width}, {"height", scene.height}, {"seed", scene.seed}, {"objects", std::move(objects)}};
}

inline Scene scene_from_json(const nlohmann::json& j) {
  try {
    Scene scene;
    scene.width = j.at("width").get<int>();
    scene.height = j.at("height").get<int>();
    scene.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& o : j.at("objects")) {
      ObjectSpec spec;
      spec.id = o.at("id").get<ObjectId>();
      spec.size = parse_size(o.at("size").get<std::string>());
      spec.color = parse_color(o.at("color").get<std::string>());
      spec.material = parse_material(o.at("material").get<std::string>());
      spec.shape = parse_shape(o.at("shape").get<std::string>());
      spec.cx = o.at("cx").get<int>();
      spec.cy = o.at("cy").get<int>();
      spec.extent = o.at("extent").get<int>();
      scene.objects.push_back(spec);
    }
    return scene;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed scene: ") + e.what());
  }
}


inline void write_smap(std::ostream& out, const SegmentationMap& seg) {
  out << "SMAP 1 " << seg.width() << ' ' << seg.height() << '\n';
  for (std::size_t r = 0; r < seg.height(); ++r) {
    const auto row = seg.labels.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ' ';
      out << row[c];
    }
    out << '\n';
  }
}

inline SegmentationMap read_smap(std::istream& in) {
  const auto [w, h] = detail::read_grid_header(in, "SMAP");
  SegmentationMap seg{Grid<std::uint32_t>(w, h, 0)};
  detail::read_grid_rows(in, w, h, [&](std::size_t r, std::size_t c, std::string_view tok) {
    std::uint32_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
      throw FormatError("bad label '" + std::string(tok) + "'");
    seg.labels(r, c) = v;
  });
  return seg;
}

}  // namespace focuseval
