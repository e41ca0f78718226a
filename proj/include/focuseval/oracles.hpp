#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <variant>

#include "focuseval/errors.hpp"
#include "focuseval/focus.hpp"
#include "focuseval/questions.hpp"
#include "focuseval/random.hpp"
#include "focuseval/scene.hpp"

namespace focuseval {

namespace oracle {
/// 1 on ground-truth object pixels.
struct Perfect {};
/// 1 on background pixels at Chebyshev distance [offset, offset + width)
/// from the ground-truth pixels: focus next to, never on, the objects.
struct Edge {
  int offset = 2;
  int width = 2;
};
/// iid Uniform(0, 1) per pixel, seeded per (seed, question id).
struct Random {
  std::uint64_t seed = 0;
};
/// 1 on every object's pixels.
struct AllObjects {};
/// 1 everywhere.
struct Uniform {};
}  // namespace oracle

using OracleKind = std::variant<oracle::Perfect, oracle::Edge, oracle::Random, oracle::AllObjects, oracle::Uniform>;

inline std::string oracle_name(const OracleKind& kind) {
  constexpr const char* names[] = {"perfect", "edge", "random", "all-objects", "uniform"};
  return names[kind.index()];
}

namespace detail {

/// Square (Chebyshev) dilation of a binary grid by `k` pixels.
inline Grid<std::uint8_t> dilate(const Grid<std::uint8_t>& in, int k) {
  const auto w = static_cast<int>(in.width()), h = static_cast<int>(in.height());
  Grid<std::uint8_t> horiz(in.width(), in.height(), 0), out(in.width(), in.height(), 0);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      for (int d = std::max(0, c - k); d <= std::min(w - 1, c + k) && !horiz(r, c); ++d) horiz(r, c) = in(r, d);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      for (int d = std::max(0, r - k); d <= std::min(h - 1, r + k) && !out(r, c); ++d) out(r, c) = horiz(d, c);
  return out;
}

}  // namespace detail

/// Builds a synthetic focus map for one question. Perfect and Edge need a
/// nonempty ground-truth set and throw EmptyTruth otherwise.
inline FocusMap synthesize(const Scene& scene, const SegmentationMap& seg, const GroundTruth& truth,
                           std::uint32_t question_id, const OracleKind& kind) {
  if (seg.width() != static_cast<std::size_t>(scene.width) || seg.height() != static_cast<std::size_t>(scene.height))
    throw DimensionMismatch("segmentation does not match scene canvas");
  const std::size_t w = seg.width(), h = seg.height();
  FocusMap fm{Grid<double>(w, h, 0.0)};

  auto is_truth = [&](std::uint32_t label) {
    return label != 0 && std::binary_search(truth.focused.begin(), truth.focused.end(), label);
  };
  auto need_truth = [&] {
    if (truth.focused.empty()) throw EmptyTruth("question " + std::to_string(question_id) + " has no focused objects");
  };

  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        const auto labels = seg.labels.values();
        auto vals = fm.values.values();
        if constexpr (std::is_same_v<K, oracle::Perfect>) {
          need_truth();
          for (std::size_t i = 0; i < labels.size(); ++i) vals[i] = is_truth(labels[i]) ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<K, oracle::Edge>) {
          if (k.offset < 1 || k.width < 1 || static_cast<std::size_t>(k.offset + k.width) > std::min(w, h))
            throw InvalidArgument("edge oracle needs offset >= 1, width >= 1 and a ring that fits the canvas");
          need_truth();
          Grid<std::uint8_t> mask(w, h, 0);
          auto mv = mask.values();
          for (std::size_t i = 0; i < labels.size(); ++i) mv[i] = is_truth(labels[i]) ? 1 : 0;
          const auto inner = detail::dilate(mask, k.offset - 1);
          const auto outer = detail::dilate(mask, k.offset + k.width - 1);
          const auto iv = inner.values(), ov = outer.values();
          for (std::size_t i = 0; i < labels.size(); ++i) vals[i] = (labels[i] == 0 && ov[i] && !iv[i]) ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<K, oracle::Random>) {
          Rng rng(derive_seed(k.seed, {question_id}));
          for (double& v : vals) v = rng.uniform();
        } else if constexpr (std::is_same_v<K, oracle::AllObjects>) {
          for (std::size_t i = 0; i < labels.size(); ++i) vals[i] = labels[i] != 0 ? 1.0 : 0.0;
        } else {
          std::fill(vals.begin(), vals.end(), 1.0);
        }
      },
      kind);
  return fm;
}

}  // namespace focuseval
