#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "focuseval/errors.hpp"
#include "focuseval/grid.hpp"
#include "focuseval/grid_io.hpp"
#include "focuseval/scene.hpp"

namespace focuseval {

/// Nonnegative, finite focus values at segmentation resolution.
struct FocusMap {
  Grid<double> values;

  std::size_t width() const { return values.width(); }
  std::size_t height() const { return values.height(); }

  friend bool operator==(const FocusMap&, const FocusMap&) = default;
};

inline void validate_focus_values(const Grid<double>& g) {
  for (double v : g.values())
    if (!std::isfinite(v) || v < 0.0) throw ValueError("focus values must be finite and nonnegative");
}

// --- FMAP ------------------------------------------------------------------

inline FocusMap load_focus_map(std::istream& in) {
  const auto [w, h] = detail::read_grid_header(in, "FMAP");
  FocusMap fm{Grid<double>(w, h, 0.0)};
  detail::read_grid_rows(in, w, h, [&](std::size_t r, std::size_t c, std::string_view tok) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec == std::errc::result_out_of_range) throw ValueError("focus value out of range: '" + std::string(tok) + "'");
    if (ec != std::errc{} || p != tok.data() + tok.size())
      throw FormatError("bad focus value '" + std::string(tok) + "'");
    if (!std::isfinite(v) || v < 0.0) throw ValueError("focus value must be finite and >= 0: '" + std::string(tok) + "'");
    fm.values(r, c) = v;
  });
  return fm;
}

/// Writes values in shortest round-trip form, so output bytes depend only on
/// the stored doubles.
inline void write_focus_map(std::ostream& out, const FocusMap& fm) {
  out << "FMAP 1 " << fm.width() << ' ' << fm.height() << '\n';
  char buf[64];
  for (std::size_t r = 0; r < fm.height(); ++r) {
    const auto row = fm.values.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ' ';
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, row[c]);
      out.write(buf, p - buf);
    }
    out << '\n';
  }
}

// --- scoring ---------------------------------------------------------------

/// Divides by the grid maximum so the largest value becomes exactly 1.
inline FocusMap normalize(const FocusMap& fm) {
  validate_focus_values(fm.values);
  const auto vals = fm.values.values();
  const double peak = vals.empty() ? 0.0 : *std::max_element(vals.begin(), vals.end());
  if (!(peak > 0.0)) throw NoSignal("focus map is all zero");
  FocusMap out = fm;
  for (double& v : out.values.values()) v /= peak;
  return out;
}

/// Mean focus over the object's pixels. A running mean keeps constant maps
/// exact: plain_score of F == c is c with no rounding.
inline double plain_score(const FocusMap& fm, const SegmentationMap& seg, ObjectId id) {
  if (!fm.values.same_shape(seg.labels)) throw DimensionMismatch("focus map and segmentation differ in size");
  double mean = 0.0;
  std::size_t n = 0;
  const auto labels = seg.labels.values();
  const auto vals = fm.values.values();
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] == id && id != 0) mean += (vals[k] - mean) / static_cast<double>(++n);
  }
  if (n == 0) throw UnknownObject("object " + std::to_string(id) + " not in segmentation");
  return mean;
}

struct BlurConfig {
  double sigma = 4.0;

  int truncation_radius() const { return std::max(1, static_cast<int>(std::ceil(3.0 * sigma))); }

  void validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be positive and finite");
  }
};

/// Truncated 1D Gaussian taps for offsets -R..R, summing to 1. The outer
/// product of two of these is the truncated 2D kernel renormalized to 1.
inline std::vector<double> gaussian_taps(const BlurConfig& cfg) {
  cfg.validate();
  const int radius = cfg.truncation_radius();
  std::vector<double> taps(2 * radius + 1);
  double total = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    taps[k + radius] = std::exp(-(k * k) / (2.0 * cfg.sigma * cfg.sigma));
    total += taps[k + radius];
  }
  for (double& t : taps) t /= total;
  return taps;
}

/// Separable Gaussian blur with zero padding outside the grid.
inline Grid<double> gaussian_blur(const Grid<double>& in, const BlurConfig& cfg) {
  const auto taps = gaussian_taps(cfg);
  const int radius = cfg.truncation_radius();
  const auto w = static_cast<int>(in.width()), h = static_cast<int>(in.height());
  Grid<double> horiz(in.width(), in.height(), 0.0);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int k = std::max(-radius, -c); k <= std::min(radius, w - 1 - c); ++k) acc += taps[k + radius] * in(r, c + k);
      horiz(r, c) = acc;
    }
  Grid<double> out(in.width(), in.height(), 0.0);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int k = std::max(-radius, -r); k <= std::min(radius, h - 1 - r); ++k) acc += taps[k + radius] * horiz(r + k, c);
      out(r, c) = acc;
    }
  return out;
}

/// Blurred, unit-sum weight grid for one object on a width x height canvas.
/// Only the window [row0, row0 + window.height()) x [col0, col0 + window.width())
/// is stored; every weight outside it is zero.
struct DecayMask {
  ObjectId id = 0;
  std::size_t width = 0, height = 0;
  std::size_t row0 = 0, col0 = 0;
  Grid<double> window;

  std::size_t row1() const { return row0 + window.height(); }
  std::size_t col1() const { return col0 + window.width(); }

  double weight(std::size_t r, std::size_t c) const {
    if (r < row0 || r >= row1() || c < col0 || c >= col1()) return 0.0;
    return window(r - row0, c - col0);
  }

  Grid<double> dense() const {
    Grid<double> g(width, height, 0.0);
    for (std::size_t r = row0; r < row1(); ++r)
      for (std::size_t c = col0; c < col1(); ++c) g(r, c) = window(r - row0, c - col0);
    return g;
  }
};

struct DecayMaskSet {
  std::vector<DecayMask> masks;  // ascending id

  const DecayMask& at(ObjectId id) const {
    auto it = std::lower_bound(masks.begin(), masks.end(), id, [](const DecayMask& m, ObjectId v) { return m.id < v; });
    if (it == masks.end() || it->id != id) throw UnknownObject("no decay mask for object " + std::to_string(id));
    return *it;
  }
};

/// Per object: pixel indicator, Gaussian blur, rescale to unit sum. The blur
/// runs on the object's bounding box grown by the truncation radius and
/// clipped to the canvas; pixels beyond it are out of kernel reach.
inline DecayMaskSet build_decay_masks(const SegmentationMap& seg, const BlurConfig& cfg) {
  cfg.validate();
  const auto radius = static_cast<std::size_t>(cfg.truncation_radius());
  const std::size_t w = seg.width(), h = seg.height();
  DecayMaskSet set;
  for (ObjectId id : object_ids(seg)) {
    std::size_t rmin = h, rmax = 0, cmin = w, cmax = 0;
    for (std::size_t r = 0; r < h; ++r)
      for (std::size_t c = 0; c < w; ++c)
        if (seg.labels(r, c) == id) {
          rmin = std::min(rmin, r), rmax = std::max(rmax, r);
          cmin = std::min(cmin, c), cmax = std::max(cmax, c);
        }
    DecayMask m;
    m.id = id;
    m.width = w;
    m.height = h;
    m.row0 = rmin > radius ? rmin - radius : 0;
    m.col0 = cmin > radius ? cmin - radius : 0;
    const std::size_t row1 = std::min(h, rmax + radius + 1), col1 = std::min(w, cmax + radius + 1);

    // Window edges that are not canvas edges lie >= radius from the object,
    // so zero padding there matches blurring the full canvas.
    Grid<double> indicator(col1 - m.col0, row1 - m.row0, 0.0);
    for (std::size_t r = m.row0; r < row1; ++r)
      for (std::size_t c = m.col0; c < col1; ++c)
        if (seg.labels(r, c) == id) indicator(r - m.row0, c - m.col0) = 1.0;
    m.window = gaussian_blur(indicator, cfg);

    double total = 0.0;
    for (double v : m.window.values()) total += v;
    for (double& v : m.window.values()) v /= total;
    set.masks.push_back(std::move(m));
  }
  return set;
}

/// Decay-mask weighted focus: sum over pixels of weight * focus.
inline double blurred_score(const FocusMap& fm, const DecayMaskSet& masks, ObjectId id) {
  const auto& m = masks.at(id);
  if (fm.width() != m.width || fm.height() != m.height)
    throw DimensionMismatch("focus map and decay masks differ in size");
  double acc = 0.0;
  for (std::size_t r = m.row0; r < m.row1(); ++r)
    for (std::size_t c = m.col0; c < m.col1(); ++c) acc += m.window(r - m.row0, c - m.col0) * fm.values(r, c);
  return acc;
}

struct ObjectScore {
  ObjectId object_id = 0;
  double plain = 0.0;
  double blurred = 0.0;
};

enum class ScoreField { Plain, Blurred };

/// Plain and blurred scores for every object in the segmentation, ascending id.
inline std::vector<ObjectScore> score_objects(const FocusMap& fm, const SegmentationMap& seg,
                                              const DecayMaskSet& masks) {
  if (!fm.values.same_shape(seg.labels)) throw DimensionMismatch("focus map and segmentation differ in size");
  const auto labels = seg.labels.values();
  const auto vals = fm.values.values();
  const ObjectId max_id = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
  std::vector<double> means(max_id + 1, 0.0);
  std::vector<std::size_t> counts(max_id + 1, 0);
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const auto l = labels[k];
    means[l] += (vals[k] - means[l]) / static_cast<double>(++counts[l]);
  }

  std::vector<ObjectScore> out;
  for (const auto& m : masks.masks) {
    if (m.id > max_id || counts[m.id] == 0) throw UnknownObject("object " + std::to_string(m.id) + " not in segmentation");
    out.push_back({m.id, means[m.id], blurred_score(fm, masks, m.id)});
  }
  return out;
}

/// Ids whose chosen score is at least `theta`.
inline std::vector<ObjectId> threshold_focused_set(const std::vector<ObjectScore>& scores, double theta,
                                                   ScoreField field) {
  std::vector<ObjectId> out;
  for (const auto& s : scores)
    if ((field == ScoreField::Plain ? s.plain : s.blurred) >= theta) out.push_back(s.object_id);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace focuseval
