#include <gtest/gtest.h>

#include <sstream>

#include "focuseval/focus.hpp"
#include "focuseval/random.hpp"
#include "support/reference.hpp"

using namespace focuseval;

namespace {

FocusMap from_rows(std::vector<std::vector<double>> rows) {
  FocusMap fm{Grid<double>(rows.front().size(), rows.size())};
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) fm.values(r, c) = rows[r][c];
  return fm;
}

Grid<double> random_grid(std::size_t w, std::size_t h, Rng& rng) {
  Grid<double> g(w, h);
  for (double& v : g.values()) v = rng.uniform();
  return g;
}

SegmentationMap one_object(std::size_t w, std::size_t h, std::vector<Pixel> pixels) {
  SegmentationMap seg{Grid<std::uint32_t>(w, h, 0)};
  for (auto p : pixels) seg.labels(p.y, p.x) = 1;
  return seg;
}

SegmentationMap disc_scene(int w, int h, int cx, int cy, int r) {
  ObjectSpec o;
  o.id = 1;
  o.shape = Shape::Sphere;
  o.cx = cx;
  o.cy = cy;
  o.extent = r;
  return rasterize_segmentation(Scene{w, h, 0, {o}});
}

}  // namespace

TEST(LoadFocusMap, ParsesGrid) {
  std::istringstream in("FMAP 1 2 2\n0 1\n2 3\n");
  const auto fm = load_focus_map(in);
  EXPECT_EQ(fm, from_rows({{0, 1}, {2, 3}}));
}

TEST(LoadFocusMap, Errors) {
  std::istringstream width_mismatch("FMAP 1 3 2\n0 1\n2 3\n");
  EXPECT_THROW(load_focus_map(width_mismatch), FormatError);
  std::istringstream negative("FMAP 1 2 2\n0 -1\n2 3\n");
  EXPECT_THROW(load_focus_map(negative), ValueError);
  std::istringstream nan("FMAP 1 2 1\nnan 1\n");
  EXPECT_THROW(load_focus_map(nan), ValueError);
  std::istringstream inf("FMAP 1 2 1\n1 inf\n");
  EXPECT_THROW(load_focus_map(inf), ValueError);
  std::istringstream junk("FMAP 1 2 1\n1 x\n");
  EXPECT_THROW(load_focus_map(junk), FormatError);
  std::istringstream wrong_magic("SMAP 1 2 1\n1 1\n");
  EXPECT_THROW(load_focus_map(wrong_magic), FormatError);
  std::istringstream missing_row("FMAP 1 2 2\n1 1\n");
  EXPECT_THROW(load_focus_map(missing_row), FormatError);
}

TEST(LoadFocusMap, WriteReadIsExact) {
  Rng rng(4);
  FocusMap fm{random_grid(7, 5, rng)};
  fm.values(0, 0) = 1e-300;
  std::stringstream ss;
  write_focus_map(ss, fm);
  EXPECT_EQ(load_focus_map(ss), fm);
}

TEST(Normalize, DividesByMax) {
  EXPECT_EQ(normalize(from_rows({{0, 2}, {4, 1}})), from_rows({{0, 0.5}, {1, 0.25}}));
  EXPECT_EQ(normalize(from_rows({{1, 1}, {1, 1}})), from_rows({{1, 1}, {1, 1}}));
  EXPECT_THROW(normalize(from_rows({{0, 0}, {0, 0}})), NoSignal);
}

TEST(Normalize, ScaleInvariant) {
  Rng rng(9);
  for (int t = 0; t < 50; ++t) {
    FocusMap fm{random_grid(6, 4, rng)};
    FocusMap scaled = fm;
    const double alpha = 0.01 + 100.0 * rng.uniform();
    for (double& v : scaled.values.values()) v *= alpha;
    const auto a = normalize(fm), b = normalize(scaled);
    for (std::size_t k = 0; k < a.values.size(); ++k) EXPECT_NEAR(a.values.values()[k], b.values.values()[k], 1e-15);
  }
}

TEST(PlainScore, ConstantAndIndicator) {
  const auto seg = disc_scene(40, 40, 20, 20, 6);
  FocusMap c{Grid<double>(40, 40, 0.375)};
  EXPECT_EQ(plain_score(c, seg, 1), 0.375);

  FocusMap ind{Grid<double>(40, 40, 0.0)};
  for (auto p : object_pixels(seg, 1)) ind.values(p.y, p.x) = 1.0;
  EXPECT_EQ(plain_score(ind, seg, 1), 1.0);
  EXPECT_THROW(plain_score(ind, seg, 2), UnknownObject);
  EXPECT_THROW(plain_score(FocusMap{Grid<double>(39, 40, 0.0)}, seg, 1), DimensionMismatch);
}

TEST(PlainScore, ThreePixelObjectHandSum) {
  const auto seg = one_object(4, 4, {{1, 1}, {2, 1}, {2, 2}});
  Rng rng(21);
  FocusMap fm{random_grid(4, 4, rng)};
  const double expected = (fm.values(1, 1) + fm.values(1, 2) + fm.values(2, 2)) / 3.0;
  EXPECT_NEAR(plain_score(fm, seg, 1), expected, 1e-15);
}

TEST(GaussianBlur, ImpulseGivesKernel) {
  const BlurConfig cfg{1.5};
  const int radius = cfg.truncation_radius();
  ASSERT_EQ(radius, 5);
  Grid<double> impulse(21, 21, 0.0);
  impulse(10, 10) = 1.0;
  const auto out = gaussian_blur(impulse, cfg);
  double total = 0.0;
  for (int di = -radius; di <= radius; ++di)
    for (int dj = -radius; dj <= radius; ++dj)
      total += std::exp(-(di * di + dj * dj) / (2.0 * cfg.sigma * cfg.sigma));
  for (int r = 0; r < 21; ++r)
    for (int c = 0; c < 21; ++c) {
      const int di = r - 10, dj = c - 10;
      const double expected = (std::abs(di) <= radius && std::abs(dj) <= radius)
                                  ? std::exp(-(di * di + dj * dj) / (2.0 * cfg.sigma * cfg.sigma)) / total
                                  : 0.0;
      EXPECT_NEAR(out(r, c), expected, 1e-12);
    }
}

TEST(GaussianBlur, UniformInteriorAndZero) {
  const BlurConfig cfg{2.0};
  const auto out = gaussian_blur(Grid<double>(30, 30, 0.7), cfg);
  const int radius = cfg.truncation_radius();
  for (int r = radius; r < 30 - radius; ++r)
    for (int c = radius; c < 30 - radius; ++c) EXPECT_NEAR(out(r, c), 0.7, 1e-9);
  EXPECT_LT(out(0, 0), 0.7);  // zero padding loses mass at the border
  const auto zero = gaussian_blur(Grid<double>(9, 9, 0.0), cfg);
  for (double v : zero.values()) EXPECT_EQ(v, 0.0);
}

TEST(GaussianBlur, SeparableEqualsDirect) {
  Rng rng(33);
  for (double sigma : {0.5, 1.0, 2.5, 4.0}) {
    for (int t = 0; t < 3; ++t) {
      const auto w = static_cast<std::size_t>(rng.between(1, 64)), h = static_cast<std::size_t>(rng.between(1, 64));
      const auto g = random_grid(w, h, rng);
      const auto a = gaussian_blur(g, BlurConfig{sigma});
      const auto b = reference::blur_direct(g, sigma);
      for (std::size_t k = 0; k < a.size(); ++k) ASSERT_NEAR(a.values()[k], b.values()[k], 1e-9);
    }
  }
}

TEST(BlurConfig, Validation) {
  EXPECT_THROW(BlurConfig{0.0}.validate(), InvalidArgument);
  EXPECT_THROW(BlurConfig{-1.0}.validate(), InvalidArgument);
  EXPECT_EQ(BlurConfig{0.1}.truncation_radius(), 1);
  EXPECT_EQ(BlurConfig{4.0}.truncation_radius(), 12);
}

TEST(DecayMasks, UnitSumAndSupport) {
  const auto seg = disc_scene(64, 64, 20, 30, 6);
  for (double sigma : {0.25, 1.0, 4.0, 8.0}) {
    const BlurConfig cfg{sigma};
    const auto masks = build_decay_masks(seg, cfg);
    ASSERT_EQ(masks.masks.size(), 1u);
    const auto dense = masks.at(1).dense();
    double total = 0.0;
    for (double v : dense.values()) {
      EXPECT_GE(v, 0.0);
      total += v;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
    const int radius = cfg.truncation_radius();
    // just outside the disc's right edge, and beyond kernel reach
    EXPECT_GT(dense(30, 27), 0.0);
    if (20 + 6 + radius + 1 < 64) {
      EXPECT_EQ(dense(30, 20 + 6 + radius + 1), 0.0);
    }
  }
  EXPECT_THROW(build_decay_masks(seg, BlurConfig{1.0}).at(2), UnknownObject);
}

TEST(DecayMasks, TinySigmaKeepsMassInside) {
  const auto seg = disc_scene(40, 40, 20, 20, 6);
  const auto dense = build_decay_masks(seg, BlurConfig{0.25}).at(1).dense();
  double inside = 0.0;
  for (auto p : object_pixels(seg, 1)) inside += dense(p.y, p.x);
  EXPECT_GE(inside, 0.99);
}

TEST(DecayMasks, WindowMatchesFullCanvasBlur) {
  const auto seg = disc_scene(50, 40, 8, 30, 6);  // near the left and bottom border
  const BlurConfig cfg{3.0};
  const auto mask = build_decay_masks(seg, cfg).at(1).dense();
  Grid<double> indicator(50, 40, 0.0);
  for (auto p : object_pixels(seg, 1)) indicator(p.y, p.x) = 1.0;
  auto full = reference::blur_direct(indicator, cfg.sigma);
  double total = 0.0;
  for (double v : full.values()) total += v;
  for (std::size_t k = 0; k < full.size(); ++k) EXPECT_NEAR(mask.values()[k], full.values()[k] / total, 1e-12);
}

TEST(BlurredScore, ConstantFixedPoint) {
  const auto scene = generate_scene(SceneConfig{}, 3);
  const auto seg = rasterize_segmentation(scene);
  for (double sigma : {1.0, 4.0}) {
    const auto masks = build_decay_masks(seg, BlurConfig{sigma});
    FocusMap c{Grid<double>(seg.width(), seg.height(), 0.6)};
    for (const auto& o : scene.objects) {
      EXPECT_NEAR(blurred_score(c, masks, o.id), 0.6, 1e-9);
      EXPECT_EQ(plain_score(c, seg, o.id), 0.6);
    }
  }
}

TEST(BlurredScore, DisjointSupportIsZero) {
  const auto seg = disc_scene(80, 40, 12, 20, 5);
  const BlurConfig cfg{2.0};
  const auto masks = build_decay_masks(seg, cfg);
  FocusMap fm{Grid<double>(80, 40, 0.0)};
  for (std::size_t r = 0; r < 40; ++r)
    for (std::size_t c = 12 + 5 + cfg.truncation_radius() + 1; c < 80; ++c) fm.values(r, c) = 1.0;
  EXPECT_EQ(blurred_score(fm, masks, 1), 0.0);
}

TEST(BlurredScore, RandomMapEqualsDoubleLoop) {
  const auto seg = one_object(8, 8, {{3, 3}, {4, 3}, {3, 4}, {4, 4}, {5, 4}});
  Rng rng(8);
  FocusMap fm{random_grid(8, 8, rng)};
  const auto masks = build_decay_masks(seg, BlurConfig{2.0});

  Grid<double> indicator(8, 8, 0.0);
  for (auto p : object_pixels(seg, 1)) indicator(p.y, p.x) = 1.0;
  const auto eta = reference::blur_direct(indicator, 2.0);
  double mass = 0.0, weighted = 0.0;
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c) mass += eta(r, c);
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c) weighted += eta(r, c) / mass * fm.values(r, c);
  EXPECT_NEAR(blurred_score(fm, masks, 1), weighted, 1e-12);
  EXPECT_THROW(blurred_score(FocusMap{Grid<double>(7, 8, 0.0)}, masks, 1), DimensionMismatch);
}

TEST(Scores, MonotoneInEveryPixel) {
  const auto scene = generate_scene(SceneConfig{}, 12);
  const auto seg = rasterize_segmentation(scene);
  const auto masks = build_decay_masks(seg, BlurConfig{4.0});
  Rng rng(12);
  FocusMap fm{random_grid(seg.width(), seg.height(), rng)};
  const auto before = score_objects(fm, seg, masks);
  for (int t = 0; t < 30; ++t) {
    FocusMap bumped = fm;
    const auto r = rng.below(seg.height()), c = rng.below(seg.width());
    bumped.values(r, c) += 0.5;
    const auto after = score_objects(bumped, seg, masks);
    for (std::size_t k = 0; k < before.size(); ++k) {
      EXPECT_GE(after[k].plain, before[k].plain);
      EXPECT_GE(after[k].blurred, before[k].blurred);
    }
  }
}

TEST(Scores, BatchMatchesSingle) {
  const auto scene = generate_scene(SceneConfig{}, 13);
  const auto seg = rasterize_segmentation(scene);
  const auto masks = build_decay_masks(seg, BlurConfig{4.0});
  Rng rng(13);
  const auto fm = normalize(FocusMap{random_grid(seg.width(), seg.height(), rng)});
  const auto all = score_objects(fm, seg, masks);
  ASSERT_EQ(all.size(), scene.objects.size());
  for (const auto& s : all) {
    EXPECT_EQ(s.plain, plain_score(fm, seg, s.object_id));
    EXPECT_EQ(s.blurred, blurred_score(fm, masks, s.object_id));
    EXPECT_GE(s.plain, 0.0);
    EXPECT_LE(s.plain, 1.0);
    EXPECT_GE(s.blurred, 0.0);
    EXPECT_LE(s.blurred, 1.0);
  }
}

TEST(Threshold, FocusedSet) {
  const std::vector<ObjectScore> scores{{1, 0.7, 0.2}, {2, 0.3, 0.9}};
  EXPECT_EQ(threshold_focused_set(scores, 0.0, ScoreField::Plain), (std::vector<ObjectId>{1, 2}));
  EXPECT_TRUE(threshold_focused_set(scores, 1.01, ScoreField::Plain).empty());
  EXPECT_EQ(threshold_focused_set(scores, 0.5, ScoreField::Plain), std::vector<ObjectId>{1});
  EXPECT_EQ(threshold_focused_set(scores, 0.5, ScoreField::Blurred), std::vector<ObjectId>{2});
}
