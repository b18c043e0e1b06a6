#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "support.hpp"

using namespace facecutout;

namespace {

constexpr int kW = 64;
constexpr int kH = 64;

// Area of a convex vertex set given in any order (angular sort about the mean).
double convex_area_any_order(std::vector<Point2> v) {
    Point2 c{};
    for (const auto& p : v) c = {c.x + p.x / v.size(), c.y + p.y / v.size()};
    std::sort(v.begin(), v.end(), [&](const Point2& a, const Point2& b) {
        return std::atan2(a.y - c.y, a.x - c.x) < std::atan2(b.y - c.y, b.x - c.x);
    });
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        s += a.x * b.y - b.x * a.y;
    }
    return std::abs(s) / 2;
}

BinaryMask face_raster(const Landmarks68& lm, int w, int h) { return rasterize_polygon(face_boundary_polygon(lm), w, h); }

CutoutConfig config(double p, double gamma = 0.3, FillMode fill = FillMode::Zero) {
    CutoutConfig cfg;
    cfg.p = p;
    cfg.gamma_h = gamma;
    cfg.fill = fill;
    return cfg;
}

} // namespace

TEST(OverlapRatio, Cases) {
    BinaryMask diff(8, 8), region(8, 8);
    const int cells[10][2] = {{0, 0}, {1, 0}, {2, 0}, {3, 1}, {4, 2}, {5, 3}, {6, 4}, {7, 5}, {0, 7}, {7, 7}};
    for (const auto& c : cells) diff.set(c[0], c[1]);
    EXPECT_DOUBLE_EQ(overlap_ratio(region, diff), 0.0);
    region.set(0, 0);
    region.set(4, 2);
    region.set(7, 7);
    region.set(1, 1); // not in diff
    EXPECT_DOUBLE_EQ(overlap_ratio(region, diff), 0.3);
    EXPECT_DOUBLE_EQ(overlap_ratio(diff, diff), 1.0);
    EXPECT_DOUBLE_EQ(overlap_ratio(BinaryMask(8, 8) | diff | region, diff), 1.0);
}

TEST(OverlapRatio, Errors) {
    try {
        overlap_ratio(BinaryMask(4, 4), BinaryMask(4, 4));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EmptyDiffMask);
    }
    EXPECT_THROW(overlap_ratio(BinaryMask(4, 4), BinaryMask(5, 4)), Error);
}

TEST(OverlapRatio, MatchesPopcountOracle) {
    Rng rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const auto region = fctest::random_mask(64, 64, rng, rng.uniform01());
        auto diff = fctest::random_mask(64, 64, rng, rng.uniform01());
        diff.set(3, 3);
        const double expected = static_cast<double>(oracle::brute_popcount_and(region, diff)) /
                                static_cast<double>(oracle::brute_popcount(diff));
        EXPECT_EQ(overlap_ratio(region, diff), expected);
    }
}

TEST(SensoryCandidates, IterationSchedule) {
    EXPECT_EQ(sensory_iterations(40.0), (std::array<int, 5>{2, 4, 6, 8, 10}));
    EXPECT_EQ(sensory_iterations(3.0), (std::array<int, 5>{1, 1, 1, 1, 1}));
    EXPECT_EQ(sensory_iterations(10.0), (std::array<int, 5>{1, 1, 2, 2, 3}));
}

TEST(SensoryCandidates, NestedForEveryGroup) {
    const auto lm = fctest::synthetic_face(128, 128);
    for (auto g : {SensoryGroup::Eyes, SensoryGroup::Nose, SensoryGroup::Mouth}) {
        const auto c = sensory_candidates(lm, g, 128, 128);
        ASSERT_EQ(c.size(), 5u);
        for (std::size_t i = 0; i + 1 < c.size(); ++i) {
            EXPECT_TRUE(c[i].subset_of(c[i + 1]));
            EXPECT_LT(c[i].popcount(), c[i + 1].popcount());
        }
    }
}

TEST(SensoryCandidates, EyeBandCoversBothEyes) {
    const auto lm = fctest::synthetic_face(128, 128);
    const auto c = sensory_candidates(lm, SensoryGroup::Eyes, 128, 128);
    for (std::size_t i : {37, 38, 39, 40, 41, 43, 44, 45, 46, 47}) {
        const auto& p = lm[i];
        EXPECT_TRUE(c[2].get(static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y)))) << i;
    }
}

TEST(SensoryCandidates, MatchesLineDilationOracle) {
    const auto lm = fctest::synthetic_face(96, 80);
    const auto c = sensory_candidates(lm, SensoryGroup::Mouth, 96, 80);
    const auto line = draw_line(lm[48], lm[54], 96, 80);
    const auto iters = sensory_iterations(std::hypot(lm[54].x - lm[48].x, lm[54].y - lm[48].y));
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(c[j], oracle::naive_dilate(line, iters[j]));
}

TEST(SensoryCandidates, CoincidentTerminalsRejected) {
    auto pts = fctest::synthetic_face(64, 64).points();
    std::vector<Point2> v(pts.begin(), pts.end());
    v[33] = v[27];
    const Landmarks68 lm(v);
    EXPECT_THROW(sensory_candidates(lm, SensoryGroup::Nose, 64, 64), Error);
    EXPECT_FALSE(sensory_cutout(lm, SensoryGroup::Nose, std::nullopt, 0.3, 64, 64));
}

TEST(SelectSensory, MiddleWithoutDiffAndMinRhoWithDiff) {
    const auto lm = fctest::synthetic_face(kW, kH);
    const auto cands = sensory_candidates(lm, SensoryGroup::Eyes, kW, kH);
    const auto none = select_sensory(cands, SensoryGroup::Eyes, std::nullopt, 0.3);
    ASSERT_TRUE(none);
    EXPECT_EQ(none->candidate_index, 2);
    EXPECT_EQ(none->raster, cands[2]);
    EXPECT_FALSE(none->rho);

    // A diff that only the two largest candidates reach: the smaller ones have rho 0.
    BinaryMask diff(kW, kH);
    for (int y = 0; y < kH; ++y) {
        for (int x = 0; x < kW; ++x) {
            if (cands[4].get(x, y) && !cands[3].get(x, y)) diff.set(x, y);
        }
    }
    ASSERT_TRUE(diff.any());
    const auto sel = select_sensory(cands, SensoryGroup::Eyes, diff, 0.3);
    ASSERT_TRUE(sel);
    EXPECT_EQ(*sel->rho, 0.0);
    EXPECT_EQ(sel->candidate_index, 3) << "rho ties go to the larger candidate";

    const auto rejected = select_sensory(cands, SensoryGroup::Eyes, cands[0], 0.3);
    EXPECT_FALSE(rejected);
}

TEST(HullRandomSubset, AlwaysReturnsWithoutDiff) {
    const auto lm = fctest::synthetic_face(kW, kH);
    CutoutConfig cfg;
    for (std::uint64_t s = 0; s < 200; ++s) {
        Rng rng(s);
        const auto r = hull_random_subset(lm, std::nullopt, cfg, rng, kW, kH);
        ASSERT_TRUE(r);
        EXPECT_TRUE(r->raster.any());
        EXPECT_EQ(r->strategy, Strategy::HullRandomSubset);
    }
}

TEST(HullRandomSubset, GammaOneIsMaxAreaOfDraws) {
    const auto lm = fctest::synthetic_face(kW, kH);
    const auto diff = face_raster(lm, kW, kH);
    auto cfg = config(1.0, 1.0);
    for (std::uint64_t s = 0; s < 50; ++s) {
        Rng a(s), b(s);
        const auto with = hull_random_subset(lm, diff, cfg, a, kW, kH);
        const auto without = hull_random_subset(lm, std::nullopt, cfg, b, kW, kH);
        ASSERT_TRUE(with && without);
        EXPECT_EQ(with->raster, without->raster);
        EXPECT_EQ(with->candidate_index, without->candidate_index);
    }
}

TEST(HullRandomSubset, FaceCoveringDiffRespectsGamma) {
    const auto lm = fctest::synthetic_face(kW, kH);
    const auto diff = face_raster(lm, kW, kH);
    const auto cfg = config(1.0, 0.3);
    for (std::uint64_t s = 0; s < 200; ++s) {
        Rng rng(s);
        const auto r = hull_random_subset(lm, diff, cfg, rng, kW, kH);
        if (r) {
            EXPECT_LE(overlap_ratio(r->raster, diff), 0.3);
        }
    }
    // With gamma 0 every candidate touches the face, so none qualifies.
    const auto strict = config(1.0, 0.0);
    for (std::uint64_t s = 0; s < 50; ++s) {
        Rng rng(s);
        EXPECT_FALSE(hull_random_subset(lm, diff, strict, rng, kW, kH));
    }
}

TEST(HullConsecutive, ElevenPointWindows) {
    const auto lm = fctest::synthetic_face(kW, kH);
    // With gamma 0 and a diff that is the complement of window s, window s
    // always qualifies; the winner must then fit inside it.
    int windows = 0;
    for (int s = 0; s + 11 <= 27; ++s) {
        const auto pts = lm.range(static_cast<std::size_t>(s), static_cast<std::size_t>(s + 10));
        const auto own = rasterize_polygon(convex_hull(pts), kW, kH);
        BinaryMask diff(kW, kH);
        for (int y = 0; y < kH; ++y) {
            for (int x = 0; x < kW; ++x) diff.set(x, y, !own.get(x, y));
        }
        const auto r = hull_consecutive_windows(lm, 11, diff, 0.0, kW, kH);
        ASSERT_TRUE(r) << s;
        EXPECT_TRUE(r->raster.subset_of(own));
        ++windows;
    }
    EXPECT_EQ(windows, 17);
    EXPECT_EQ(lm.range(16, 26).size(), 11u);

    const auto best = hull_consecutive_windows(lm, 11, std::nullopt, 0.3, kW, kH);
    ASSERT_TRUE(best);
    EXPECT_GE(best->candidate_index, 0);
    EXPECT_LE(best->candidate_index, 16);
    EXPECT_THROW(hull_consecutive_windows(lm, 2, std::nullopt, 0.3, kW, kH), Error);
    EXPECT_THROW(hull_consecutive_windows(lm, 28, std::nullopt, 0.3, kW, kH), Error);
}

TEST(HullConsecutive, MatchesExhaustiveWindowOracle) {
    Rng jitter(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto lm = trial == 0 ? fctest::synthetic_face(kW, kH) : fctest::synthetic_face(kW, kH, &jitter, 1.5);
        for (int window = 8; window <= 15; ++window) {
            std::vector<double> areas;
            for (int s = 0; s + window <= 27; ++s) {
                const auto pts = lm.range(static_cast<std::size_t>(s), static_cast<std::size_t>(s + window - 1));
                areas.push_back(convex_area_any_order(oracle::brute_force_hull({pts.begin(), pts.end()})));
            }
            const double max_area = *std::max_element(areas.begin(), areas.end());
            const auto r = hull_consecutive_windows(lm, window, std::nullopt, 0.3, kW, kH);
            ASSERT_TRUE(r);
            const auto pick = static_cast<std::size_t>(r->candidate_index);
            EXPECT_NEAR(areas[pick], max_area, 1e-9);
            for (std::size_t s = 0; s < pick; ++s) EXPECT_LT(areas[s], max_area - 1e-9) << "lower start should win ties";
        }
    }
}

TEST(HullConsecutive, AllZeroDiffTreatedAsReal) {
    const auto lm = fctest::synthetic_face(kW, kH);
    const auto a = hull_consecutive_windows(lm, 10, BinaryMask(kW, kH), 0.0, kW, kH);
    const auto b = hull_consecutive_windows(lm, 10, std::nullopt, 0.0, kW, kH);
    ASSERT_TRUE(a && b);
    EXPECT_EQ(*a, *b);
    EXPECT_FALSE(a->rho);
}

TEST(HullQuadrant, AvoidsDiffQuadrant) {
    const auto lm = fctest::synthetic_face(kW, kH);
    const auto quads = centroid_quadrants(face_boundary_polygon(lm), kW, kH);
    Rng rng(1);
    const auto r = hull_quadrant(lm, quads[0], CutoutConfig{}, rng, kW, kH);
    ASSERT_TRUE(r);
    EXPECT_NE(r->candidate_index, 0);
    EXPECT_EQ(r->candidate_index, 1) << "lowest index among rho = 0 ties";
    EXPECT_EQ(*r->rho, 0.0);
}

TEST(HullQuadrant, UniformWithoutDiff) {
    const auto lm = fctest::synthetic_face(kW, kH);
    std::array<int, 4> counts{};
    const int n = 10000;
    for (int t = 0; t < n; ++t) {
        Rng rng(derive_seed(99, "q" + std::to_string(t)));
        const auto r = hull_quadrant(lm, std::nullopt, CutoutConfig{}, rng, kW, kH);
        ASSERT_TRUE(r);
        ++counts[static_cast<std::size_t>(r->candidate_index)];
    }
    for (int c : counts) EXPECT_NEAR(c / static_cast<double>(n), 0.25, 0.02);
}

TEST(HullQuadrant, QuadrantsPartitionFace) {
    const auto lm = fctest::synthetic_face(kW, kH);
    const auto quads = centroid_quadrants(face_boundary_polygon(lm), kW, kH);
    BinaryMask all(kW, kH);
    std::size_t total = 0;
    for (const auto& q : quads) {
        all |= q;
        total += q.popcount();
    }
    EXPECT_EQ(all, face_raster(lm, kW, kH));
    EXPECT_EQ(total, all.popcount());
}

TEST(FillRegion, Schemes) {
    Rng img_rng(3);
    const auto img = fctest::textured_image(64, 64, img_rng);
    const auto region = fctest::block_mask(64, 64, 10, 10, 40);
    Rng r1(7), r2(7);
    const auto zero = fill_region(img, region, FillMode::Zero, r1);
    const auto max = fill_region(img, region, FillMode::Max, r1);
    const auto rand1 = fill_region(img, region, FillMode::Random, r1);
    Rng r3(7);
    fill_region(img, region, FillMode::Zero, r3);
    fill_region(img, region, FillMode::Max, r3);
    const auto rand2 = fill_region(img, region, FillMode::Random, r3);
    EXPECT_EQ(rand1, rand2);

    std::array<double, 3> mean{};
    std::size_t n = 0;
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            for (int c = 0; c < 3; ++c) {
                if (region.get(x, y)) {
                    EXPECT_EQ(zero.pixel(x, y)[c], 0);
                    EXPECT_EQ(max.pixel(x, y)[c], 255);
                    mean[static_cast<std::size_t>(c)] += rand1.pixel(x, y)[c];
                } else {
                    EXPECT_EQ(zero.pixel(x, y)[c], img.pixel(x, y)[c]);
                    EXPECT_EQ(max.pixel(x, y)[c], img.pixel(x, y)[c]);
                    EXPECT_EQ(rand1.pixel(x, y)[c], img.pixel(x, y)[c]);
                }
            }
            n += region.get(x, y) ? 1 : 0;
        }
    }
    ASSERT_GE(n, 1000u);
    for (double m : mean) EXPECT_NEAR(m / static_cast<double>(n), 127.5, 5.0);
    EXPECT_THROW(fill_region(img, BinaryMask(3, 3), FillMode::Zero, r2), Error);
}

TEST(FaceCutout, ZeroProbabilityIsIdentity) {
    Rng rng(4);
    const auto img = fctest::textured_image(kW, kH, rng);
    const auto lm = fctest::synthetic_face(kW, kH);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto cfg = config(0.0);
        cfg.seed = seed;
        const auto out = face_cutout(img, lm, std::nullopt, cfg, "id");
        EXPECT_FALSE(out.applied);
        EXPECT_FALSE(out.region);
        EXPECT_EQ(out.image, img);
    }
}

TEST(FaceCutout, RealImagesAlwaysAugmentedAtPOne) {
    Rng rng(5);
    const auto img = fctest::textured_image(kW, kH, rng);
    const auto lm = fctest::synthetic_face(kW, kH);
    std::set<Strategy> seen;
    for (int t = 0; t < 1000; ++t) {
        const auto out = face_cutout(img, lm, std::nullopt, config(1.0), "real_" + std::to_string(t));
        ASSERT_TRUE(out.applied);
        ASSERT_TRUE(out.region);
        EXPECT_FALSE(out.region->rho);
        seen.insert(out.region->strategy);
    }
    EXPECT_EQ(seen.size(), kAllStrategies.size());
}

TEST(FaceCutout, LocalityAndDeterminism) {
    Rng rng(6);
    const auto lm = fctest::synthetic_face(kW, kH);
    for (int t = 0; t < 200; ++t) {
        const auto img = fctest::noise_image(kW, kH, rng);
        const auto cfg = config(0.7, 0.3, static_cast<FillMode>(t % 3));
        const std::string id = "frame" + std::to_string(t);
        const auto a = face_cutout(img, lm, std::nullopt, cfg, id);
        const auto b = face_cutout(img, lm, std::nullopt, cfg, id);
        EXPECT_EQ(a, b);
        for (int y = 0; y < kH; ++y) {
            for (int x = 0; x < kW; ++x) {
                const bool in_region = a.region && a.region->raster.get(x, y);
                if (in_region) continue;
                for (int c = 0; c < 3; ++c) ASSERT_EQ(a.image.pixel(x, y)[c], img.pixel(x, y)[c]);
            }
        }
    }
}

TEST(FaceCutout, GateFrequency) {
    const RgbImage img(32, 32, 100);
    const auto lm = fctest::synthetic_face(32, 32);
    const int n = 10000;
    for (double p : {0.1, 0.5, 0.9}) {
        int applied = 0;
        for (int t = 0; t < n; ++t) applied += face_cutout(img, lm, std::nullopt, config(p), std::to_string(t)).applied;
        EXPECT_LE(std::abs(applied / static_cast<double>(n) - p), 4 * std::sqrt(p * (1 - p) / n)) << p;
    }
}

TEST(FaceCutout, RhoGuaranteeOnFakes) {
    Rng rng(7);
    const auto img = fctest::textured_image(kW, kH, rng);
    const auto lm = fctest::synthetic_face(kW, kH);
    int applied = 0;
    for (int t = 0; t < 2000; ++t) {
        const int side = static_cast<int>(rng.uniform_int(4, 30));
        const int x0 = static_cast<int>(rng.uniform_int(0, kW - side));
        const int y0 = static_cast<int>(rng.uniform_int(0, kH - side));
        const auto diff = fctest::block_mask(kW, kH, x0, y0, side);
        const auto out = face_cutout(img, lm, diff, config(1.0), "fake" + std::to_string(t));
        if (!out.applied) {
            EXPECT_EQ(out.image, img);
            continue;
        }
        ++applied;
        ASSERT_TRUE(out.region->rho);
        EXPECT_EQ(*out.region->rho, overlap_ratio(out.region->raster, diff));
        EXPECT_LE(*out.region->rho, 0.3);
    }
    EXPECT_GT(applied, 1000);
}

TEST(FaceCutout, MonotoneSafety) {
    Rng rng(8);
    const auto img = fctest::textured_image(kW, kH, rng);
    const auto lm = fctest::synthetic_face(kW, kH);
    BinaryMask everything(kW, kH);
    for (auto& b : everything.bits()) b = 1;
    const auto face = face_raster(lm, kW, kH);
    for (int t = 0; t < 500; ++t) {
        const std::string id = "f" + std::to_string(t);
        EXPECT_FALSE(face_cutout(img, lm, everything, config(1.0, 0.0), id).applied);
        EXPECT_TRUE(face_cutout(img, lm, face, config(1.0, 1.0), id).applied);
    }
}

TEST(FaceCutout, ModesRestrictStrategies) {
    const RgbImage img(kW, kH, 50);
    const auto lm = fctest::synthetic_face(kW, kH);
    auto cfg = config(1.0);
    for (int t = 0; t < 200; ++t) {
        cfg.mode = CutoutMode::SensoryOnly;
        const auto s = face_cutout(img, lm, std::nullopt, cfg, std::to_string(t));
        ASSERT_TRUE(s.region);
        EXPECT_LE(static_cast<int>(s.region->strategy), static_cast<int>(Strategy::Mouth));
        cfg.mode = CutoutMode::HullOnly;
        const auto h = face_cutout(img, lm, std::nullopt, cfg, std::to_string(t));
        ASSERT_TRUE(h.region);
        EXPECT_GE(static_cast<int>(h.region->strategy), static_cast<int>(Strategy::HullRandomSubset));
    }
}

TEST(FaceCutout, Errors) {
    const RgbImage img(kW, kH);
    const auto lm = fctest::synthetic_face(200, 200);
    try {
        face_cutout(img, lm, std::nullopt, config(1.0), "x");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::LandmarkImageMismatch);
    }
    const auto ok = fctest::synthetic_face(kW, kH);
    EXPECT_THROW(face_cutout(img, ok, BinaryMask(3, 3), config(1.0), "x"), Error);
    EXPECT_THROW(face_cutout(img, ok, std::nullopt, config(1.5), "x"), Error);
    auto bad = config(0.5);
    bad.max_attempts = 0;
    EXPECT_THROW(face_cutout(img, ok, std::nullopt, bad, "x"), Error);
}
