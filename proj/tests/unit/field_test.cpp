#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "efnet/errors.hpp"
#include "efnet/field.hpp"
#include "mnist_fixture.hpp"
#include "oracle.hpp"

namespace efnet {
namespace {

using testing::max_relative_deviation;
using testing::oracle_potential;
using testing::random_image;

BinaryImage single(int row, int col) {
    const std::vector<Cell> c{{row, col}};
    return BinaryImage::from_cells(c);
}

BinaryImage all_white() {
    std::vector<std::uint16_t> all(kPixels);
    for (int i = 0; i < kPixels; ++i) all[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(i);
    return BinaryImage::from_indices(all);
}

TEST(Distance, Examples) {
    const PhysicalConfig cfg;
    EXPECT_DOUBLE_EQ(charge_sensor_distance({4, 9}, {4, 9}, cfg), 0.04);
    EXPECT_NEAR(charge_sensor_distance({0, 0}, {1, 0}, cfg), std::sqrt(0.02 * 0.02 + 0.04 * 0.04), 1e-15);
    EXPECT_NEAR(charge_sensor_distance({0, 0}, {1, 0}, cfg), 0.044721, 1e-6);

    PhysicalConfig flat = cfg;
    flat.plane_gap = 1e-12;
    EXPECT_NEAR(charge_sensor_distance({0, 0}, {3, 4}, flat), 0.10, 1e-12);
    flat.plane_gap = 0.05;
    EXPECT_NEAR(charge_sensor_distance({10, 10}, {13, 14}, flat), std::sqrt(0.06 * 0.06 + 0.08 * 0.08 + 0.05 * 0.05), 1e-15);
}

TEST(Distance, NeverBelowPlaneGap) {
    const PhysicalConfig cfg;
    for (int a = 0; a < kPixels; a += 37)
        for (int b = 0; b < kPixels; b += 11) ASSERT_GE(charge_sensor_distance(cell_at(a), cell_at(b), cfg), cfg.plane_gap);
}

TEST(PotentialTableTest, EmptyImageIsZero) {
    const auto t = potential_table(BinaryImage{}, PhysicalConfig{});
    for (double v : t.values) EXPECT_EQ(v, 0.0);
}

TEST(PotentialTableTest, SingleChargeOnAxis) {
    const PhysicalConfig cfg;
    const auto t = potential_table(single(14, 14), cfg);
    const double expected = cfg.coulomb_k * cfg.charge / cfg.plane_gap;
    EXPECT_NEAR(t(14, 14), 224.6875, 224.6875 * 1e-12);
    EXPECT_NEAR(t(14, 14), expected, expected * 1e-12);
    EXPECT_EQ(t.max(), t(14, 14));
}

TEST(PotentialTableTest, AllWhiteMatchesFrozenHighPrecisionValues) {
    // 30-digit sums over all 784 charges, defaults.
    const auto t = potential_table(all_white(), PhysicalConfig{});
    EXPECT_NEAR(t(13, 13), 39059.3979336822641, 39059.4 * 1e-12);
    EXPECT_NEAR(t(0, 0), 21965.1750679131080, 21965.2 * 1e-12);
}

TEST(PotentialTableTest, MatchesNaiveOracle) {
    std::mt19937_64 rng(11);
    const PhysicalConfig cfg;
    for (int trial = 0; trial < 20; ++trial) {
        const auto img = random_image(rng, 1 + static_cast<int>(rng() % 300));
        ASSERT_LT(max_relative_deviation(potential_table(img, cfg).values, oracle_potential(img, cfg)), 1e-12);
    }
}

TEST(PotentialTableTest, PositiveForNonemptyImages) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto t = potential_table(random_image(rng, 1 + static_cast<int>(rng() % 50)), PhysicalConfig{});
        for (double v : t.values) ASSERT_GT(v, 0.0);
    }
}

TEST(PotentialTableTest, StrictlyDecreasingInPlaneGap) {
    std::mt19937_64 rng(5);
    PhysicalConfig near, far;
    near.plane_gap = 0.02;
    far.plane_gap = 0.04;
    for (int trial = 0; trial < 10; ++trial) {
        const auto img = random_image(rng, 1 + static_cast<int>(rng() % 200));
        const auto a = potential_table(img, near);
        const auto b = potential_table(img, far);
        for (std::size_t i = 0; i < a.values.size(); ++i) ASSERT_GT(a.values[i], b.values[i]);
    }
}

TEST(PotentialTableTest, LinearInCharge) {
    std::mt19937_64 rng(9);
    PhysicalConfig base, scaled;
    for (double c : {0.1, 3.0, 10.0}) {
        scaled.charge = base.charge * c;
        const auto img = random_image(rng, 120);
        const auto a = potential_table(img, base);
        const auto b = potential_table(img, scaled);
        for (std::size_t i = 0; i < a.values.size(); ++i) ASSERT_NEAR(b.values[i], c * a.values[i], std::abs(c * a.values[i]) * 1e-12);
    }
}

TEST(PotentialTableTest, AdditiveOverDisjointImages) {
    std::mt19937_64 rng(13);
    const PhysicalConfig cfg;
    for (int trial = 0; trial < 10; ++trial) {
        const auto both = random_image(rng, 200);
        std::vector<std::uint16_t> left, right;
        for (auto p : both.active()) (rng() & 1 ? left : right).push_back(p);
        const auto u = potential_table(both, cfg);
        const auto a = potential_table(BinaryImage::from_indices(left), cfg);
        const auto b = potential_table(BinaryImage::from_indices(right), cfg);
        for (std::size_t i = 0; i < u.values.size(); ++i)
            ASSERT_NEAR(u.values[i], a.values[i] + b.values[i], u.values[i] * 1e-12);
    }
}

TEST(PairWeights, IdenticalImagesGiveZeroAndSwapNegatesExactly) {
    std::mt19937_64 rng(17);
    const PhysicalConfig cfg;
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_image(rng, 150);
        const auto b = random_image(rng, 90);
        for (double v : pair_weight_table(a, a, cfg).values) ASSERT_EQ(v, 0.0);
        const auto ab = pair_weight_table(a, b, cfg);
        const auto ba = pair_weight_table(b, a, cfg);
        for (std::size_t i = 0; i < ab.values.size(); ++i) {
            ASSERT_EQ(ab.values[i], -ba.values[i]);
            ASSERT_EQ(ab.values[i] + ba.values[i], 0.0);
        }
    }
}

TEST(PairWeights, IsDifferenceOfZeroLayerTables) {
    std::mt19937_64 rng(19);
    const PhysicalConfig cfg;
    const auto a = random_image(rng, 100);
    const auto b = random_image(rng, 140);
    const auto pa = potential_table(a, cfg);
    const auto pb = potential_table(b, cfg);
    const auto w = pair_weight_table(a, b, cfg);
    for (std::size_t i = 0; i < w.values.size(); ++i) ASSERT_EQ(w.values[i], pa.values[i] - pb.values[i]);
}

TEST(Kernel, CenterAndSymmetry) {
    const PhysicalConfig cfg;
    const auto k = build_kernel(cfg);
    EXPECT_DOUBLE_EQ(k.at(0, 0), cfg.coulomb_k * cfg.charge / cfg.plane_gap);
    for (int a = -27; a <= 27; ++a)
        for (int b = -27; b <= 27; ++b) {
            ASSERT_EQ(k.at(a, b), k.at(-a, -b));
            ASSERT_EQ(k.at(a, b), k.at(b, a));
            ASSERT_LE(k.at(a, b), k.at(0, 0));
        }
    for (int a = 0; a < 27; ++a) ASSERT_GT(k.at(a, 0), k.at(a + 1, 0));
}

TEST(Kernel, FullImageSumEqualsAllWhiteCenterPotential) {
    const auto k = build_kernel(PhysicalConfig{});
    // Offsets reaching sensor (13,13) from every pixel of the grid.
    double sum = 0.0;
    for (int r = 0; r < kSide; ++r)
        for (int c = 0; c < kSide; ++c) sum += k.at(13 - r, 13 - c);
    const auto oracle = oracle_potential(all_white(), PhysicalConfig{});
    EXPECT_NEAR(sum, oracle[13 * 28 + 13], oracle[13 * 28 + 13] * 1e-12);
    EXPECT_NEAR(sum, 39059.3979336822641, 39059.4 * 1e-12);
}

TEST(FastPath, EmptyAndSinglePixel) {
    const PhysicalConfig cfg;
    const auto k = build_kernel(cfg);
    for (double v : potential_table_fast(BinaryImage{}, k).values) EXPECT_EQ(v, 0.0);
    const auto t = potential_table_fast(single(3, 20), k);
    for (int r = 0; r < kSide; ++r)
        for (int c = 0; c < kSide; ++c) ASSERT_EQ(t(r, c), k.at(r - 3, c - 20));
}

TEST(FastPath, AgreesWithNaiveOnRandomImages) {
    std::mt19937_64 rng(23);
    const PhysicalConfig cfg;
    const auto k = build_kernel(cfg);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto img = random_image(rng, 100);
        worst = std::max(worst, max_relative_deviation(potential_table_fast(img, k).values, potential_table(img, cfg).values));
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(FastPath, ConfigMismatchIsRejected) {
    PhysicalConfig a, b;
    b.plane_gap = 0.02;
    const auto k = build_kernel(a);
    EXPECT_NO_THROW(potential_table_fast(BinaryImage{}, k, a));
    EXPECT_THROW(potential_table_fast(BinaryImage{}, k, b), ConfigError);
}

TEST(Config, ValidationAndUnits) {
    PhysicalConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.charge = 0.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = PhysicalConfig{};
    cfg.plane_gap = -1.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = PhysicalConfig{};
    cfg.coulomb_k = std::nan("");
    EXPECT_THROW(cfg.validate(), ConfigError);
    const auto cm = PhysicalConfig::from_centimeters(2.0, 4.0);
    EXPECT_DOUBLE_EQ(cm.pixel_pitch, 0.02);
    EXPECT_DOUBLE_EQ(cm.plane_gap, 0.04);
}

TEST(MnistField, ReferenceImageMatchesOracle) {
    REQUIRE_MNIST();
    const auto& data = *testing::mnist_test_set();
    const PhysicalConfig cfg;
    const auto img = binarize(data.images[157]);
    EXPECT_LT(max_relative_deviation(potential_table(img, cfg).values, oracle_potential(img, cfg)), 1e-12);
}

}  // namespace
}  // namespace efnet
