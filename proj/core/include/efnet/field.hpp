#pragma once

#include <array>
#include <vector>

#include "efnet/mnist_io.hpp"

namespace efnet {

/// Physical parameters of the simulated planes. Lengths in meters.
struct PhysicalConfig {
    double coulomb_k = 8.9875e9;  // V*m/C
    double charge = 1e-9;         // C, per white pixel
    double pixel_pitch = 0.02;    // d1
    double plane_gap = 0.04;      // d2, image plane to sensor plane
    int bin_threshold = kDefaultBinThreshold;

    /// Throws ConfigError unless every physical quantity is finite and positive.
    void validate() const;

    static PhysicalConfig from_centimeters(double d1_cm, double d2_cm);

    friend bool operator==(const PhysicalConfig&, const PhysicalConfig&) = default;
};

/// 28x28 grid of volts, row-major.
using Grid = std::array<double, kPixels>;

// Potential summed over one charged image, sampled on the sensor plane.
struct PotentialTable {
    Grid values{};

    double operator()(int row, int col) const { return values[static_cast<std::size_t>(row * kSide + col)]; }
    double max() const;
    double min() const;
};

// Difference of two potential tables: the first-layer weights of a pair neuron.
struct WeightTable {
    Grid values{};

    double operator()(int row, int col) const { return values[static_cast<std::size_t>(row * kSide + col)]; }
    double max() const;
    double min() const;

    friend bool operator==(const WeightTable&, const WeightTable&) = default;
};

double charge_sensor_distance(Cell charge, Cell sensor, const PhysicalConfig& cfg);

/// Direct superposition: for every sensor, sum K*q/r over active pixels in
/// row-major order. This is the reference path; all network weights use it.
PotentialTable potential_table(const BinaryImage& img, const PhysicalConfig& cfg);

/// potential_table(a) - potential_table(b); a carries +q, b carries -q.
WeightTable pair_weight_table(const BinaryImage& a, const BinaryImage& b, const PhysicalConfig& cfg);
WeightTable pair_weight_table(const PotentialTable& a, const PotentialTable& b);

inline constexpr int kKernelSide = 2 * kSide - 1;

/// Per-charge potential for every offset in [-27,27]^2, precomputed once per config.
class DistanceKernel {
public:
    explicit DistanceKernel(const PhysicalConfig& cfg);

    double at(int drow, int dcol) const {
        return values_[static_cast<std::size_t>((drow + kSide - 1) * kKernelSide + (dcol + kSide - 1))];
    }
    const PhysicalConfig& config() const noexcept { return cfg_; }

private:
    PhysicalConfig cfg_;
    std::vector<double> values_;
};

DistanceKernel build_kernel(const PhysicalConfig& cfg);

/// Scatter-adds the kernel at each active pixel. Agrees with potential_table
/// to ~1e-15 relative; not bit-identical.
PotentialTable potential_table_fast(const BinaryImage& img, const DistanceKernel& kernel);

/// As above, but throws ConfigError when the kernel was built for another config.
PotentialTable potential_table_fast(const BinaryImage& img, const DistanceKernel& kernel, const PhysicalConfig& cfg);

}  // namespace efnet
