#include "efnet/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "efnet/errors.hpp"

namespace efnet {
namespace {

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void PhysicalConfig::validate() const {
    if (!positive(coulomb_k)) throw ConfigError("coulomb constant must be positive, got " + std::to_string(coulomb_k));
    if (!positive(charge)) throw ConfigError("charge must be positive, got " + std::to_string(charge));
    if (!positive(pixel_pitch)) throw ConfigError("pixel pitch d1 must be positive, got " + std::to_string(pixel_pitch));
    if (!positive(plane_gap)) throw ConfigError("plane gap d2 must be positive, got " + std::to_string(plane_gap));
    if (bin_threshold < 0 || bin_threshold > 255)
        throw ConfigError("binarization threshold must be in [0,255], got " + std::to_string(bin_threshold));
}

PhysicalConfig PhysicalConfig::from_centimeters(double d1_cm, double d2_cm) {
    PhysicalConfig cfg;
    cfg.pixel_pitch = d1_cm / 100.0;
    cfg.plane_gap = d2_cm / 100.0;
    return cfg;
}

double PotentialTable::max() const { return *std::max_element(values.begin(), values.end()); }
double PotentialTable::min() const { return *std::min_element(values.begin(), values.end()); }
double WeightTable::max() const { return *std::max_element(values.begin(), values.end()); }
double WeightTable::min() const { return *std::min_element(values.begin(), values.end()); }

double charge_sensor_distance(Cell charge, Cell sensor, const PhysicalConfig& cfg) {
    const double dy = (sensor.row - charge.row) * cfg.pixel_pitch;
    const double dx = (sensor.col - charge.col) * cfg.pixel_pitch;
    return std::sqrt(dy * dy + dx * dx + cfg.plane_gap * cfg.plane_gap);
}

PotentialTable potential_table(const BinaryImage& img, const PhysicalConfig& cfg) {
    const double kq = cfg.coulomb_k * cfg.charge;
    const auto charges = img.cells();
    PotentialTable table;
    for (int s = 0; s < kPixels; ++s) {
        const Cell sensor = cell_at(s);
        double sum = 0.0;
        for (const Cell& c : charges) sum += kq / charge_sensor_distance(c, sensor, cfg);
        table.values[static_cast<std::size_t>(s)] = sum;
    }
    return table;
}

WeightTable pair_weight_table(const PotentialTable& a, const PotentialTable& b) {
    WeightTable w;
    for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] = a.values[i] - b.values[i];
    return w;
}

WeightTable pair_weight_table(const BinaryImage& a, const BinaryImage& b, const PhysicalConfig& cfg) {
    return pair_weight_table(potential_table(a, cfg), potential_table(b, cfg));
}

DistanceKernel::DistanceKernel(const PhysicalConfig& cfg) : cfg_(cfg), values_(kKernelSide * kKernelSide) {
    cfg_.validate();
    const double kq = cfg.coulomb_k * cfg.charge;
    for (int dr = -(kSide - 1); dr <= kSide - 1; ++dr)
        for (int dc = -(kSide - 1); dc <= kSide - 1; ++dc)
            values_[static_cast<std::size_t>((dr + kSide - 1) * kKernelSide + (dc + kSide - 1))] =
                kq / charge_sensor_distance({0, 0}, {dr, dc}, cfg);
}

DistanceKernel build_kernel(const PhysicalConfig& cfg) { return DistanceKernel(cfg); }

PotentialTable potential_table_fast(const BinaryImage& img, const DistanceKernel& kernel) {
    PotentialTable table;
    for (const Cell c : img.cells()) {
        for (int r = 0; r < kSide; ++r) {
            double* row = table.values.data() + r * kSide;
            for (int col = 0; col < kSide; ++col) row[col] += kernel.at(r - c.row, col - c.col);
        }
    }
    return table;
}

PotentialTable potential_table_fast(const BinaryImage& img, const DistanceKernel& kernel, const PhysicalConfig& cfg) {
    if (!(kernel.config() == cfg)) throw ConfigError("distance kernel was built for a different physical config");
    return potential_table_fast(img, kernel);
}

}  // namespace efnet
