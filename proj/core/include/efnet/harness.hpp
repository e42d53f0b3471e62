#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "efnet/field.hpp"
#include "efnet/metric_net.hpp"
#include "efnet/mnist_io.hpp"

namespace efnet {

struct ReferenceEntry {
    int digit = 0;
    std::size_t ordinal = 0;  // 0-based position among images of this digit

    friend bool operator==(const ReferenceEntry&, const ReferenceEntry&) = default;
};

struct ReferenceSpec {
    std::vector<ReferenceEntry> entries;
    std::optional<std::uint64_t> seed;

    /// Throws InputError on duplicates or digits outside 0..9.
    void validate() const;
};

/// `digit,ordinal` per line; `#` starts a comment; blank lines ignored.
/// A `# seed: N` comment restores the seed.
ReferenceSpec parse_reference_spec(std::string_view text);
std::string format_reference_spec(const ReferenceSpec& spec);
ReferenceSpec load_reference_spec(const std::string& path);

/// Seeded balanced draw without replacement. Entries are ordered by digit,
/// then draw order, so reference k has digit k / per_class. Increasing
/// per_class with the same seed extends every class's draw without changing
/// the earlier entries.
ReferenceSpec select_references(std::span<const std::uint8_t> labels, int per_class, std::uint64_t seed);

/// Resolves ordinals to dataset positions and binarizes.
std::vector<Reference> materialize(const ReferenceSpec& spec, const Dataset& data, int bin_threshold);

struct DigitRow {
    std::size_t correct = 0;   // s_j
    std::size_t total = 0;     // i_j
    std::size_t rejected = 0;  // strict-mode rejections, counted as incorrect

    friend bool operator==(const DigitRow&, const DigitRow&) = default;
};

struct EvalReport {
    std::array<DigitRow, kDigits> rows{};

    std::size_t total() const;
    std::size_t correct() const;
    std::size_t rejected() const;
    int percent(int digit) const;
    int overall_percent() const;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// round-half-up(100 * correct / total); 0 when total is 0.
int rounded_percent(std::size_t correct, std::size_t total);

/// Classifies every image; `threads` = 0 uses hardware concurrency.
EvalReport evaluate(const Network& net, const Dataset& data, Mode mode = Mode::Strict, unsigned threads = 0);

/// CSV: header `label,total,correct,percent,rejected`, ten digit rows, then
/// `total,<total>,<correct>,<pct>%,<rejected>`.
std::string export_csv(const EvalReport& report);
std::string export_json(const EvalReport& report);
EvalReport parse_csv_report(std::string_view text);
EvalReport parse_json_report(std::string_view text);

enum class SweepParameter { PlaneGap, Charge, PerClass };

SweepParameter parse_sweep_parameter(std::string_view text);

struct SweepPoint {
    double value = 0.0;
    std::optional<EvalReport> report;
    std::string error;  // set when this point failed
};

/// Builds a network for a config and per-class count. References must be a
/// deterministic function of per_class so the set stays fixed across a sweep.
using NetworkBuilder = std::function<Network(const PhysicalConfig&, int per_class)>;

/// One build + evaluation per value, starting from `base` / `base_per_class`.
/// Plane gap values are meters. A failing value is recorded, not rethrown.
std::vector<SweepPoint> sweep(const NetworkBuilder& builder, const PhysicalConfig& base, int base_per_class,
                              SweepParameter parameter, std::span<const double> values, const Dataset& data,
                              Mode mode = Mode::Strict);

}  // namespace efnet
