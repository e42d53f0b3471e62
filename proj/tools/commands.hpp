#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "efnet/field.hpp"
#include "efnet/metric_net.hpp"

namespace efnet::cli {

/// Flags shared by the subcommands. Lengths arrive in centimeters.
struct RunConfig {
    std::string images;
    std::string labels;
    double q = 1e-9;
    double d1_cm = 2.0;
    double d2_cm = 4.0;
    double coulomb_k = 8.9875e9;
    int bin_threshold = 150;
    std::optional<int> per_class;
    std::uint64_t seed = 0;
    std::string ref_spec;
    Mode mode = Mode::Strict;
    std::string out = ".";

    // Physical flags the user typed explicitly; eval checks these against the archive.
    bool physical_given = false;

    PhysicalConfig physical() const;
};

int cmd_build(const RunConfig& rc);
int cmd_eval(const RunConfig& rc, const std::string& archive, std::optional<std::size_t> limit);

struct DumpRequest {
    std::string archive;
    std::optional<std::pair<int, int>> pair;  // reference indices inside the archive
    std::vector<std::string> names;           // "0_157", "1_46"
    NameConvention naming = NameConvention::DatasetPosition;
};
int cmd_dump_weights(const RunConfig& rc, const DumpRequest& req);

int cmd_add_refs(const RunConfig& rc, const std::string& archive);
int cmd_sweep(const RunConfig& rc, const std::string& parameter, const std::vector<double>& values);
int cmd_select(const RunConfig& rc);

}  // namespace efnet::cli
