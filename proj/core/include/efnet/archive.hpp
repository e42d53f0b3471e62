#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "efnet/metric_net.hpp"

namespace efnet {

// Binary network archive, all integers and doubles little-endian:
//
//   "EFNETARC" | u32 version
//   f64 coulomb_k | f64 charge | f64 pixel_pitch | f64 plane_gap | i32 bin_threshold
//   u32 n_refs, then per reference:
//       i32 digit | i64 source | u32 n_active | u16 active[n_active]
//   u32 n_neurons, then per neuron (canonical order):
//       u32 k | u32 k1 | f64 wh1 | f64 weights[784]
//
// Loading recomputes the field from the stored references and config and
// rejects the archive if any stored weight or threshold differs.

inline constexpr std::uint32_t kArchiveVersion = 1;

std::vector<std::uint8_t> encode_network(const Network& net);
Network decode_network(std::span<const std::uint8_t> bytes);

void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

}  // namespace efnet
