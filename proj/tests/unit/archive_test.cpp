#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <random>

#include "efnet/archive.hpp"
#include "efnet/errors.hpp"
#include "oracle.hpp"

namespace efnet {
namespace {

Network small_net(std::uint64_t seed, int per_class = 1) {
    std::mt19937_64 rng(seed);
    std::vector<Reference> refs;
    for (int d = 0; d < kDigits; ++d)
        for (int j = 0; j < per_class; ++j)
            refs.push_back({d, testing::random_image(rng, 80 + d * 5 + j), static_cast<std::int64_t>(d * 100 + j)});
    PhysicalConfig cfg;
    cfg.plane_gap = 0.03;
    return build_network(refs, cfg);
}

// Byte offset of neuron 0's first weight.
std::size_t first_weight_offset(const Network& net) {
    std::size_t off = 8 + 4 + 4 * 8 + 4 + 4;
    for (const auto& r : net.references()) off += 4 + 8 + 4 + 2 * r.image.count();
    return off + 4 + 4 + 4 + 8;
}

TEST(Archive, RoundTripIsByteIdentical) {
    const auto net = small_net(1);
    const auto bytes = encode_network(net);
    const auto back = decode_network(bytes);
    EXPECT_EQ(encode_network(back), bytes);
    EXPECT_TRUE(back.config() == net.config());
    ASSERT_EQ(back.size(), net.size());
    for (int k = 0; k < net.size(); ++k) {
        EXPECT_EQ(back.references()[static_cast<std::size_t>(k)].image, net.references()[static_cast<std::size_t>(k)].image);
        EXPECT_EQ(back.references()[static_cast<std::size_t>(k)].source, net.references()[static_cast<std::size_t>(k)].source);
    }
}

TEST(Archive, EncodingIsDeterministic) {
    EXPECT_EQ(encode_network(small_net(2)), encode_network(small_net(2)));
    EXPECT_NE(encode_network(small_net(2)), encode_network(small_net(3)));
}

TEST(Archive, TamperedWeightIsRejected) {
    const auto net = small_net(4);
    auto bytes = encode_network(net);
    const auto off = first_weight_offset(net);
    double w = 0.0;
    std::memcpy(&w, bytes.data() + off, sizeof w);
    ASSERT_EQ(w, net.neurons()[0].weights.values[0]);
    w *= 1.0 + 1e-9;
    std::memcpy(bytes.data() + off, &w, sizeof w);
    EXPECT_THROW(decode_network(bytes), BuildError);
}

TEST(Archive, CorruptFramingIsFormatError) {
    const auto bytes = encode_network(small_net(5));
    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    EXPECT_THROW(decode_network(bad_magic), FormatError);

    auto bad_version = bytes;
    bad_version[8] = 9;
    EXPECT_THROW(decode_network(bad_version), FormatError);

    for (std::size_t cut : {std::size_t{0}, std::size_t{7}, std::size_t{40}, bytes.size() / 2, bytes.size() - 1}) {
        const std::vector<std::uint8_t> truncated(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(cut));
        EXPECT_THROW(decode_network(truncated), FormatError) << "cut at " << cut;
    }
    auto trailing = bytes;
    trailing.push_back(0);
    EXPECT_THROW(decode_network(trailing), FormatError);
}

TEST(Archive, SaveAndLoadThroughFiles) {
    const auto dir = std::filesystem::temp_directory_path() / "efnet_archive_test";
    std::filesystem::create_directories(dir);
    const auto net = small_net(6, 2);
    save_network(net, dir / "net.efn");
    EXPECT_EQ(encode_network(load_network(dir / "net.efn")), encode_network(net));
    EXPECT_THROW(load_network(dir / "missing.efn"), IoError);
    std::filesystem::remove_all(dir);
}

TEST(Archive, CascadedNetworkRoundTrips) {
    std::mt19937_64 rng(7);
    const auto grown = add_reference(small_net(7), 3, testing::random_image(rng, 77));
    const auto back = decode_network(encode_network(grown));
    EXPECT_EQ(back.neuron_count(), 110u);
    EXPECT_EQ(encode_network(back), encode_network(grown));
}

}  // namespace
}  // namespace efnet
