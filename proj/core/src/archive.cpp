#include "efnet/archive.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "efnet/errors.hpp"
#include "efnet/table_io.hpp"

namespace efnet {
namespace {

constexpr char kMagic[8] = {'E', 'F', 'N', 'E', 'T', 'A', 'R', 'C'};

class Writer {
public:
    template <typename T>
    void put(T value) {
        static_assert(std::is_trivially_copyable_v<T>);
        std::uint8_t raw[sizeof(T)];
        std::memcpy(raw, &value, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
        bytes_.insert(bytes_.end(), raw, raw + sizeof(T));
    }
    void raw(const void* data, std::size_t n) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        bytes_.insert(bytes_.end(), p, p + n);
    }
    std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    template <typename T>
    T get(const char* field) {
        need(sizeof(T), field);
        std::uint8_t raw[sizeof(T)];
        std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
        pos_ += sizeof(T);
        T value;
        std::memcpy(&value, raw, sizeof(T));
        return value;
    }
    void expect_magic() {
        need(sizeof(kMagic), "magic");
        if (std::memcmp(bytes_.data(), kMagic, sizeof(kMagic)) != 0) throw FormatError("archive: bad magic (not a network archive)");
        pos_ += sizeof(kMagic);
    }
    bool done() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n, const char* field) {
        if (bytes_.size() - pos_ < n) throw FormatError(std::string("archive: truncated while reading ") + field);
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_network(const Network& net) {
    Writer w;
    w.raw(kMagic, sizeof(kMagic));
    w.put<std::uint32_t>(kArchiveVersion);
    const auto& cfg = net.config();
    w.put(cfg.coulomb_k);
    w.put(cfg.charge);
    w.put(cfg.pixel_pitch);
    w.put(cfg.plane_gap);
    w.put<std::int32_t>(cfg.bin_threshold);

    w.put<std::uint32_t>(static_cast<std::uint32_t>(net.size()));
    for (const auto& ref : net.references()) {
        w.put<std::int32_t>(ref.digit);
        w.put<std::int64_t>(ref.source);
        w.put<std::uint32_t>(static_cast<std::uint32_t>(ref.image.count()));
        for (auto p : ref.image.active()) w.put<std::uint16_t>(p);
    }

    w.put<std::uint32_t>(static_cast<std::uint32_t>(net.neuron_count()));
    for (const auto& neuron : net.neurons()) {
        w.put<std::uint32_t>(static_cast<std::uint32_t>(neuron.k));
        w.put<std::uint32_t>(static_cast<std::uint32_t>(neuron.k1));
        w.put(neuron.wh1);
        for (double v : neuron.weights.values) w.put(v);
    }
    return w.take();
}

Network decode_network(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    r.expect_magic();
    const auto version = r.get<std::uint32_t>("version");
    if (version != kArchiveVersion) throw FormatError("archive: unsupported version " + std::to_string(version));

    PhysicalConfig cfg;
    cfg.coulomb_k = r.get<double>("coulomb_k");
    cfg.charge = r.get<double>("charge");
    cfg.pixel_pitch = r.get<double>("pixel_pitch");
    cfg.plane_gap = r.get<double>("plane_gap");
    cfg.bin_threshold = r.get<std::int32_t>("bin_threshold");

    const auto n_refs = r.get<std::uint32_t>("reference count");
    if (n_refs > 100000) throw FormatError("archive: implausible reference count " + std::to_string(n_refs));
    std::vector<Reference> refs;
    refs.reserve(n_refs);
    for (std::uint32_t i = 0; i < n_refs; ++i) {
        Reference ref;
        ref.digit = r.get<std::int32_t>("reference digit");
        ref.source = r.get<std::int64_t>("reference source");
        const auto n_active = r.get<std::uint32_t>("active count");
        if (n_active > kPixels) throw FormatError("archive: reference " + std::to_string(i) + " has " + std::to_string(n_active) + " active pixels");
        std::vector<std::uint16_t> active(n_active);
        for (auto& p : active) p = r.get<std::uint16_t>("active pixel");
        ref.image = BinaryImage::from_indices(active);
        refs.push_back(std::move(ref));
    }

    const auto n_neurons = r.get<std::uint32_t>("neuron count");
    if (std::uint64_t{n_refs} * (n_refs ? n_refs - 1 : 0) != n_neurons)
        throw FormatError("archive: " + std::to_string(n_neurons) + " neurons for " + std::to_string(n_refs) + " references");
    std::vector<PairNeuron> neurons(n_neurons);
    for (auto& neuron : neurons) {
        neuron.k = static_cast<int>(r.get<std::uint32_t>("neuron k"));
        neuron.k1 = static_cast<int>(r.get<std::uint32_t>("neuron k1"));
        neuron.wh1 = r.get<double>("neuron threshold");
        for (double& v : neuron.weights.values) v = r.get<double>("neuron weight");
    }
    if (!r.done()) throw FormatError("archive: trailing bytes after the last neuron");
    return Network::from_parts(cfg, std::move(refs), std::move(neurons));
}

void save_network(const Network& net, const std::filesystem::path& path) { write_binary_file(path, encode_network(net)); }

Network load_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open archive " + path.string());
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return decode_network(bytes);
}

}  // namespace efnet
