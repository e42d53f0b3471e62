#include "efnet/mnist_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>

#include "efnet/errors.hpp"

namespace efnet {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::string hex32(std::uint32_t v) {
    char buf[11] = "0x";
    auto [end, ec] = std::to_chars(buf + 2, buf + sizeof(buf), v, 16);
    std::string digits(buf + 2, end);
    return "0x" + std::string(8 - digits.size(), '0') + digits;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

BinaryImage BinaryImage::from_cells(std::span<const Cell> cells) {
    std::vector<std::uint16_t> indices;
    indices.reserve(cells.size());
    for (const Cell& c : cells) {
        if (c.row < 0 || c.row >= kSide || c.col < 0 || c.col >= kSide)
            throw DataError("cell (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                            ") outside the 28x28 grid");
        indices.push_back(static_cast<std::uint16_t>(linear_index(c)));
    }
    return from_indices(indices);
}

BinaryImage BinaryImage::from_indices(std::span<const std::uint16_t> indices) {
    BinaryImage img;
    img.active_.assign(indices.begin(), indices.end());
    for (auto i : img.active_)
        if (i >= kPixels) throw DataError("pixel index " + std::to_string(i) + " outside the 28x28 grid");
    std::sort(img.active_.begin(), img.active_.end());
    img.active_.erase(std::unique(img.active_.begin(), img.active_.end()), img.active_.end());
    return img;
}

bool BinaryImage::contains(Cell c) const noexcept {
    if (c.row < 0 || c.row >= kSide || c.col < 0 || c.col >= kSide) return false;
    return std::binary_search(active_.begin(), active_.end(), static_cast<std::uint16_t>(linear_index(c)));
}

std::vector<Cell> BinaryImage::cells() const {
    std::vector<Cell> out;
    out.reserve(active_.size());
    for (auto i : active_) out.push_back(cell_at(i));
    return out;
}

BinaryImage binarize(const PixelGrid& pixels, int threshold) {
    std::vector<std::uint16_t> active;
    for (int i = 0; i < kPixels; ++i)
        if (pixels[static_cast<std::size_t>(i)] > threshold) active.push_back(static_cast<std::uint16_t>(i));
    return BinaryImage::from_indices(active);
}

std::vector<PixelGrid> parse_idx_images(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= 4 && read_be32(bytes, 0) != kImageMagic)
        throw FormatError("image file: magic " + hex32(read_be32(bytes, 0)) + ", expected " + hex32(kImageMagic));
    if (bytes.size() < 16) throw FormatError("image file: header truncated (" + std::to_string(bytes.size()) + " bytes)");
    const std::uint32_t count = read_be32(bytes, 4);
    const std::uint32_t rows = read_be32(bytes, 8);
    const std::uint32_t cols = read_be32(bytes, 12);
    if (rows != kSide || cols != kSide)
        throw FormatError("image file: dims " + std::to_string(rows) + "x" + std::to_string(cols) + ", expected 28x28");
    const std::size_t need = 16 + std::size_t{count} * kPixels;
    if (bytes.size() < need)
        throw FormatError("image file: count " + std::to_string(count) + " needs " + std::to_string(need) +
                          " bytes, file has " + std::to_string(bytes.size()) + " (truncated)");
    std::vector<PixelGrid> images(count);
    for (std::size_t i = 0; i < count; ++i)
        std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(16 + i * kPixels), kPixels, images[i].begin());
    return images;
}

std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8) throw FormatError("label file: header truncated (" + std::to_string(bytes.size()) + " bytes)");
    const std::uint32_t magic = read_be32(bytes, 0);
    if (magic != kLabelMagic)
        throw FormatError("label file: magic " + hex32(magic) + ", expected " + hex32(kLabelMagic));
    const std::uint32_t count = read_be32(bytes, 4);
    if (bytes.size() < 8 + std::size_t{count})
        throw FormatError("label file: count " + std::to_string(count) + " exceeds payload of " +
                          std::to_string(bytes.size() - 8) + " bytes (truncated)");
    std::vector<std::uint8_t> labels(bytes.begin() + 8, bytes.begin() + 8 + count);
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] > 9)
            throw DataError("label file: label " + std::to_string(labels[i]) + " at position " + std::to_string(i) +
                            " is not a digit");
    return labels;
}

std::vector<PixelGrid> load_idx_images(const std::filesystem::path& path) { return parse_idx_images(read_file(path)); }

std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path) { return parse_idx_labels(read_file(path)); }

std::vector<std::uint8_t> encode_idx_images(std::span<const PixelGrid> images) {
    std::vector<std::uint8_t> out;
    out.reserve(16 + images.size() * kPixels);
    write_be32(out, kImageMagic);
    write_be32(out, static_cast<std::uint32_t>(images.size()));
    write_be32(out, kSide);
    write_be32(out, kSide);
    for (const auto& img : images) out.insert(out.end(), img.begin(), img.end());
    return out;
}

std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels) {
    std::vector<std::uint8_t> out;
    out.reserve(8 + labels.size());
    write_be32(out, kLabelMagic);
    write_be32(out, static_cast<std::uint32_t>(labels.size()));
    out.insert(out.end(), labels.begin(), labels.end());
    return out;
}

RawImage Dataset::at(std::size_t i) const { return {images.at(i), labels.at(i)}; }

Dataset load_dataset(const std::filesystem::path& images, const std::filesystem::path& labels) {
    Dataset ds{load_idx_images(images), load_idx_labels(labels)};
    if (ds.images.size() != ds.labels.size())
        throw FormatError("label count " + std::to_string(ds.labels.size()) + " does not match image count " +
                          std::to_string(ds.images.size()));
    return ds;
}

DatasetIndex::DatasetIndex(std::span<const std::uint8_t> labels) : total_(labels.size()) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] > 9) throw DataError("label " + std::to_string(labels[i]) + " at position " + std::to_string(i));
        by_digit_[labels[i]].push_back(i);
    }
}

std::span<const std::size_t> DatasetIndex::positions(int digit) const {
    if (digit < 0 || digit >= kDigits) throw LookupError("digit " + std::to_string(digit) + " is not in 0..9");
    return by_digit_[static_cast<std::size_t>(digit)];
}

std::array<std::size_t, kDigits> DatasetIndex::class_counts() const {
    std::array<std::size_t, kDigits> counts{};
    for (int d = 0; d < kDigits; ++d) counts[static_cast<std::size_t>(d)] = by_digit_[static_cast<std::size_t>(d)].size();
    return counts;
}

std::size_t resolve_class_ordinal(const DatasetIndex& index, int digit, std::size_t ordinal) {
    const auto positions = index.positions(digit);
    if (ordinal >= positions.size())
        throw LookupError("digit " + std::to_string(digit) + " has " + std::to_string(positions.size()) +
                          " images, ordinal " + std::to_string(ordinal) + " out of range");
    return positions[ordinal];
}

NameConvention parse_name_convention(std::string_view text) {
    if (text == "position") return NameConvention::DatasetPosition;
    if (text == "ordinal0") return NameConvention::ClassOrdinal0;
    if (text == "ordinal1") return NameConvention::ClassOrdinal1;
    throw InputError("unknown naming convention '" + std::string(text) + "' (position|ordinal0|ordinal1)");
}

std::string_view to_string(NameConvention convention) noexcept {
    switch (convention) {
        case NameConvention::DatasetPosition: return "position";
        case NameConvention::ClassOrdinal0: return "ordinal0";
        case NameConvention::ClassOrdinal1: return "ordinal1";
    }
    return "?";
}

ImageName parse_image_name(std::string_view name) {
    const auto sep = name.find('_');
    if (sep != 1 || name.size() < 3 || name[0] < '0' || name[0] > '9')
        throw LookupError("malformed image name '" + std::string(name) + "' (expected <digit>_<index>)");
    ImageName out{name[0] - '0', 0};
    const auto* first = name.data() + 2;
    const auto* last = name.data() + name.size();
    auto [ptr, ec] = std::from_chars(first, last, out.number);
    if (ec != std::errc{} || ptr != last)
        throw LookupError("malformed image name '" + std::string(name) + "' (expected <digit>_<index>)");
    return out;
}

std::size_t resolve_image_name(std::span<const std::uint8_t> labels, const DatasetIndex& index,
                               const ImageName& name, NameConvention convention) {
    switch (convention) {
        case NameConvention::DatasetPosition:
            if (name.number >= labels.size())
                throw LookupError("position " + std::to_string(name.number) + " beyond dataset of " +
                                  std::to_string(labels.size()));
            if (labels[name.number] != name.digit)
                throw LookupError("image at position " + std::to_string(name.number) + " is a " +
                                  std::to_string(labels[name.number]) + ", not a " + std::to_string(name.digit));
            return name.number;
        case NameConvention::ClassOrdinal0:
            return resolve_class_ordinal(index, name.digit, name.number);
        case NameConvention::ClassOrdinal1:
            if (name.number == 0) throw LookupError("1-based ordinal 0 does not exist");
            return resolve_class_ordinal(index, name.digit, name.number - 1);
    }
    throw LookupError("unknown naming convention");
}

}  // namespace efnet
