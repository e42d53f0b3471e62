#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace efnet {

inline constexpr int kSide = 28;
inline constexpr int kPixels = kSide * kSide;
inline constexpr int kDigits = 10;
inline constexpr int kDefaultBinThreshold = 150;

struct Cell {
    int row = 0;
    int col = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
};

constexpr int linear_index(Cell c) noexcept { return c.row * kSide + c.col; }
constexpr Cell cell_at(int index) noexcept { return {index / kSide, index % kSide}; }

/// Row-major 28x28 grayscale intensities.
using PixelGrid = std::array<std::uint8_t, kPixels>;

struct RawImage {
    PixelGrid pixels{};
    int label = 0;
};

/// Thresholded image: the set of white (charged) cells.
///
/// Active cells are kept as sorted, unique row-major indices, so iteration
/// order is always row-major. Every summation over an image in this library
/// relies on that order for bit-reproducible results.
class BinaryImage {
public:
    BinaryImage() = default;

    /// Builds from arbitrary cells; duplicates collapse, out-of-range cells throw DataError.
    static BinaryImage from_cells(std::span<const Cell> cells);
    static BinaryImage from_indices(std::span<const std::uint16_t> indices);

    std::span<const std::uint16_t> active() const noexcept { return active_; }
    std::size_t count() const noexcept { return active_.size(); }
    bool empty() const noexcept { return active_.empty(); }
    bool contains(Cell c) const noexcept;
    std::vector<Cell> cells() const;

    friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

private:
    std::vector<std::uint16_t> active_;
};

/// White iff intensity is strictly greater than the threshold.
BinaryImage binarize(const PixelGrid& pixels, int threshold = kDefaultBinThreshold);

// IDX container (big-endian). Errors raise FormatError / DataError naming the field.
std::vector<PixelGrid> load_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path);

std::vector<PixelGrid> parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes);

// Writers, mainly for fixtures and tools.
std::vector<std::uint8_t> encode_idx_images(std::span<const PixelGrid> images);
std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels);

struct Dataset {
    std::vector<PixelGrid> images;
    std::vector<std::uint8_t> labels;

    std::size_t size() const noexcept { return labels.size(); }
    RawImage at(std::size_t i) const;
};

/// Loads a paired image/label file set; counts must agree.
Dataset load_dataset(const std::filesystem::path& images, const std::filesystem::path& labels);

/// Per-digit dataset positions, in file order.
class DatasetIndex {
public:
    explicit DatasetIndex(std::span<const std::uint8_t> labels);

    std::span<const std::size_t> positions(int digit) const;
    std::size_t class_count(int digit) const { return positions(digit).size(); }
    std::array<std::size_t, kDigits> class_counts() const;
    std::size_t total() const noexcept { return total_; }

private:
    std::array<std::vector<std::size_t>, kDigits> by_digit_;
    std::size_t total_ = 0;
};

/// Position of the ordinal-th (0-based) image of `digit`. LookupError when out of range.
std::size_t resolve_class_ordinal(const DatasetIndex& index, int digit, std::size_t ordinal);

/// How the number in a name such as "0_157" is interpreted.
enum class NameConvention {
    DatasetPosition,  // 157 is the position in the file; its label must be 0
    ClassOrdinal0,    // 157 is the 0-based ordinal among the zeros
    ClassOrdinal1,    // 1-based ordinal among the zeros
};

NameConvention parse_name_convention(std::string_view text);
std::string_view to_string(NameConvention convention) noexcept;

struct ImageName {
    int digit = 0;
    std::size_t number = 0;
};

/// Parses "<digit>_<number>". LookupError on malformed names.
ImageName parse_image_name(std::string_view name);

/// Resolves a name to a dataset position. LookupError when it does not exist
/// or (DatasetPosition) when the label at that position disagrees.
std::size_t resolve_image_name(std::span<const std::uint8_t> labels, const DatasetIndex& index,
                               const ImageName& name, NameConvention convention);

}  // namespace efnet
