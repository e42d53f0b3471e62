#include "efnet/table_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "efnet/errors.hpp"

namespace efnet {

std::string grid_to_csv(const Grid& grid) {
    std::string out;
    char buf[32];
    for (int r = 0; r < kSide; ++r) {
        for (int c = 0; c < kSide; ++c) {
            if (c) out.push_back(',');
            auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), grid[static_cast<std::size_t>(r * kSide + c)]);
            out.append(buf, end);
        }
        out.push_back('\n');
    }
    return out;
}

Grid grid_from_csv(const std::string& text) {
    Grid grid{};
    std::istringstream in(text);
    std::string line;
    int r = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (r >= kSide) throw FormatError("table csv: more than 28 rows");
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (int c = 0; c < kSide; ++c) {
            double v = 0.0;
            auto [next, ec] = std::from_chars(p, end, v);
            if (ec != std::errc{}) throw FormatError("table csv: bad number in row " + std::to_string(r));
            grid[static_cast<std::size_t>(r * kSide + c)] = v;
            p = next;
            if (c + 1 < kSide) {
                if (p == end || *p != ',') throw FormatError("table csv: row " + std::to_string(r) + " has fewer than 28 columns");
                ++p;
            }
        }
        if (p != end) throw FormatError("table csv: row " + std::to_string(r) + " has more than 28 columns");
        ++r;
    }
    if (r != kSide) throw FormatError("table csv: expected 28 rows, got " + std::to_string(r));
    return grid;
}

std::vector<std::uint8_t> grid_to_pgm(const Grid& grid) {
    const std::string header = "P5\n28 28\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    const auto [lo_it, hi_it] = std::minmax_element(grid.begin(), grid.end());
    const double lo = *lo_it;
    const double span = *hi_it - lo;
    for (double v : grid) {
        const double scaled = span > 0.0 ? (v - lo) / span * 255.0 : 0.0;
        out.push_back(static_cast<std::uint8_t>(std::clamp(std::lround(scaled), 0L, 255L)));
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
}

void write_binary_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace efnet
