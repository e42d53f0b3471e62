#include "efnet/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "efnet/errors.hpp"

namespace efnet {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    s = trim(s);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

// Uniform integer in [0, n) by rejection; stable across standard libraries.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return x % n;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        lines.push_back(text.substr(0, nl));
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = line.find(',');
        out.push_back(trim(line.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

void ReferenceSpec::validate() const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (e.digit < 0 || e.digit >= kDigits)
            throw InputError("reference entry " + std::to_string(i) + ": digit " + std::to_string(e.digit) + " is not in 0..9");
        for (std::size_t j = 0; j < i; ++j)
            if (entries[j] == e)
                throw InputError("duplicate reference " + std::to_string(e.digit) + "," + std::to_string(e.ordinal) +
                                 " (entries " + std::to_string(j) + " and " + std::to_string(i) + ")");
    }
}

ReferenceSpec parse_reference_spec(std::string_view text) {
    ReferenceSpec spec;
    int line_no = 0;
    for (auto line : split_lines(text)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string_view::npos) {
            auto comment = trim(line.substr(hash + 1));
            if (comment.starts_with("seed:")) {
                std::uint64_t seed = 0;
                if (parse_number(comment.substr(5), seed)) spec.seed = seed;
            }
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        int digit = 0;
        std::size_t ordinal = 0;
        if (fields.size() != 2 || !parse_number(fields[0], digit) || !parse_number(fields[1], ordinal))
            throw InputError("reference spec line " + std::to_string(line_no) + ": expected 'digit,ordinal', got '" +
                             std::string(line) + "'");
        spec.entries.push_back({digit, ordinal});
    }
    spec.validate();
    return spec;
}

std::string format_reference_spec(const ReferenceSpec& spec) {
    std::ostringstream out;
    out << "# digit,ordinal (0-based among images of that digit, file order)\n";
    if (spec.seed) out << "# seed: " << *spec.seed << '\n';
    for (const auto& e : spec.entries) out << e.digit << ',' << e.ordinal << '\n';
    return out.str();
}

ReferenceSpec load_reference_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open reference spec " + path);
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_reference_spec(text);
}

ReferenceSpec select_references(std::span<const std::uint8_t> labels, int per_class, std::uint64_t seed) {
    if (per_class < 1) throw SelectionError("per-class count must be at least 1, got " + std::to_string(per_class));
    const DatasetIndex index(labels);
    ReferenceSpec spec;
    spec.seed = seed;
    for (int d = 0; d < kDigits; ++d) {
        const std::size_t n = index.class_count(d);
        if (n < static_cast<std::size_t>(per_class))
            throw SelectionError("digit " + std::to_string(d) + " has " + std::to_string(n) + " images, need " +
                                 std::to_string(per_class));
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(d)};
        std::mt19937_64 rng(seq);
        std::vector<std::size_t> ordinals(n);
        for (std::size_t i = 0; i < n; ++i) ordinals[i] = i;
        for (std::size_t i = 0; i < static_cast<std::size_t>(per_class); ++i) {
            const std::size_t j = i + static_cast<std::size_t>(draw_below(rng, n - i));
            std::swap(ordinals[i], ordinals[j]);
            spec.entries.push_back({d, ordinals[i]});
        }
    }
    return spec;
}

std::vector<Reference> materialize(const ReferenceSpec& spec, const Dataset& data, int bin_threshold) {
    spec.validate();
    const DatasetIndex index(data.labels);
    std::vector<Reference> refs;
    refs.reserve(spec.entries.size());
    for (const auto& e : spec.entries) {
        const std::size_t pos = resolve_class_ordinal(index, e.digit, e.ordinal);
        refs.push_back({e.digit, binarize(data.images[pos], bin_threshold), static_cast<std::int64_t>(pos)});
    }
    return refs;
}

int rounded_percent(std::size_t correct, std::size_t total) {
    if (total == 0) return 0;
    return static_cast<int>((200 * correct + total) / (2 * total));
}

std::size_t EvalReport::total() const {
    std::size_t t = 0;
    for (const auto& r : rows) t += r.total;
    return t;
}

std::size_t EvalReport::correct() const {
    std::size_t t = 0;
    for (const auto& r : rows) t += r.correct;
    return t;
}

std::size_t EvalReport::rejected() const {
    std::size_t t = 0;
    for (const auto& r : rows) t += r.rejected;
    return t;
}

int EvalReport::percent(int digit) const {
    const auto& r = rows.at(static_cast<std::size_t>(digit));
    return rounded_percent(r.correct, r.total);
}

int EvalReport::overall_percent() const { return rounded_percent(correct(), total()); }

EvalReport evaluate(const Network& net, const Dataset& data, Mode mode, unsigned threads) {
    if (data.images.size() != data.labels.size())
        throw InputError("dataset has " + std::to_string(data.images.size()) + " images but " +
                         std::to_string(data.labels.size()) + " labels");
    const std::size_t n = data.size();
    // -1 rejected, otherwise the decided digit
    std::vector<std::int8_t> decisions(n, -1);
    if (n > 0) {
        const BatchClassifier engine(net);
        const int threshold = net.config().bin_threshold;
        if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
        threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
        auto work = [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                const Decision d = engine.classify(binarize(data.images[i], threshold), mode);
                decisions[i] = d ? static_cast<std::int8_t>(*d) : std::int8_t{-1};
            }
        };
        if (threads == 1) {
            work(0, n);
        } else {
            std::vector<std::jthread> pool;
            const std::size_t chunk = (n + threads - 1) / threads;
            for (std::size_t begin = 0; begin < n; begin += chunk) pool.emplace_back(work, begin, std::min(n, begin + chunk));
        }
    }
    EvalReport report;
    for (std::size_t i = 0; i < n; ++i) {
        auto& row = report.rows[data.labels[i]];
        ++row.total;
        if (decisions[i] < 0) ++row.rejected;
        else if (decisions[i] == data.labels[i]) ++row.correct;
    }
    return report;
}

std::string export_csv(const EvalReport& report) {
    std::ostringstream out;
    out << "label,total,correct,percent,rejected\n";
    for (int d = 0; d < kDigits; ++d) {
        const auto& r = report.rows[static_cast<std::size_t>(d)];
        out << d << ',' << r.total << ',' << r.correct << ',' << report.percent(d) << "%," << r.rejected << '\n';
    }
    out << "total," << report.total() << ',' << report.correct() << ',' << report.overall_percent() << "%,"
        << report.rejected() << '\n';
    return out.str();
}

std::string export_json(const EvalReport& report) {
    nlohmann::ordered_json j;
    auto digits = nlohmann::ordered_json::array();
    for (int d = 0; d < kDigits; ++d) {
        const auto& r = report.rows[static_cast<std::size_t>(d)];
        nlohmann::ordered_json row;
        row["digit"] = d;
        row["total"] = r.total;
        row["correct"] = r.correct;
        row["percent"] = report.percent(d);
        row["rejected"] = r.rejected;
        digits.push_back(std::move(row));
    }
    j["digits"] = std::move(digits);
    j["total"] = report.total();
    j["correct"] = report.correct();
    j["percent"] = report.overall_percent();
    j["rejected"] = report.rejected();
    return j.dump(2) + "\n";
}

EvalReport parse_csv_report(std::string_view text) {
    EvalReport report;
    std::array<bool, kDigits> seen{};
    bool totals = false;
    for (auto line : split_lines(text)) {
        line = trim(line);
        if (line.empty() || line.starts_with("label")) continue;
        const auto f = split_fields(line);
        if (f.size() != 5) throw FormatError("report csv: expected 5 fields in '" + std::string(line) + "'");
        DigitRow row;
        if (!parse_number(f[1], row.total) || !parse_number(f[2], row.correct) || !parse_number(f[4], row.rejected))
            throw FormatError("report csv: bad count in '" + std::string(line) + "'");
        if (f[0] == "total") {
            totals = true;
            if (row.total != report.total() || row.correct != report.correct() || row.rejected != report.rejected())
                throw FormatError("report csv: totals row disagrees with digit rows");
            continue;
        }
        int digit = -1;
        if (!parse_number(f[0], digit) || digit < 0 || digit >= kDigits)
            throw FormatError("report csv: bad label '" + std::string(f[0]) + "'");
        report.rows[static_cast<std::size_t>(digit)] = row;
        seen[static_cast<std::size_t>(digit)] = true;
    }
    if (!totals || std::find(seen.begin(), seen.end(), false) != seen.end())
        throw FormatError("report csv: expected ten digit rows and a totals row");
    return report;
}

EvalReport parse_json_report(std::string_view text) {
    EvalReport report;
    try {
        const auto j = nlohmann::json::parse(text);
        for (const auto& row : j.at("digits")) {
            const int d = row.at("digit").get<int>();
            if (d < 0 || d >= kDigits) throw FormatError("report json: bad digit " + std::to_string(d));
            auto& r = report.rows[static_cast<std::size_t>(d)];
            r.total = row.at("total").get<std::size_t>();
            r.correct = row.at("correct").get<std::size_t>();
            r.rejected = row.at("rejected").get<std::size_t>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("report json: ") + e.what());
    }
    return report;
}

SweepParameter parse_sweep_parameter(std::string_view text) {
    if (text == "d2") return SweepParameter::PlaneGap;
    if (text == "q") return SweepParameter::Charge;
    if (text == "per-class" || text == "per_class") return SweepParameter::PerClass;
    throw InputError("unknown sweep parameter '" + std::string(text) + "' (d2|q|per-class)");
}

std::vector<SweepPoint> sweep(const NetworkBuilder& builder, const PhysicalConfig& base, int base_per_class,
                              SweepParameter parameter, std::span<const double> values, const Dataset& data, Mode mode) {
    if (values.empty()) throw InputError("sweep needs at least one value");
    for (double v : values)
        if (!(std::isfinite(v) && v > 0.0)) throw InputError("sweep values must be positive, got " + std::to_string(v));

    std::vector<SweepPoint> points;
    for (double v : values) {
        SweepPoint point{v, std::nullopt, {}};
        try {
            PhysicalConfig cfg = base;
            int per_class = base_per_class;
            switch (parameter) {
                case SweepParameter::PlaneGap: cfg.plane_gap = v; break;
                case SweepParameter::Charge: cfg.charge = v; break;
                case SweepParameter::PerClass:
                    if (v != std::floor(v)) throw InputError("per-class value must be an integer, got " + std::to_string(v));
                    per_class = static_cast<int>(v);
                    break;
            }
            point.report = evaluate(builder(cfg, per_class), data, mode);
        } catch (const std::exception& e) {
            point.error = e.what();
        }
        points.push_back(std::move(point));
    }
    return points;
}

}  // namespace efnet
