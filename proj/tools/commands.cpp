#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "efnet/archive.hpp"
#include "efnet/errors.hpp"
#include "efnet/harness.hpp"
#include "efnet/mnist_io.hpp"
#include "efnet/table_io.hpp"

namespace efnet::cli {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

Dataset load_data(const RunConfig& rc) {
    if (rc.images.empty() || rc.labels.empty()) throw InputError("--images and --labels are required");
    return load_dataset(rc.images, rc.labels);
}

ReferenceSpec reference_source(const RunConfig& rc, const Dataset& data) {
    if (!rc.ref_spec.empty() && rc.per_class) throw InputError("give either --ref-spec or --per-class, not both");
    if (!rc.ref_spec.empty()) return load_reference_spec(rc.ref_spec);
    return select_references(data.labels, rc.per_class.value_or(3), rc.seed);
}

fs::path prepare_out(const RunConfig& rc) {
    fs::path out(rc.out);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw IoError("cannot create output directory " + out.string() + ": " + ec.message());
    return out;
}

ordered_json config_json(const PhysicalConfig& cfg) {
    ordered_json j;
    j["coulomb_k"] = cfg.coulomb_k;
    j["q"] = cfg.charge;
    j["d1_cm"] = cfg.pixel_pitch * 100.0;
    j["d2_cm"] = cfg.plane_gap * 100.0;
    j["bin_threshold"] = cfg.bin_threshold;
    return j;
}

ordered_json reference_json(int k, const Reference& ref, const DatasetIndex* index) {
    ordered_json j;
    j["k"] = k;
    j["digit"] = ref.digit;
    j["position"] = ref.source;
    if (index && ref.source >= 0) {
        const auto positions = index->positions(ref.digit);
        const auto it = std::lower_bound(positions.begin(), positions.end(), static_cast<std::size_t>(ref.source));
        if (it != positions.end() && *it == static_cast<std::size_t>(ref.source)) j["ordinal"] = it - positions.begin();
    }
    j["active_pixels"] = ref.image.count();
    return j;
}

void write_manifest(const fs::path& out, const Network& net, const DatasetIndex& index, const RunConfig& rc,
                    const std::optional<ReferenceSpec>& spec, int first_added) {
    ordered_json m;
    m["archive"] = "network.efn";
    m["config"] = config_json(net.config());
    if (spec && spec->seed) m["seed"] = *spec->seed;
    if (rc.per_class && rc.ref_spec.empty()) m["per_class"] = *rc.per_class;
    if (!rc.ref_spec.empty()) m["ref_spec"] = rc.ref_spec;
    m["reference_count"] = net.size();
    m["neuron_count"] = net.neuron_count();
    m["second_layer_threshold"] = net.second_layer_threshold();
    auto refs = ordered_json::array();
    for (int k = 0; k < net.size(); ++k) refs.push_back(reference_json(k, net.references()[static_cast<std::size_t>(k)], &index));
    m["references"] = std::move(refs);
    if (first_added >= 0) {
        auto added = ordered_json::array();
        for (int k = first_added; k < net.size(); ++k)
            added.push_back(reference_json(k, net.references()[static_cast<std::size_t>(k)], &index));
        m["added"] = std::move(added);
    }
    write_text_file(out / "manifest.json", m.dump(2) + "\n");
}

std::string totals_line(const EvalReport& r) {
    return std::to_string(r.total()) + ", " + std::to_string(r.correct()) + ", " + std::to_string(r.overall_percent()) + "%";
}

std::string shortest(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

}  // namespace

PhysicalConfig RunConfig::physical() const {
    PhysicalConfig cfg = PhysicalConfig::from_centimeters(d1_cm, d2_cm);
    cfg.charge = q;
    cfg.coulomb_k = coulomb_k;
    cfg.bin_threshold = bin_threshold;
    cfg.validate();
    return cfg;
}

int cmd_build(const RunConfig& rc) {
    const PhysicalConfig cfg = rc.physical();
    const Dataset data = load_data(rc);
    const ReferenceSpec spec = reference_source(rc, data);
    const Network net = build_network(materialize(spec, data, cfg.bin_threshold), cfg);
    const fs::path out = prepare_out(rc);
    save_network(net, out / "network.efn");
    write_text_file(out / "references.txt", format_reference_spec(spec));
    write_manifest(out, net, DatasetIndex(data.labels), rc, spec, -1);
    std::cout << "built " << net.size() << " references, " << net.neuron_count() << " first-layer neurons -> "
              << (out / "network.efn").string() << '\n';
    return 0;
}

int cmd_eval(const RunConfig& rc, const std::string& archive, std::optional<std::size_t> limit) {
    const Network net = load_network(archive);
    if (rc.physical_given && !(rc.physical() == net.config()))
        throw ConfigError("physical flags differ from the config stored in " + archive);
    Dataset data = load_data(rc);
    if (limit && *limit < data.size()) {
        data.images.resize(*limit);
        data.labels.resize(*limit);
    }
    const EvalReport report = evaluate(net, data, rc.mode);
    const fs::path out = prepare_out(rc);
    write_text_file(out / "report.csv", export_csv(report));
    write_text_file(out / "report.json", export_json(report));
    for (int d = 0; d < kDigits; ++d) {
        const auto& row = report.rows[static_cast<std::size_t>(d)];
        std::cout << "s" << d << " = " << row.correct << "\ti" << d << " = " << row.total << "\tp" << d << " = "
                  << report.percent(d) << "%\n";
    }
    std::cout << totals_line(report) << '\n';
    if (report.rejected()) std::cout << "rejected: " << report.rejected() << '\n';
    return 0;
}

int cmd_dump_weights(const RunConfig& rc, const DumpRequest& req) {
    struct Side {
        std::string name;
        BinaryImage image;
    };
    Side a, b;
    PhysicalConfig cfg;
    if (!req.archive.empty()) {
        if (!req.pair) throw InputError("--pair k,k1 is required with --archive");
        const Network net = load_network(req.archive);
        const auto [k, k1] = *req.pair;
        if (k < 0 || k >= net.size() || k1 < 0 || k1 >= net.size())
            throw LookupError("reference index out of range for a network of " + std::to_string(net.size()));
        cfg = net.config();
        const auto& ra = net.references()[static_cast<std::size_t>(k)];
        const auto& rb = net.references()[static_cast<std::size_t>(k1)];
        a = {"k" + std::to_string(k), ra.image};
        b = {"k" + std::to_string(k1), rb.image};
    } else {
        if (req.names.size() != 2) throw InputError("--names needs exactly two image names, e.g. 0_157,1_46");
        cfg = rc.physical();
        const Dataset data = load_data(rc);
        const DatasetIndex index(data.labels);
        auto resolve = [&](const std::string& name) {
            const std::size_t pos = resolve_image_name(data.labels, index, parse_image_name(name), req.naming);
            return Side{name, binarize(data.images[pos], cfg.bin_threshold)};
        };
        a = resolve(req.names[0]);
        b = resolve(req.names[1]);
    }

    const PotentialTable pa = zero_layer_table(a.image, cfg);
    const PotentialTable pb = zero_layer_table(b.image, cfg);
    PairNeuron neuron{0, 1, pair_weight_table(pa, pb), 0.0};
    const double sum = neuron_state(neuron, a.image);
    const double sum1 = neuron_state(neuron, b.image);
    neuron.wh1 = compute_threshold(sum, sum1);

    const fs::path out = prepare_out(rc);
    const std::string pair_stem = "pair_" + a.name + "__" + b.name;
    write_text_file(out / ("zero_" + a.name + ".csv"), grid_to_csv(pa.values));
    write_binary_file(out / ("zero_" + a.name + ".pgm"), grid_to_pgm(pa.values));
    write_text_file(out / ("zero_" + b.name + ".csv"), grid_to_csv(pb.values));
    write_binary_file(out / ("zero_" + b.name + ".pgm"), grid_to_pgm(pb.values));
    write_text_file(out / (pair_stem + ".csv"), grid_to_csv(neuron.weights.values));
    write_binary_file(out / (pair_stem + ".pgm"), grid_to_pgm(neuron.weights.values));
    const std::string sidecar =
        a.name + "," + b.name + ",Sum=" + shortest(sum) + ",Sum1=" + shortest(sum1) + ",Wh1=" + shortest(neuron.wh1);
    write_text_file(out / (pair_stem + ".wh1.txt"), sidecar + "\n");
    std::cout << sidecar << '\n';
    return 0;
}

int cmd_add_refs(const RunConfig& rc, const std::string& archive) {
    Network net = load_network(archive);
    const Dataset data = load_data(rc);
    const DatasetIndex index(data.labels);
    const int threshold = net.config().bin_threshold;

    std::vector<Reference> additions;
    if (!rc.ref_spec.empty()) {
        if (rc.per_class) throw InputError("give either --ref-spec or --per-class, not both");
        additions = materialize(load_reference_spec(rc.ref_spec), data, threshold);
    } else {
        if (!rc.per_class) throw InputError("add-refs needs --ref-spec or --per-class (target count per digit)");
        std::set<std::int64_t> present;
        for (const auto& ref : net.references()) present.insert(ref.source);
        for (auto& ref : materialize(select_references(data.labels, *rc.per_class, rc.seed), data, threshold))
            if (!present.contains(ref.source)) additions.push_back(std::move(ref));
    }

    const int first_added = net.size();
    for (auto& ref : additions) net = add_reference(net, std::move(ref));
    const fs::path out = prepare_out(rc);
    save_network(net, out / "network.efn");
    write_manifest(out, net, index, rc, std::nullopt, first_added);
    std::cout << "added " << (net.size() - first_added) << " references: " << net.size() << " references, "
              << net.neuron_count() << " first-layer neurons -> " << (out / "network.efn").string() << '\n';
    return 0;
}

int cmd_sweep(const RunConfig& rc, const std::string& parameter, const std::vector<double>& values) {
    const SweepParameter param = parse_sweep_parameter(parameter);
    const PhysicalConfig base = rc.physical();
    const Dataset data = load_data(rc);
    std::optional<ReferenceSpec> fixed;
    if (!rc.ref_spec.empty()) {
        if (param == SweepParameter::PerClass) throw InputError("a per-class sweep draws its own references; drop --ref-spec");
        fixed = load_reference_spec(rc.ref_spec);
    }
    const NetworkBuilder builder = [&](const PhysicalConfig& cfg, int per_class) {
        const ReferenceSpec spec = fixed ? *fixed : select_references(data.labels, per_class, rc.seed);
        return build_network(materialize(spec, data, cfg.bin_threshold), cfg);
    };
    std::vector<double> scaled = values;
    if (param == SweepParameter::PlaneGap)
        for (double& v : scaled) v /= 100.0;

    const auto points = sweep(builder, base, rc.per_class.value_or(3), param, scaled, data, rc.mode);
    std::ostringstream csv;
    csv << "parameter,value,total,correct,percent,rejected,error\n";
    auto arr = ordered_json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        csv << parameter << ',' << shortest(values[i]) << ',';
        ordered_json j;
        j["parameter"] = parameter;
        j["value"] = values[i];
        if (p.report) {
            csv << p.report->total() << ',' << p.report->correct() << ',' << p.report->overall_percent() << "%,"
                << p.report->rejected() << ",\n";
            j["report"] = ordered_json::parse(export_json(*p.report));
            std::cout << parameter << "=" << shortest(values[i]) << ": " << totals_line(*p.report) << '\n';
        } else {
            std::string err = p.error;
            std::replace(err.begin(), err.end(), ',', ';');
            csv << ",,,," << err << '\n';
            j["error"] = p.error;
            std::cout << parameter << "=" << shortest(values[i]) << ": error: " << p.error << '\n';
        }
        arr.push_back(std::move(j));
    }
    const fs::path out = prepare_out(rc);
    write_text_file(out / "sweep.csv", csv.str());
    write_text_file(out / "sweep.json", arr.dump(2) + "\n");
    return 0;
}

int cmd_select(const RunConfig& rc) {
    if (rc.labels.empty()) throw InputError("--labels is required");
    const auto labels = load_idx_labels(rc.labels);
    const ReferenceSpec spec = select_references(labels, rc.per_class.value_or(3), rc.seed);
    const fs::path out = prepare_out(rc);
    write_text_file(out / "references.txt", format_reference_spec(spec));
    std::cout << format_reference_spec(spec);
    return 0;
}

}  // namespace efnet::cli
