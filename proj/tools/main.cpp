// efnet: build, evaluate and inspect field-weighted pairwise networks.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "efnet/errors.hpp"

namespace {

std::pair<int, int> parse_pair(const std::string& text) {
    std::istringstream in(text);
    int k = -1, k1 = -1;
    char comma = 0;
    if (!(in >> k >> comma >> k1) || comma != ',' || !in.eof())
        throw efnet::InputError("--pair expects 'k,k1', got '" + text + "'");
    return {k, k1};
}

void add_dataset_flags(CLI::App* cmd, efnet::cli::RunConfig& rc) {
    cmd->add_option("--images", rc.images, "IDX image file (t10k-images.idx3-ubyte)");
    cmd->add_option("--labels", rc.labels, "IDX label file (t10k-labels.idx1-ubyte)");
}

void add_physical_flags(CLI::App* cmd, efnet::cli::RunConfig& rc, std::vector<CLI::Option*>& physical) {
    physical.push_back(cmd->add_option("--q", rc.q, "Point charge per white pixel, coulombs")->capture_default_str());
    physical.push_back(cmd->add_option("--d1-cm", rc.d1_cm, "Pixel pitch, cm")->capture_default_str());
    physical.push_back(cmd->add_option("--d2-cm", rc.d2_cm, "Image plane to sensor plane distance, cm")->capture_default_str());
    physical.push_back(cmd->add_option("--coulomb-k", rc.coulomb_k, "Coulomb constant, V*m/C")->capture_default_str());
    physical.push_back(
        cmd->add_option("--bin-threshold", rc.bin_threshold, "Pixels brighter than this are charged")->capture_default_str());
}

void add_reference_flags(CLI::App* cmd, efnet::cli::RunConfig& rc) {
    cmd->add_option("--per-class", rc.per_class, "References drawn per digit");
    cmd->add_option("--seed", rc.seed, "Seed for reference selection")->capture_default_str();
    cmd->add_option("--ref-spec", rc.ref_spec, "Reference file, one 'digit,ordinal' per line");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace efnet::cli;
    CLI::App app{"Pairwise metric network with electrostatic-field weights"};
    app.require_subcommand(1);

    RunConfig rc;
    std::vector<CLI::Option*> physical;
    std::string mode = "strict";
    std::string archive;
    std::optional<std::size_t> limit;
    DumpRequest dump;
    std::string pair_text, naming = "position";
    std::string sweep_param;
    std::vector<double> sweep_values;

    auto* build = app.add_subcommand("build", "Simulate the field for a reference set and write a network archive");
    add_dataset_flags(build, rc);
    add_physical_flags(build, rc, physical);
    add_reference_flags(build, rc);
    build->add_option("--out", rc.out, "Output directory")->capture_default_str();

    auto* eval = app.add_subcommand("eval", "Classify a dataset with an archived network and write reports");
    eval->add_option("--archive", archive, "network.efn from build/add-refs")->required();
    add_dataset_flags(eval, rc);
    add_physical_flags(eval, rc, physical);
    eval->add_option("--mode", mode, "strict|argmax")->capture_default_str();
    eval->add_option("--limit", limit, "Evaluate only the first N images");
    eval->add_option("--out", rc.out, "Output directory")->capture_default_str();

    auto* dumpw = app.add_subcommand("dump-weights", "Write zero-layer and pair weight tables as CSV and PGM");
    dumpw->add_option("--archive", dump.archive, "Take references from an archive");
    dumpw->add_option("--pair", pair_text, "Reference indices k,k1 inside the archive");
    dumpw->add_option("--names", dump.names, "Two image names such as 0_157,1_46")->delimiter(',');
    dumpw->add_option("--naming", naming, "How names index the dataset: position|ordinal0|ordinal1")->capture_default_str();
    add_dataset_flags(dumpw, rc);
    add_physical_flags(dumpw, rc, physical);
    dumpw->add_option("--out", rc.out, "Output directory")->capture_default_str();

    auto* addr = app.add_subcommand("add-refs", "Grow an archived network with new references (cascade)");
    addr->add_option("--archive", archive, "Existing network.efn")->required();
    add_dataset_flags(addr, rc);
    add_reference_flags(addr, rc);
    addr->add_option("--out", rc.out, "Output directory")->capture_default_str();

    auto* sw = app.add_subcommand("sweep", "Rebuild and evaluate over a list of parameter values");
    sw->add_option("--param", sweep_param, "d2 (cm) | q (C) | per-class")->required();
    sw->add_option("--values", sweep_values, "Comma-separated values")->delimiter(',')->required();
    add_dataset_flags(sw, rc);
    add_physical_flags(sw, rc, physical);
    add_reference_flags(sw, rc);
    sw->add_option("--mode", mode, "strict|argmax")->capture_default_str();
    sw->add_option("--out", rc.out, "Output directory")->capture_default_str();

    auto* sel = app.add_subcommand("select", "Write a seeded balanced reference file");
    add_dataset_flags(sel, rc);
    add_reference_flags(sel, rc);
    sel->add_option("--out", rc.out, "Output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        rc.mode = efnet::parse_mode(mode);
        for (auto* opt : physical) rc.physical_given = rc.physical_given || opt->count() > 0;
        if (build->parsed()) return cmd_build(rc);
        if (eval->parsed()) return cmd_eval(rc, archive, limit);
        if (dumpw->parsed()) {
            if (!pair_text.empty()) dump.pair = parse_pair(pair_text);
            dump.naming = efnet::parse_name_convention(naming);
            return cmd_dump_weights(rc, dump);
        }
        if (addr->parsed()) return cmd_add_refs(rc, archive);
        if (sw->parsed()) return cmd_sweep(rc, sweep_param, sweep_values);
        if (sel->parsed()) return cmd_select(rc);
    } catch (const efnet::Error& e) {
        std::cerr << "error[" << e.kind() << "]: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << '\n';
        return 3;
    }
    return 1;
}
