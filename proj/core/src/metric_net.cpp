#include "efnet/metric_net.hpp"

#include <algorithm>
#include <string>

#include "efnet/errors.hpp"

namespace efnet {
namespace {

// Shared second/third-layer logic on top of per-reference win counts.
Decision decide(std::span<const int> counts, std::span<const int> ref_digit, Mode mode) {
    const int n = static_cast<int>(counts.size());
    std::array<int, kDigits> votes{};
    for (int k = 0; k < n; ++k)
        if (counts[static_cast<std::size_t>(k)] >= n - 1) ++votes[static_cast<std::size_t>(ref_digit[static_cast<std::size_t>(k)])];
    Decision strict;
    int fired = 0;
    for (int d = 0; d < kDigits; ++d)
        if (votes[static_cast<std::size_t>(d)] > 0) {
            ++fired;
            strict = d;
        }
    if (fired == 1) return strict;
    if (mode == Mode::Strict) return std::nullopt;
    const auto best = std::max_element(counts.begin(), counts.end());  // first maximum = lowest index
    return ref_digit[static_cast<std::size_t>(best - counts.begin())];
}

void check_reference(const Reference& ref) {
    if (ref.digit < 0 || ref.digit >= kDigits)
        throw BuildError("reference digit " + std::to_string(ref.digit) + " is not in 0..9");
}

PairNeuron make_neuron(int k, int k1, const Reference& a, const Reference& b, const PotentialTable& pa,
                       const PotentialTable& pb) {
    PairNeuron neuron{k, k1, pair_weight_table(pa, pb), 0.0};
    neuron.wh1 = compute_threshold(neuron_state(neuron, a.image), neuron_state(neuron, b.image));
    return neuron;
}

}  // namespace

Mode parse_mode(std::string_view text) {
    if (text == "strict") return Mode::Strict;
    if (text == "argmax") return Mode::Argmax;
    throw InputError("unknown mode '" + std::string(text) + "' (strict|argmax)");
}

std::string_view to_string(Mode mode) noexcept { return mode == Mode::Strict ? "strict" : "argmax"; }

std::size_t Network::neuron_index(int k, int k1) const {
    const int n = size();
    if (k < 0 || k >= n || k1 < 0 || k1 >= n || k == k1)
        throw LookupError("no neuron (" + std::to_string(k) + "," + std::to_string(k1) + ") in a network of " +
                          std::to_string(n) + " references");
    return static_cast<std::size_t>(k) * static_cast<std::size_t>(n - 1) +
           static_cast<std::size_t>(k1 < k ? k1 : k1 - 1);
}

const PairNeuron& Network::neuron(int k, int k1) const { return neurons_[neuron_index(k, k1)]; }

std::span<const int> Network::class_group(int digit) const {
    if (digit < 0 || digit >= kDigits) throw LookupError("digit " + std::to_string(digit) + " is not in 0..9");
    return groups_[static_cast<std::size_t>(digit)];
}

const PotentialTable& Network::reference_potential(int k) const {
    if (k < 0 || k >= size()) throw LookupError("no reference " + std::to_string(k));
    return potentials_[static_cast<std::size_t>(k)];
}

void Network::index_classes() {
    for (auto& g : groups_) g.clear();
    for (int k = 0; k < size(); ++k) groups_[static_cast<std::size_t>(refs_[static_cast<std::size_t>(k)].digit)].push_back(k);
}

Network build_network(std::vector<Reference> refs, const PhysicalConfig& cfg) {
    cfg.validate();
    if (refs.size() < 2) throw BuildError("a network needs at least 2 references, got " + std::to_string(refs.size()));
    for (std::size_t i = 0; i < refs.size(); ++i) {
        check_reference(refs[i]);
        for (std::size_t j = 0; j < i; ++j)
            if (refs[i].digit == refs[j].digit && refs[i].image == refs[j].image)
                throw BuildError("duplicate reference: entries " + std::to_string(j) + " and " + std::to_string(i) +
                                 " are the same digit-" + std::to_string(refs[i].digit) + " image");
    }

    Network net;
    net.cfg_ = cfg;
    net.refs_ = std::move(refs);
    const int n = net.size();
    net.potentials_.reserve(static_cast<std::size_t>(n));
    for (const auto& ref : net.refs_) net.potentials_.push_back(potential_table(ref.image, cfg));

    net.neurons_.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1));
    for (int k = 0; k < n; ++k)
        for (int k1 = 0; k1 < n; ++k1) {
            if (k == k1) continue;
            const auto sk = static_cast<std::size_t>(k);
            const auto sk1 = static_cast<std::size_t>(k1);
            net.neurons_.push_back(make_neuron(k, k1, net.refs_[sk], net.refs_[sk1], net.potentials_[sk], net.potentials_[sk1]));
        }
    net.index_classes();
    return net;
}

Network add_reference(const Network& net, Reference ref) {
    check_reference(ref);
    for (std::size_t j = 0; j < net.refs_.size(); ++j)
        if (net.refs_[j].digit == ref.digit && net.refs_[j].image == ref.image)
            throw BuildError("duplicate reference: new digit-" + std::to_string(ref.digit) +
                             " image equals existing reference " + std::to_string(j));

    const int old_n = net.size();
    const int n = old_n + 1;
    Network grown;
    grown.cfg_ = net.cfg_;
    grown.refs_ = net.refs_;
    grown.refs_.push_back(std::move(ref));
    grown.potentials_ = net.potentials_;
    grown.potentials_.push_back(potential_table(grown.refs_.back().image, grown.cfg_));

    grown.neurons_.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1));
    for (int k = 0; k < n; ++k)
        for (int k1 = 0; k1 < n; ++k1) {
            if (k == k1) continue;
            const auto sk = static_cast<std::size_t>(k);
            const auto sk1 = static_cast<std::size_t>(k1);
            if (k < old_n && k1 < old_n)
                grown.neurons_.push_back(net.neuron(k, k1));
            else
                grown.neurons_.push_back(make_neuron(k, k1, grown.refs_[sk], grown.refs_[sk1], grown.potentials_[sk],
                                                     grown.potentials_[sk1]));
        }
    grown.index_classes();
    return grown;
}

Network add_reference(const Network& net, int digit, const BinaryImage& img) {
    return add_reference(net, Reference{digit, img, -1});
}

Network Network::from_parts(const PhysicalConfig& cfg, std::vector<Reference> refs, std::vector<PairNeuron> neurons) {
    Network net = build_network(std::move(refs), cfg);
    if (neurons.size() != net.neurons_.size())
        throw BuildError("stored network has " + std::to_string(neurons.size()) + " neurons, expected " +
                         std::to_string(net.neurons_.size()));
    for (std::size_t i = 0; i < neurons.size(); ++i) {
        const PairNeuron& stored = neurons[i];
        const PairNeuron& expected = net.neurons_[i];
        if (stored.k != expected.k || stored.k1 != expected.k1)
            throw BuildError("stored neuron " + std::to_string(i) + " is out of canonical order");
        if (!(stored.weights == expected.weights) || stored.wh1 != expected.wh1)
            throw BuildError("stored neuron (" + std::to_string(stored.k) + "," + std::to_string(stored.k1) +
                             ") disagrees with the field computed under the stored config");
    }
    return net;
}

double neuron_state(const PairNeuron& neuron, const BinaryImage& x) {
    double sum = 0.0;
    for (auto p : x.active()) sum += neuron.weights.values[p];
    return sum;
}

double compute_threshold(double state_k, double state_k1) { return -(state_k + state_k1) / 2.0; }

bool first_layer_fire(const PairNeuron& neuron, const BinaryImage& x) { return neuron_state(neuron, x) + neuron.wh1 >= 0.0; }

LayerOutput second_layer(const Network& net, int k, const BinaryImage& x) {
    LayerOutput out;
    for (int k1 = 0; k1 < net.size(); ++k1)
        if (k1 != k && first_layer_fire(net.neuron(k, k1), x)) ++out.count;
    out.fired = out.count >= net.second_layer_threshold();
    return out;
}

LayerOutput third_layer(const Network& net, int digit, const BinaryImage& x) {
    LayerOutput out;
    for (int k : net.class_group(digit))
        if (second_layer(net, k, x).fired) ++out.count;
    out.fired = out.count > 0;
    return out;
}

ForwardTrace forward(const Network& net, const BinaryImage& x, Mode mode) {
    ForwardTrace trace;
    const int n = net.size();
    trace.first_layer.reserve(net.neuron_count());
    for (const auto& neuron : net.neurons()) {
        const double state = neuron_state(neuron, x);
        trace.first_layer.push_back({state, state + neuron.wh1 >= 0.0});
    }
    trace.second_layer.resize(static_cast<std::size_t>(n));
    std::vector<int> counts(static_cast<std::size_t>(n));
    std::vector<int> ref_digit(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        auto& out = trace.second_layer[static_cast<std::size_t>(k)];
        for (int k1 = 0; k1 < n; ++k1)
            if (k1 != k && trace.first_layer[net.neuron_index(k, k1)].fired) ++out.count;
        out.fired = out.count >= net.second_layer_threshold();
        counts[static_cast<std::size_t>(k)] = out.count;
        ref_digit[static_cast<std::size_t>(k)] = net.references()[static_cast<std::size_t>(k)].digit;
        if (out.fired) ++trace.third_layer[static_cast<std::size_t>(ref_digit[static_cast<std::size_t>(k)])].count;
    }
    for (auto& t : trace.third_layer) t.fired = t.count > 0;
    trace.decision = decide(counts, ref_digit, mode);
    return trace;
}

Decision classify(const Network& net, const BinaryImage& x, Mode mode) { return forward(net, x, mode).decision; }

PotentialTable zero_layer_table(const BinaryImage& ref, const PhysicalConfig& cfg) { return potential_table(ref, cfg); }

BatchClassifier::BatchClassifier(const Network& net) : n_refs_(net.size()) {
    const std::size_t m = net.neuron_count();
    pixel_major_.resize(m * kPixels);
    wh1_.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& neuron = net.neurons()[i];
        wh1_.push_back(neuron.wh1);
        for (std::size_t p = 0; p < kPixels; ++p) pixel_major_[p * m + i] = neuron.weights.values[p];
    }
    for (const auto& ref : net.references()) ref_digit_.push_back(ref.digit);
}

void BatchClassifier::states(const BinaryImage& x, std::span<double> out) const {
    const std::size_t m = wh1_.size();
    std::fill(out.begin(), out.end(), 0.0);
    double* acc = out.data();
    for (auto p : x.active()) {
        const double* row = pixel_major_.data() + std::size_t{p} * m;
        for (std::size_t i = 0; i < m; ++i) acc[i] += row[i];
    }
}

Decision BatchClassifier::classify(const BinaryImage& x, Mode mode) const {
    std::vector<double> state(wh1_.size());
    states(x, state);
    const auto n = static_cast<std::size_t>(n_refs_);
    std::vector<int> counts(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t base = k * (n - 1);
        int c = 0;
        for (std::size_t j = 0; j < n - 1; ++j) c += state[base + j] + wh1_[base + j] >= 0.0 ? 1 : 0;
        counts[k] = c;
    }
    return decide(counts, ref_digit_, mode);
}

}  // namespace efnet
