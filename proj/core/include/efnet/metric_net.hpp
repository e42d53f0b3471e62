#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "efnet/field.hpp"
#include "efnet/mnist_io.hpp"

namespace efnet {

struct Reference {
    int digit = 0;
    BinaryImage image;
    std::int64_t source = -1;  // dataset position, -1 if unknown
};

/// First-layer neuron comparing reference k against reference k1.
struct PairNeuron {
    int k = 0;
    int k1 = 0;
    WeightTable weights;
    double wh1 = 0.0;  // weighted threshold, added to the state before the sign test
};

enum class Mode { Strict, Argmax };

Mode parse_mode(std::string_view text);
std::string_view to_string(Mode mode) noexcept;

/// Classification outcome; empty means rejected.
using Decision = std::optional<int>;

/// Three-layer pairwise network. Immutable once built.
///
/// Neurons are stored in canonical order: block k holds (k,k1) for every
/// k1 != k in increasing k1. Block k is exactly the fan-in of second-layer
/// neuron k.
class Network {
public:
    /// Assembles a network from stored parts, recomputing every weight table
    /// and threshold from the references under `cfg`. Throws BuildError when
    /// any stored value disagrees.
    static Network from_parts(const PhysicalConfig& cfg, std::vector<Reference> refs, std::vector<PairNeuron> neurons);

    int size() const noexcept { return static_cast<int>(refs_.size()); }
    std::size_t neuron_count() const noexcept { return neurons_.size(); }
    int second_layer_threshold() const noexcept { return size() - 1; }

    std::span<const Reference> references() const noexcept { return refs_; }
    std::span<const PairNeuron> neurons() const noexcept { return neurons_; }
    const PairNeuron& neuron(int k, int k1) const;
    std::size_t neuron_index(int k, int k1) const;

    /// Reference indices whose digit is `digit`, ascending.
    std::span<const int> class_group(int digit) const;
    const PhysicalConfig& config() const noexcept { return cfg_; }
    const PotentialTable& reference_potential(int k) const;

private:
    friend Network build_network(std::vector<Reference> refs, const PhysicalConfig& cfg);
    friend Network add_reference(const Network& net, Reference ref);

    void index_classes();

    PhysicalConfig cfg_;
    std::vector<Reference> refs_;
    std::vector<PotentialTable> potentials_;
    std::vector<PairNeuron> neurons_;
    std::array<std::vector<int>, kDigits> groups_;
};

/// Weighted sum of the weights under the input's white pixels, row-major order.
double neuron_state(const PairNeuron& neuron, const BinaryImage& x);

/// Midpoint threshold: -(state_k + state_k1) / 2.
double compute_threshold(double state_k, double state_k1);

/// Fires iff state + wh1 >= 0.
bool first_layer_fire(const PairNeuron& neuron, const BinaryImage& x);

struct LayerOutput {
    int count = 0;
    bool fired = false;
};

/// Wins of reference k over all others; fires when it wins all N-1.
LayerOutput second_layer(const Network& net, int k, const BinaryImage& x);

/// Second-layer firings within the digit's class group; fires when > 0.
LayerOutput third_layer(const Network& net, int digit, const BinaryImage& x);

struct ForwardTrace {
    struct FirstLayer {
        double state = 0.0;
        bool fired = false;
    };
    std::vector<FirstLayer> first_layer;  // canonical neuron order
    std::vector<LayerOutput> second_layer;
    std::array<LayerOutput, kDigits> third_layer{};
    Decision decision;
};

ForwardTrace forward(const Network& net, const BinaryImage& x, Mode mode = Mode::Strict);
Decision classify(const Network& net, const BinaryImage& x, Mode mode = Mode::Strict);

/// Errors: fewer than two references, digit outside 0..9, duplicate (digit, image).
Network build_network(std::vector<Reference> refs, const PhysicalConfig& cfg);

/// Cascade growth: adds the 2N neurons that involve the new reference.
/// Existing neurons are copied unchanged.
Network add_reference(const Network& net, Reference ref);
Network add_reference(const Network& net, int digit, const BinaryImage& img);

PotentialTable zero_layer_table(const BinaryImage& ref, const PhysicalConfig& cfg);

/// Batch evaluator. Keeps the weights pixel-major so one image touches a
/// contiguous row per white pixel. States are bit-identical to neuron_state
/// because each neuron still accumulates its pixels in row-major order.
class BatchClassifier {
public:
    explicit BatchClassifier(const Network& net);

    /// Writes neuron states (without threshold) in canonical order.
    void states(const BinaryImage& x, std::span<double> out) const;
    Decision classify(const BinaryImage& x, Mode mode) const;

    std::size_t neuron_count() const noexcept { return wh1_.size(); }

private:
    int n_refs_;
    std::vector<int> ref_digit_;
    std::vector<double> pixel_major_;  // [pixel][neuron]
    std::vector<double> wh1_;
};

}  // namespace efnet
