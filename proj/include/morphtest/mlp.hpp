#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "morphtest/errors.hpp"
#include "morphtest/image.hpp"
#include "morphtest/rng.hpp"

namespace morphtest {

/// Classifier output: winning digit plus one score per class. The label is
/// always the argmax of the scores with ties broken toward the lowest digit.
struct Prediction {
    int label = 0;
    std::array<double, 10> scores{};
};

/// Lowest index wins ties.
int argmax_label(std::span<const double> scores);

/// Fully connected net with rectifier hidden layers and softmax output.
/// Templated on the scalar so tests can run the same math in double
/// precision; the shipped classifier uses float (Mlp<float> = MlpModel).
template <typename T>
struct Mlp {
    struct Layer {
        int rows = 0;  // outputs
        int cols = 0;  // inputs
        std::vector<T> w;  // row-major rows x cols
        std::vector<T> b;  // rows
    };

    std::vector<int> sizes;
    std::vector<Layer> layers;

    int input_size() const { return sizes.front(); }
    int output_size() const { return sizes.back(); }

    bool operator==(const Mlp&) const = default;
};

using MlpModel = Mlp<float>;

/// Layer widths of the shipped digit classifier.
inline const std::vector<int> kDigitMlpSizes{784, 512, 512, 10};

template <typename T>
Mlp<T> make_mlp(std::vector<int> sizes) {
    if (sizes.size() < 2) fail(Errc::ShapeMismatch, "need at least input and output layer");
    Mlp<T> m;
    m.sizes = std::move(sizes);
    for (std::size_t l = 0; l + 1 < m.sizes.size(); ++l) {
        typename Mlp<T>::Layer layer;
        layer.cols = m.sizes[l];
        layer.rows = m.sizes[l + 1];
        layer.w.assign(static_cast<std::size_t>(layer.rows) * layer.cols, T{0});
        layer.b.assign(static_cast<std::size_t>(layer.rows), T{0});
        m.layers.push_back(std::move(layer));
    }
    return m;
}

/// He initialization: weights ~ N(0, 2 / fan_in), biases zero.
template <typename T>
void he_init(Mlp<T>& m, std::uint64_t seed) {
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        auto& layer = m.layers[l];
        GaussianSampler gauss(derive_seed(seed, l));
        const double stddev = std::sqrt(2.0 / layer.cols);
        for (T& w : layer.w) w = static_cast<T>(stddev * gauss.next());
        for (T& b : layer.b) b = T{0};
    }
}

/// Forward pass keeping every layer's activation; out[0] is the input and
/// out.back() holds the raw logits (no softmax).
template <typename T>
std::vector<std::vector<T>> mlp_activations(const Mlp<T>& m, std::span<const T> input) {
    if (static_cast<int>(input.size()) != m.input_size()) {
        fail(Errc::WrongImageSize, "input size " + std::to_string(input.size()) + ", model expects " +
                                       std::to_string(m.input_size()));
    }
    std::vector<std::vector<T>> acts;
    acts.emplace_back(input.begin(), input.end());
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        const auto& layer = m.layers[l];
        const std::vector<T>& x = acts.back();
        std::vector<T> y(static_cast<std::size_t>(layer.rows));
        for (int r = 0; r < layer.rows; ++r) {
            T acc = layer.b[static_cast<std::size_t>(r)];
            const T* row = layer.w.data() + static_cast<std::size_t>(r) * layer.cols;
            for (int c = 0; c < layer.cols; ++c) acc += row[c] * x[static_cast<std::size_t>(c)];
            y[static_cast<std::size_t>(r)] = acc;
        }
        const bool hidden = l + 1 < m.layers.size();
        if (hidden) {
            for (T& v : y) v = v > T{0} ? v : T{0};
        }
        acts.push_back(std::move(y));
    }
    return acts;
}

/// Max-subtracted softmax.
template <typename T>
std::vector<double> softmax(std::span<const T> logits) {
    double max = -1e300;
    for (T v : logits) max = std::max(max, static_cast<double>(v));
    std::vector<double> out(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(static_cast<double>(logits[i]) - max);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

template <typename T>
struct MlpGradients {
    std::vector<std::vector<T>> w;
    std::vector<std::vector<T>> b;

    static MlpGradients zeros_like(const Mlp<T>& m) {
        MlpGradients g;
        for (const auto& layer : m.layers) {
            g.w.emplace_back(layer.w.size(), T{0});
            g.b.emplace_back(layer.b.size(), T{0});
        }
        return g;
    }
};

/// Cross-entropy loss of one sample, with gradients accumulated into
/// `grads`. Output-layer delta is softmax(logits) - onehot(label).
template <typename T>
double mlp_backward_sample(const Mlp<T>& m, std::span<const T> input, int label, MlpGradients<T>& grads) {
    const auto acts = mlp_activations(m, input);
    const std::vector<T>& logits = acts.back();

    double max = -1e300;
    for (T v : logits) max = std::max(max, static_cast<double>(v));
    double sum = 0.0;
    for (T v : logits) sum += std::exp(static_cast<double>(v) - max);
    const double loss = -(static_cast<double>(logits[static_cast<std::size_t>(label)]) - max - std::log(sum));

    std::vector<T> delta(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double p = std::exp(static_cast<double>(logits[i]) - max) / sum;
        delta[i] = static_cast<T>(p - (static_cast<int>(i) == label ? 1.0 : 0.0));
    }

    for (std::size_t l = m.layers.size(); l-- > 0;) {
        const auto& layer = m.layers[l];
        const std::vector<T>& a_in = acts[l];
        for (int r = 0; r < layer.rows; ++r) {
            const T d = delta[static_cast<std::size_t>(r)];
            grads.b[l][static_cast<std::size_t>(r)] += d;
            T* grow = grads.w[l].data() + static_cast<std::size_t>(r) * layer.cols;
            for (int c = 0; c < layer.cols; ++c) grow[c] += d * a_in[static_cast<std::size_t>(c)];
        }
        if (l == 0) break;
        std::vector<T> prev(static_cast<std::size_t>(layer.cols), T{0});
        for (int r = 0; r < layer.rows; ++r) {
            const T d = delta[static_cast<std::size_t>(r)];
            const T* row = layer.w.data() + static_cast<std::size_t>(r) * layer.cols;
            for (int c = 0; c < layer.cols; ++c) prev[static_cast<std::size_t>(c)] += d * row[c];
        }
        // Rectifier derivative: the stored activation is already max(z, 0).
        for (int c = 0; c < layer.cols; ++c) {
            if (a_in[static_cast<std::size_t>(c)] <= T{0}) prev[static_cast<std::size_t>(c)] = T{0};
        }
        delta = std::move(prev);
    }
    return loss;
}

struct TrainConfig {
    double learning_rate = 0.01;
    int minibatch = 32;
    int epochs = 5;
    std::uint64_t seed = 1;
    std::size_t subset = 0;  // 0 = whole dataset
    int jobs = 1;
};

/// Scales pixels to [0, 1].
std::vector<float> image_to_input(const GrayImage& img);

/// Forward pass on a 28x28 glyph. Throws WrongImageSize otherwise.
Prediction mlp_infer(const MlpModel& model, const GrayImage& img);

/// Minibatch SGD on cross-entropy with He initialization and a fixed
/// seed-derived shuffle per epoch. Deterministic for a given (data, config)
/// on one platform, for any jobs value.
MlpModel mlp_train(const std::vector<GrayImage>& images, const std::vector<std::uint8_t>& labels,
                   const TrainConfig& config);

/// Fraction of images whose predicted label matches.
double mlp_accuracy(const MlpModel& model, const std::vector<GrayImage>& images,
                    const std::vector<std::uint8_t>& labels, int jobs = 1);

/// Binary weights file: "MLPW", one version byte, then little-endian layer
/// shapes and float32 payloads. Round-trips bit-exactly.
void save_weights(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_weights(const std::filesystem::path& path);

}  // namespace morphtest
