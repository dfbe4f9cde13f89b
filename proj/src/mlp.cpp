#include "morphtest/mlp.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <numeric>

#include "morphtest/parallel.hpp"

namespace morphtest {

int argmax_label(std::span<const double> scores) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(scores.size()); ++i) {
        if (scores[static_cast<std::size_t>(i)] > scores[static_cast<std::size_t>(best)]) best = i;
    }
    return best;
}

std::vector<float> image_to_input(const GrayImage& img) {
    std::vector<float> out(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i) out[i] = static_cast<float>(img.data[i]) / 255.0f;
    return out;
}

Prediction mlp_infer(const MlpModel& model, const GrayImage& img) {
    if (static_cast<int>(img.data.size()) != model.input_size()) {
        fail(Errc::WrongImageSize, "expected " + std::to_string(model.input_size()) + " pixels, got " +
                                       std::to_string(img.data.size()));
    }
    const std::vector<float> input = image_to_input(img);
    const auto acts = mlp_activations(model, std::span<const float>(input));
    const std::vector<double> scores = softmax(std::span<const float>(acts.back()));
    Prediction pred;
    if (scores.size() != 10) fail(Errc::ShapeMismatch, "digit classifier must have 10 outputs");
    std::copy(scores.begin(), scores.end(), pred.scores.begin());
    pred.label = argmax_label(pred.scores);
    return pred;
}

namespace {

// Batched forward/backward buffers. All loops are elementwise over
// independent outputs, each reduced in a fixed serial order, so results do
// not depend on the number of threads.
struct BatchWorkspace {
    std::vector<std::vector<float>> acts;    // acts[l]: batch x width(l)
    std::vector<std::vector<float>> deltas;  // deltas[l]: batch x width(l+1)
};

void forward_batch(const MlpModel& m, int batch, BatchWorkspace& ws, int jobs) {
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        const auto& layer = m.layers[l];
        const std::vector<float>& x = ws.acts[l];
        std::vector<float>& y = ws.acts[l + 1];
        const bool hidden = l + 1 < m.layers.size();
        parallel_for(static_cast<std::int64_t>(batch) * layer.rows, jobs, [&](std::int64_t idx) {
            const int s = static_cast<int>(idx / layer.rows);
            const int r = static_cast<int>(idx % layer.rows);
            const float* row = m.layers[l].w.data() + static_cast<std::size_t>(r) * layer.cols;
            const float* in = x.data() + static_cast<std::size_t>(s) * layer.cols;
            float acc = layer.b[static_cast<std::size_t>(r)];
            for (int c = 0; c < layer.cols; ++c) acc += row[c] * in[c];
            if (hidden && acc < 0.0f) acc = 0.0f;
            y[static_cast<std::size_t>(s) * layer.rows + r] = acc;
        });
    }
}

double backward_batch(const MlpModel& m, int batch, const std::uint8_t* labels, BatchWorkspace& ws,
                      MlpGradients<float>& grads, int jobs) {
    const int out_dim = m.output_size();
    const std::size_t last = m.layers.size() - 1;
    double loss = 0.0;
    for (int s = 0; s < batch; ++s) {
        const float* logits = ws.acts[last + 1].data() + static_cast<std::size_t>(s) * out_dim;
        float* delta = ws.deltas[last].data() + static_cast<std::size_t>(s) * out_dim;
        double max = -1e300;
        for (int i = 0; i < out_dim; ++i) max = std::max(max, static_cast<double>(logits[i]));
        double sum = 0.0;
        for (int i = 0; i < out_dim; ++i) sum += std::exp(static_cast<double>(logits[i]) - max);
        const int label = labels[s];
        loss -= static_cast<double>(logits[label]) - max - std::log(sum);
        for (int i = 0; i < out_dim; ++i) {
            const double p = std::exp(static_cast<double>(logits[i]) - max) / sum;
            delta[i] = static_cast<float>(p - (i == label ? 1.0 : 0.0));
        }
    }

    for (std::size_t l = m.layers.size(); l-- > 0;) {
        const auto& layer = m.layers[l];
        // dW[r][c] = sum_s delta[s][r] * a_in[s][c]
        parallel_for(static_cast<std::int64_t>(layer.rows), jobs, [&](std::int64_t r) {
            float* grow = grads.w[l].data() + static_cast<std::size_t>(r) * layer.cols;
            float gb = 0.0f;
            for (int s = 0; s < batch; ++s) {
                const float d = ws.deltas[l][static_cast<std::size_t>(s) * layer.rows + r];
                gb += d;
                const float* a_in = ws.acts[l].data() + static_cast<std::size_t>(s) * layer.cols;
                for (int c = 0; c < layer.cols; ++c) grow[c] += d * a_in[c];
            }
            grads.b[l][static_cast<std::size_t>(r)] += gb;
        });
        if (l == 0) break;
        // delta_prev[s][c] = relu'(a[s][c]) * sum_r delta[s][r] * W[r][c]
        parallel_for(static_cast<std::int64_t>(batch) * layer.cols, jobs, [&](std::int64_t idx) {
            const int s = static_cast<int>(idx / layer.cols);
            const int c = static_cast<int>(idx % layer.cols);
            if (ws.acts[l][static_cast<std::size_t>(s) * layer.cols + c] <= 0.0f) {
                ws.deltas[l - 1][static_cast<std::size_t>(s) * layer.cols + c] = 0.0f;
                return;
            }
            float acc = 0.0f;
            for (int r = 0; r < layer.rows; ++r) {
                acc += ws.deltas[l][static_cast<std::size_t>(s) * layer.rows + r] *
                       layer.w[static_cast<std::size_t>(r) * layer.cols + c];
            }
            ws.deltas[l - 1][static_cast<std::size_t>(s) * layer.cols + c] = acc;
        });
    }
    return loss;
}

}  // namespace

MlpModel mlp_train(const std::vector<GrayImage>& images, const std::vector<std::uint8_t>& labels,
                   const TrainConfig& config) {
    if (images.empty()) fail(Errc::EmptyDataset, "no training images");
    if (images.size() != labels.size()) {
        fail(Errc::DimensionMismatch, "images and labels differ: " + std::to_string(images.size()) + " vs " +
                                          std::to_string(labels.size()));
    }
    if (config.learning_rate <= 0 || config.minibatch < 1 || config.epochs < 1) {
        fail(Errc::MalformedGrid, "bad training hyperparameters");
    }
    std::size_t count = images.size();
    if (config.subset > 0) count = std::min(count, config.subset);

    MlpModel model = make_mlp<float>(kDigitMlpSizes);
    he_init(model, config.seed);
    for (std::size_t i = 0; i < count; ++i) {
        if (static_cast<int>(images[i].data.size()) != model.input_size()) {
            fail(Errc::DimensionMismatch, "training image " + std::to_string(i) + " is not 28x28");
        }
    }

    const int batch_cap = config.minibatch;
    BatchWorkspace ws;
    ws.acts.resize(model.layers.size() + 1);
    ws.deltas.resize(model.layers.size());
    ws.acts[0].resize(static_cast<std::size_t>(batch_cap) * model.input_size());
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        ws.acts[l + 1].resize(static_cast<std::size_t>(batch_cap) * model.layers[l].rows);
        ws.deltas[l].resize(static_cast<std::size_t>(batch_cap) * model.layers[l].rows);
    }
    MlpGradients<float> grads = MlpGradients<float>::zeros_like(model);

    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::uint8_t> batch_labels(static_cast<std::size_t>(batch_cap));

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        // Fisher-Yates with a seed-derived stream; identical on every run.
        SplitMix64 shuffle_rng(derive_seed(config.seed, 0x5cedu + static_cast<std::uint64_t>(epoch)));
        for (std::size_t i = count; i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(shuffle_rng.next() % i);
            std::swap(order[i - 1], order[j]);
        }
        for (std::size_t start = 0; start < count; start += static_cast<std::size_t>(batch_cap)) {
            const int batch = static_cast<int>(std::min<std::size_t>(batch_cap, count - start));
            for (int s = 0; s < batch; ++s) {
                const GrayImage& img = images[order[start + static_cast<std::size_t>(s)]];
                float* dst = ws.acts[0].data() + static_cast<std::size_t>(s) * model.input_size();
                for (std::size_t p = 0; p < img.data.size(); ++p) dst[p] = static_cast<float>(img.data[p]) / 255.0f;
                batch_labels[static_cast<std::size_t>(s)] = labels[order[start + static_cast<std::size_t>(s)]];
            }
            for (auto& g : grads.w) std::fill(g.begin(), g.end(), 0.0f);
            for (auto& g : grads.b) std::fill(g.begin(), g.end(), 0.0f);
            forward_batch(model, batch, ws, config.jobs);
            backward_batch(model, batch, batch_labels.data(), ws, grads, config.jobs);
            const float step = static_cast<float>(config.learning_rate) / static_cast<float>(batch);
            for (std::size_t l = 0; l < model.layers.size(); ++l) {
                auto& layer = model.layers[l];
                parallel_for(static_cast<std::int64_t>(layer.w.size()), config.jobs,
                             [&, l](std::int64_t i) { layer.w[static_cast<std::size_t>(i)] -= step * grads.w[l][static_cast<std::size_t>(i)]; });
                for (std::size_t i = 0; i < layer.b.size(); ++i) layer.b[i] -= step * grads.b[l][i];
            }
        }
    }
    return model;
}

double mlp_accuracy(const MlpModel& model, const std::vector<GrayImage>& images,
                    const std::vector<std::uint8_t>& labels, int jobs) {
    if (images.empty()) fail(Errc::EmptyDataset, "no evaluation images");
    if (images.size() != labels.size()) fail(Errc::DimensionMismatch, "images and labels differ");
    std::vector<std::uint8_t> correct(images.size(), 0);
    parallel_for(static_cast<std::int64_t>(images.size()), jobs, [&](std::int64_t i) {
        correct[static_cast<std::size_t>(i)] =
            mlp_infer(model, images[static_cast<std::size_t>(i)]).label == labels[static_cast<std::size_t>(i)];
    });
    std::size_t hits = 0;
    for (std::uint8_t c : correct) hits += c;
    return static_cast<double>(hits) / static_cast<double>(images.size());
}

namespace {

constexpr char kWeightsMagic[4] = {'M', 'L', 'P', 'W'};
constexpr std::uint8_t kWeightsVersion = 1;

void put_u32(std::ofstream& out, std::uint32_t v) {
    const char bytes[4] = {static_cast<char>(v), static_cast<char>(v >> 8), static_cast<char>(v >> 16),
                           static_cast<char>(v >> 24)};
    out.write(bytes, 4);
}

void put_f32(std::ofstream& out, float f) {
    std::uint32_t v;
    std::memcpy(&v, &f, 4);
    put_u32(out, v);
}

std::uint32_t take_u32(const std::vector<std::uint8_t>& b, std::size_t& off, const std::string& path) {
    if (off + 4 > b.size()) fail(Errc::TruncatedFile, "weights file short: " + path);
    const std::uint32_t v = static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
                            (static_cast<std::uint32_t>(b[off + 2]) << 16) |
                            (static_cast<std::uint32_t>(b[off + 3]) << 24);
    off += 4;
    return v;
}

float take_f32(const std::vector<std::uint8_t>& b, std::size_t& off, const std::string& path) {
    const std::uint32_t v = take_u32(b, off, path);
    float f;
    std::memcpy(&f, &v, 4);
    return f;
}

}  // namespace

void save_weights(const MlpModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::IoFailure, "cannot open " + path.string() + " for writing");
    out.write(kWeightsMagic, 4);
    out.put(static_cast<char>(kWeightsVersion));
    put_u32(out, static_cast<std::uint32_t>(model.layers.size()));
    for (const auto& layer : model.layers) {
        put_u32(out, static_cast<std::uint32_t>(layer.rows));
        put_u32(out, static_cast<std::uint32_t>(layer.cols));
        for (float v : layer.w) put_f32(out, v);
        for (float v : layer.b) put_f32(out, v);
    }
    if (!out) fail(Errc::IoFailure, "short write to " + path.string());
}

MlpModel load_weights(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::IoFailure, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 5 || std::memcmp(bytes.data(), kWeightsMagic, 4) != 0) {
        fail(Errc::WrongMagic, "not a weights file: " + path.string());
    }
    if (bytes[4] != kWeightsVersion) {
        fail(Errc::UnsupportedFormat, "weights version " + std::to_string(bytes[4]) + " in " + path.string());
    }
    std::size_t off = 5;
    const std::uint32_t layer_count = take_u32(bytes, off, path.string());
    if (layer_count == 0 || layer_count > 64) fail(Errc::ShapeMismatch, "implausible layer count");
    MlpModel model;
    for (std::uint32_t l = 0; l < layer_count; ++l) {
        MlpModel::Layer layer;
        layer.rows = static_cast<int>(take_u32(bytes, off, path.string()));
        layer.cols = static_cast<int>(take_u32(bytes, off, path.string()));
        if (layer.rows < 1 || layer.cols < 1) fail(Errc::ShapeMismatch, "bad layer shape");
        if (!model.layers.empty() && model.layers.back().rows != layer.cols) {
            fail(Errc::ShapeMismatch, "layer " + std::to_string(l) + " input does not chain");
        }
        layer.w.resize(static_cast<std::size_t>(layer.rows) * layer.cols);
        layer.b.resize(static_cast<std::size_t>(layer.rows));
        for (float& v : layer.w) v = take_f32(bytes, off, path.string());
        for (float& v : layer.b) v = take_f32(bytes, off, path.string());
        model.layers.push_back(std::move(layer));
    }
    if (off != bytes.size()) fail(Errc::ShapeMismatch, "trailing bytes in " + path.string());
    model.sizes.push_back(model.layers.front().cols);
    for (const auto& layer : model.layers) model.sizes.push_back(layer.rows);
    return model;
}

}  // namespace morphtest
