#include "morphtest/knn.hpp"

#include <algorithm>

namespace morphtest {

Prediction knn_classify(const std::vector<GrayImage>& reference_images,
                        const std::vector<std::uint8_t>& reference_labels, int k, const GrayImage& img) {
    if (reference_images.empty()) fail(Errc::EmptyReference, "k-NN needs at least one reference image");
    if (reference_images.size() != reference_labels.size()) {
        fail(Errc::DimensionMismatch, "reference images and labels differ");
    }
    if (k < 1) fail(Errc::EmptyReference, "k must be >= 1");

    std::vector<std::pair<std::int64_t, std::size_t>> by_distance;  // (squared distance, index)
    by_distance.reserve(reference_images.size());
    for (std::size_t i = 0; i < reference_images.size(); ++i) {
        const GrayImage& ref = reference_images[i];
        if (ref.data.size() != img.data.size()) fail(Errc::WrongImageSize, "reference size mismatch");
        std::int64_t d2 = 0;
        for (std::size_t p = 0; p < img.data.size(); ++p) {
            const std::int64_t d = static_cast<std::int64_t>(img.data[p]) - ref.data[p];
            d2 += d * d;
        }
        by_distance.push_back({d2, i});
    }
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), by_distance.size());
    std::partial_sort(by_distance.begin(), by_distance.begin() + static_cast<std::ptrdiff_t>(take),
                      by_distance.end());

    std::array<int, 10> votes{};
    for (std::size_t i = 0; i < take; ++i) ++votes[reference_labels[by_distance[i].second]];

    Prediction pred;
    for (int label = 0; label < 10; ++label) {
        pred.scores[static_cast<std::size_t>(label)] =
            static_cast<double>(votes[static_cast<std::size_t>(label)]) / static_cast<double>(take);
    }
    pred.label = argmax_label(pred.scores);
    return pred;
}

}  // namespace morphtest
