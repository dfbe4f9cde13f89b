#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "morphtest/image.hpp"
#include "morphtest/knn.hpp"
#include "morphtest/mlp.hpp"

namespace morphtest {

/// A digit classifier under test. Implementations that return true from
/// thread_safe() may be called concurrently; the rest get exclusive serial
/// access from the harness.
class Classifier {
  public:
    virtual ~Classifier() = default;
    virtual Prediction predict(const GrayImage& img, std::string_view case_id) = 0;
    virtual bool thread_safe() const = 0;
    virtual std::string name() const = 0;
};

class MlpClassifier : public Classifier {
  public:
    explicit MlpClassifier(MlpModel model) : model_(std::move(model)) {}

    Prediction predict(const GrayImage& img, std::string_view) override { return mlp_infer(model_, img); }
    bool thread_safe() const override { return true; }
    std::string name() const override { return "builtin-mlp"; }

  private:
    MlpModel model_;
};

class KnnClassifier : public Classifier {
  public:
    KnnClassifier(std::vector<GrayImage> refs, std::vector<std::uint8_t> labels, int k)
        : refs_(std::move(refs)), labels_(std::move(labels)), k_(k) {}

    Prediction predict(const GrayImage& img, std::string_view) override {
        return knn_classify(refs_, labels_, k_, img);
    }
    bool thread_safe() const override { return true; }
    std::string name() const override { return "knn"; }

  private:
    std::vector<GrayImage> refs_;
    std::vector<std::uint8_t> labels_;
    int k_;
};

/// Test helper: wraps a callable.
class FunctionClassifier : public Classifier {
  public:
    FunctionClassifier(std::string name, std::function<Prediction(const GrayImage&)> fn)
        : name_(std::move(name)), fn_(std::move(fn)) {}

    Prediction predict(const GrayImage& img, std::string_view) override { return fn_(img); }
    bool thread_safe() const override { return true; }
    std::string name() const override { return name_; }

  private:
    std::string name_;
    std::function<Prediction(const GrayImage&)> fn_;
};

/// Line protocol to an external classifier process over its standard
/// streams. One request in flight at a time:
///   request:  "P <case-id> <784 ints 0-255>\n"
///   response: "R <case-id> <label 0-9> <10 non-negative reals>\n"
/// The response must echo the case id. Violations raise ProtocolViolation;
/// a response taking longer than the timeout raises Timeout.
class ExternalClassifier : public Classifier {
  public:
    explicit ExternalClassifier(std::string command, double timeout_seconds = 10.0);
    ~ExternalClassifier() override;

    ExternalClassifier(const ExternalClassifier&) = delete;
    ExternalClassifier& operator=(const ExternalClassifier&) = delete;

    Prediction predict(const GrayImage& img, std::string_view case_id) override;
    bool thread_safe() const override { return false; }
    std::string name() const override { return "external"; }

  private:
    void spawn();
    std::string read_line();

    std::string command_;
    double timeout_seconds_;
    std::mutex mutex_;
    int child_pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
    bool answered_once_ = false;
};

}  // namespace morphtest
