#pragma once

// Shared call-center vocabulary: department labels, stage timings, confusion
// counts, and the imbalance-aware metric suite used throughout the toolkit.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pairing/errors.hpp"
#include "pairing/timeutil.hpp"

namespace pairing {

// Department label. The case study is binary: SERVICE_A purchases are the
// positive class, every other enquiry is OTHER.
class Label {
public:
    static constexpr int kOther = 0;
    static constexpr int kServiceA = 1;

    constexpr Label() = default;

    // Department index in {0, ..., max_department}.
    explicit Label(int value, int max_department = kServiceA) : value_(value) {
        if (value < 0 || value > max_department)
            throw ConfigError("label value out of range for configured department count");
    }

    static Label service_a() { return Label(kServiceA); }
    static Label other() { return Label(kOther); }

    constexpr int value() const { return value_; }
    constexpr bool positive() const { return value_ == kServiceA; }

    friend constexpr bool operator==(Label a, Label b) { return a.value_ == b.value_; }
    friend constexpr bool operator!=(Label a, Label b) { return a.value_ != b.value_; }

private:
    int value_ = kOther;
};

// Average stage durations in seconds: IVR keypad navigation (stage 1),
// queue plus agent service (stage 2), prediction plus confirmation message.
struct TimingParams {
    double t_stage1;
    double t_stage2;
    double t_pred;

    TimingParams(double stage1, double stage2, double pred);
};

// Prediction outcome tallies. Field order follows the conventional
// TN, FP, FN, TP presentation of a binary confusion matrix.
struct ConfusionCounts {
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tp = 0;

    std::uint64_t total() const { return tn + fp + fn + tp; }
    std::uint64_t correct() const { return tp + tn; }
    std::uint64_t incorrect() const { return fp + fn; }
    // Calls that receive the prediction-stage message in the binary flow.
    std::uint64_t predicted_positive() const { return tp + fp; }

    friend bool operator==(const ConfusionCounts& a, const ConfusionCounts& b) {
        return a.tn == b.tn && a.fp == b.fp && a.fn == b.fn && a.tp == b.tp;
    }
};

// One call: who called, when, the engineered feature vector, and the true
// department the call was about.
struct CallRecord {
    std::uint64_t caller_id = 0;
    Timestamp timestamp = 0;
    std::vector<double> features;
    Label true_label;
};

struct MetricsReport {
    double precision = 0.0;
    double recall = 0.0;
    double specificity = 0.0;
    double f1 = 0.0;
    double gm = 0.0;
    double f1_gm = 0.0;
};

// Degenerate denominators map to 0 so metric pipelines stay total over
// thresholds that predict a single class.
double precision(const ConfusionCounts& cm);
double recall(const ConfusionCounts& cm);
double specificity(const ConfusionCounts& cm);
double f1_score(const ConfusionCounts& cm);
double geometric_mean(const ConfusionCounts& cm);
double f1_gm(const ConfusionCounts& cm);

MetricsReport compute_metrics(const ConfusionCounts& cm);

// Tallies (predicted, actual) label pairs; SERVICE_A is the positive class.
// Rejects empty input.
ConfusionCounts accumulate(std::span<const std::pair<Label, Label>> predictions);

} // namespace pairing
