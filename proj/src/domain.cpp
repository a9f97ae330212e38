#include "pairing/domain.hpp"

#include <cmath>
#include <cstdio>

namespace pairing {

TimingParams::TimingParams(double stage1, double stage2, double pred)
    : t_stage1(stage1), t_stage2(stage2), t_pred(pred) {
    if (!(std::isfinite(stage1) && stage1 > 0.0) ||
        !(std::isfinite(stage2) && stage2 > 0.0) ||
        !(std::isfinite(pred) && pred > 0.0))
        throw ConfigError("timing parameters must be strictly positive and finite");
    if (!(pred < stage1))
        throw ConfigError("t_pred must be smaller than t_stage1 for prediction to pay off");
}

double precision(const ConfusionCounts& cm) {
    const std::uint64_t denom = cm.tp + cm.fp;
    return denom == 0 ? 0.0 : static_cast<double>(cm.tp) / static_cast<double>(denom);
}

double recall(const ConfusionCounts& cm) {
    const std::uint64_t denom = cm.tp + cm.fn;
    return denom == 0 ? 0.0 : static_cast<double>(cm.tp) / static_cast<double>(denom);
}

double specificity(const ConfusionCounts& cm) {
    const std::uint64_t denom = cm.tn + cm.fp;
    return denom == 0 ? 0.0 : static_cast<double>(cm.tn) / static_cast<double>(denom);
}

double f1_score(const ConfusionCounts& cm) {
    const double p = precision(cm);
    const double r = recall(cm);
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

double geometric_mean(const ConfusionCounts& cm) {
    return std::sqrt(recall(cm) * specificity(cm));
}

double f1_gm(const ConfusionCounts& cm) {
    return std::sqrt(f1_score(cm) * geometric_mean(cm));
}

MetricsReport compute_metrics(const ConfusionCounts& cm) {
    MetricsReport r;
    r.precision = precision(cm);
    r.recall = recall(cm);
    r.specificity = specificity(cm);
    r.f1 = f1_score(cm);
    r.gm = geometric_mean(cm);
    r.f1_gm = f1_gm(cm);
    return r;
}

ConfusionCounts accumulate(std::span<const std::pair<Label, Label>> predictions) {
    if (predictions.empty())
        throw DataError("accumulate: no predictions to tally");
    ConfusionCounts cm;
    for (const auto& [predicted, actual] : predictions) {
        if (predicted.positive())
            actual.positive() ? ++cm.tp : ++cm.fp;
        else
            actual.positive() ? ++cm.fn : ++cm.tn;
    }
    return cm;
}

std::string format_iso8601(Timestamp ts) {
    const std::int64_t day = ts >= 0 ? ts / kSecondsPerDay
                                     : (ts - (kSecondsPerDay - 1)) / kSecondsPerDay;
    const std::int64_t tod = ts - day * kSecondsPerDay;
    const CivilDate c = civil_from_days(day);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month, c.day,
                  static_cast<int>(tod / 3600), static_cast<int>(tod / 60 % 60),
                  static_cast<int>(tod % 60));
    return buf;
}

Timestamp parse_iso8601(const std::string& text) {
    int y = 0, mo = 0, d = 0, hh = 0, mm = 0, ss = 0;
    const int n = std::sscanf(text.c_str(), "%d-%d-%dT%d:%d:%d", &y, &mo, &d, &hh, &mm, &ss);
    if (n < 3 || mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo))
        throw DataError("unparseable ISO-8601 timestamp: " + text);
    return make_timestamp(y, mo, d, hh, mm, ss);
}

} // namespace pairing
