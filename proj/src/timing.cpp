#include "pairing/timing.hpp"

namespace pairing::timing {

namespace {

TimeTotals from_breakdown(std::uint64_t n_calls, double pred, double stage1, double stage2) {
    TimeTotals t;
    t.n_calls = n_calls;
    t.pred_seconds = pred;
    t.stage1_seconds = stage1;
    t.stage2_seconds = stage2;
    t.total_seconds = pred + stage1 + stage2;
    return t;
}

} // namespace

double call_duration_traditional(const TimingParams& p) {
    return p.t_stage1 + p.t_stage2;
}

double duration_correct_prediction(const TimingParams& p) {
    return p.t_pred + p.t_stage2;
}

double duration_incorrect_prediction(const TimingParams& p) {
    return p.t_pred + p.t_stage1 + p.t_stage2;
}

TimeTotals total_traditional(std::uint64_t n_calls, const TimingParams& p) {
    if (n_calls == 0)
        throw DataError("total_traditional: call count must be positive");
    const double n = static_cast<double>(n_calls);
    return from_breakdown(n_calls, 0.0, n * p.t_stage1, n * p.t_stage2);
}

TimeTotals total_predicted_multiclass(const ConfusionCounts& cm, const TimingParams& p) {
    const double n = static_cast<double>(cm.total());
    const double incorrect = static_cast<double>(cm.incorrect());
    return from_breakdown(cm.total(), n * p.t_pred, incorrect * p.t_stage1, n * p.t_stage2);
}

TimeTotals total_predicted_binary(const ConfusionCounts& cm, const TimingParams& p) {
    const double n = static_cast<double>(cm.total());
    const double pred = static_cast<double>(cm.predicted_positive());
    // Everybody except correctly bypassed (tp) calls navigates stage 1.
    const double stage1 = static_cast<double>(cm.total() - cm.tp);
    return from_breakdown(cm.total(), pred * p.t_pred, stage1 * p.t_stage1, n * p.t_stage2);
}

PolicyTimeForm binary_policy_form(const ConfusionCounts& cm) {
    return {static_cast<double>(cm.predicted_positive()),
            static_cast<double>(cm.total() - cm.tp), static_cast<double>(cm.total())};
}

PolicyTimeForm traditional_form(std::uint64_t n_calls) {
    return {0.0, static_cast<double>(n_calls), static_cast<double>(n_calls)};
}

BreakEvenReport break_even_vs_traditional(const ConfusionCounts& cm) {
    if (cm.tp == 0)
        throw DataError("break-even: no true positives, prediction policy is never beneficial");
    BreakEvenReport r;
    r.coefficient = static_cast<double>(cm.predicted_positive()) / static_cast<double>(cm.tp);
    r.direction = BreakEvenReport::Direction::greater_than;
    return r;
}

BreakEvenReport break_even_between(const PolicyTimeForm& a, const PolicyTimeForm& b) {
    if (a.n_calls != b.n_calls)
        throw DataError("break-even: policies must cover the same call count");
    const double d_pred = a.pred_calls - b.pred_calls;
    const double d_stage1 = a.stage1_calls - b.stage1_calls;
    // B beats A iff d_pred * t_pred + d_stage1 * t_stage1 > 0.
    if (d_stage1 == 0.0)
        throw DataError("break-even: totals do not depend on t_stage1, no finite ratio");
    const double coefficient = -d_pred / d_stage1;
    if (coefficient <= 0.0)
        throw DataError("break-even: outcome is the same for every valid timing");
    BreakEvenReport r;
    r.coefficient = coefficient;
    r.direction = d_stage1 > 0.0 ? BreakEvenReport::Direction::greater_than
                                 : BreakEvenReport::Direction::less_than;
    return r;
}

double compare_policies(const ConfusionCounts& cm_a, const ConfusionCounts& cm_b,
                        const TimingParams& p) {
    if (cm_a.total() != cm_b.total())
        throw DataError("compare_policies: confusion matrices cover different call counts");
    return total_predicted_binary(cm_a, p).total_seconds -
           total_predicted_binary(cm_b, p).total_seconds;
}

} // namespace pairing::timing
