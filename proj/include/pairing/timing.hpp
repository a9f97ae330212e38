#pragma once

// Closed-form call-time accounting: per-call durations under each routing
// policy, fleet totals from confusion counts, and break-even analysis of
// when a prediction policy beats a reference policy.

#include <cstdint>

#include "pairing/domain.hpp"

namespace pairing::timing {

// Total seconds across a set of calls, with the per-stage contributions
// that sum to it.
struct TimeTotals {
    double total_seconds = 0.0;
    std::uint64_t n_calls = 0;
    double pred_seconds = 0.0;   // prediction + confirmation message
    double stage1_seconds = 0.0; // IVR keypad navigation
    double stage2_seconds = 0.0; // queue + agent service
};

// Condition on t_stage1 relative to t_pred under which one policy beats
// another: t_stage1 {direction} coefficient * t_pred.
struct BreakEvenReport {
    enum class Direction { greater_than, less_than };

    double coefficient = 0.0;
    Direction direction = Direction::greater_than;

    bool satisfied(const TimingParams& p) const {
        return direction == Direction::greater_than ? p.t_stage1 > coefficient * p.t_pred
                                                    : p.t_stage1 < coefficient * p.t_pred;
    }
};

// A policy's fleet total as an affine form over the stage durations:
//   total = pred_calls * t_pred + stage1_calls * t_stage1 + n_calls * t_stage2.
// This is the shape every policy's total reduces to, and what the pairwise
// break-even analysis operates on.
struct PolicyTimeForm {
    double pred_calls = 0.0;
    double stage1_calls = 0.0;
    double n_calls = 0.0;

    double total(const TimingParams& p) const {
        return pred_calls * p.t_pred + stage1_calls * p.t_stage1 + n_calls * p.t_stage2;
    }
};

// Per-call durations.
double call_duration_traditional(const TimingParams& p);   // t_stage1 + t_stage2
double duration_correct_prediction(const TimingParams& p); // t_pred + t_stage2
double duration_incorrect_prediction(const TimingParams& p); // t_pred + t_stage1 + t_stage2

// Fleet totals. total_traditional rejects n_calls = 0.
TimeTotals total_traditional(std::uint64_t n_calls, const TimingParams& p);

// Multiclass flow: every call pays t_pred; incorrect predictions repeat the IVR.
TimeTotals total_predicted_multiclass(const ConfusionCounts& cm, const TimingParams& p);

// Binary flow: only positive-predicted calls (tp + fp) pay t_pred; calls
// predicted negative go through the normal IVR untouched.
TimeTotals total_predicted_binary(const ConfusionCounts& cm, const TimingParams& p);

PolicyTimeForm binary_policy_form(const ConfusionCounts& cm);
PolicyTimeForm traditional_form(std::uint64_t n_calls);

// Condition for the binary prediction policy to beat the traditional flow:
// t_stage1 > ((tp + fp) / tp) * t_pred. Errors when tp = 0 (never beneficial).
BreakEvenReport break_even_vs_traditional(const ConfusionCounts& cm);

// Generic pairwise condition for policy B to beat policy A, as the ratio of
// t_stage1 to t_pred at which their totals cross. Errors when the totals
// never cross for positive timings (no finite ratio).
BreakEvenReport break_even_between(const PolicyTimeForm& a, const PolicyTimeForm& b);

// total(A) - total(B); positive means policy B is faster. Both confusion
// matrices must cover the same number of calls.
double compare_policies(const ConfusionCounts& cm_a, const ConfusionCounts& cm_b,
                        const TimingParams& p);

} // namespace pairing::timing
