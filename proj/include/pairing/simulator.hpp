#pragma once

// Discrete-event simulation of the IVR call flow under each routing policy.
// Deterministic mode must reproduce the closed-form totals exactly; the
// stochastic mode draws per-call stage durations around the same means.

#include <cstdint>
#include <memory>
#include <vector>

#include "pairing/datagen.hpp"
#include "pairing/domain.hpp"
#include "pairing/models.hpp"
#include "pairing/timing.hpp"

namespace pairing::sim {

enum class PolicyKind { traditional, rules, model };

// A routing policy; rules and model policies carry the classifier that
// decides which calls get offered the prediction shortcut.
struct Policy {
    PolicyKind kind = PolicyKind::traditional;
    std::shared_ptr<const models::Classifier> classifier; // null for traditional

    static Policy traditional() { return {}; }
    static Policy rules(std::shared_ptr<const models::Classifier> rules_model);
    static Policy model(std::shared_ptr<const models::Classifier> clf);
};

const char* policy_name(PolicyKind kind);

struct IvrConfig {
    int n_menu_options = 9; // top-level IVR options
    int n_departments = datagen::kNumDepartments;
    TimingParams timing{45.0, 180.0, 5.0};
    bool stochastic = false;
    double duration_jitter = 0.0; // coefficient of variation per stage draw

    void validate() const;
};

// What happened to one call.
enum class CallPath {
    bypass,          // positive prediction confirmed: skip stage 1
    reject_then_ivr, // positive prediction rejected: pay t_pred, then full IVR
    ivr_only         // no prediction offered
};

const char* path_name(CallPath path);

struct PerCall {
    std::uint64_t caller_id = 0;
    CallPath path = CallPath::ivr_only;
    double duration_seconds = 0.0;
};

struct SimReport {
    std::vector<PerCall> per_call;
    timing::TimeTotals totals;
    ConfusionCounts cm;
    std::uint64_t seed = 0;

    std::uint64_t count(CallPath path) const;
};

// Runs the workload through the policy. Deterministic mode charges the exact
// configured stage means, and totals match the closed forms exactly.
SimReport simulate(const Policy& policy, const datagen::LabeledDataset& workload,
                   const IvrConfig& cfg, std::uint64_t seed);

// Synthesizes a call sequence realizing exactly the given confusion counts
// and simulates it (the prediction outcomes are forced, not re-decided).
SimReport replay_confusion(const ConfusionCounts& cm, const IvrConfig& cfg, std::uint64_t seed);

} // namespace pairing::sim
