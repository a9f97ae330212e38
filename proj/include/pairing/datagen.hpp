#pragma once

// Synthetic customer population and call-log generator. Produces the same
// schema the routing study works over (demographics, customer profile,
// interaction history), with seeded determinism, a configurable class
// imbalance, and leakage-free as-of feature engineering.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pairing/domain.hpp"
#include "pairing/timeutil.hpp"

namespace pairing::datagen {

// Departments reachable through the IVR. Department 1 sells SERVICE_A.
inline constexpr int kNumDepartments = 6;
inline constexpr int kServiceADepartment = 1;
extern const std::array<const char*, kNumDepartments> kDepartmentNames;

enum class Channel { call_center, retail };

struct ServiceSubscription {
    int service_id = 0;
    Timestamp start = 0;
    Timestamp expiration = 0;
    bool active = true;
};

struct Interaction {
    Timestamp when = 0;
    Channel channel = Channel::call_center;
    int department = 0;
};

struct CustomerRecord {
    std::uint64_t caller_id = 0;
    int age = 0;
    int language = 0; // index into kLanguages
    int region = 0;   // index into kRegions
    bool company = false;
    std::vector<ServiceSubscription> services;
    std::vector<Interaction> interaction_history; // sorted ascending by time
};

extern const std::array<const char*, 3> kLanguages;
extern const std::array<const char*, 5> kRegions;

struct GenConfig {
    // The case-study train split saw 162563 unique callers; the default
    // customer count is 1% of that so the whole pipeline runs in seconds.
    static constexpr std::uint64_t kFullScaleCustomers = 162563;

    std::uint64_t n_customers = 1626;
    int train_months = 12;
    int validation_months = 2;
    int test_months = 1;
    double positive_rate = 0.0219;
    double calls_per_customer_mean = 6.34; // over the whole window
    std::uint64_t seed = 42;
    // Logit swing in nats across the observable score's full range; the
    // default makes labels nearly deterministic given the features.
    double label_signal_strength = 140.0;
    Timestamp start = make_timestamp(2022, 1, 1);

    void validate() const; // ConfigError on violation
    int total_months() const { return train_months + validation_months + test_months; }
    Timestamp train_end() const { return add_months(start, train_months); }
    Timestamp validation_end() const { return add_months(start, train_months + validation_months); }
    Timestamp end() const { return add_months(start, total_months()); }

    // Fraction of the full-scale population: scaled(0.01) is the default size.
    GenConfig scaled(double scale) const;
};

// One generated call before feature engineering. The department realizes the
// label: SERVICE_A calls go to the SERVICE_A sales department.
struct CallEvent {
    std::uint64_t caller_id = 0;
    Timestamp timestamp = 0;
    Label true_label;
    int department = 0;
};

enum class SplitTag { train, validation, test };

const char* split_name(SplitTag tag);

struct LabeledDataset {
    std::vector<CallRecord> records;
    std::vector<std::string> feature_names;
    SplitTag split_tag = SplitTag::train;
};

struct SplitBundle {
    LabeledDataset train;
    LabeledDataset validation;
    LabeledDataset test;
};

// The engineered feature schema, fixed across the toolkit.
const std::vector<std::string>& feature_names();
int feature_dimension();
int feature_index(const std::string& name); // -1 when unknown

// Deterministic given cfg.seed; n_customers records.
std::vector<CustomerRecord> generate_population(const GenConfig& cfg);

// Poisson call arrivals per customer over the window; labels drawn from a
// logistic propensity over profile signals, calibrated so the positive
// fraction matches cfg.positive_rate in expectation.
std::vector<CallEvent> generate_calls(const std::vector<CustomerRecord>& population,
                                      const GenConfig& cfg);

// As-of feature vector for one customer. Uses only history strictly before
// as_of; no label information flows in.
std::vector<double> engineer_features(const CustomerRecord& customer, Timestamp as_of);

// Assigns calls to contiguous half-open month windows (train/validation/test)
// and computes each call's features as of its own timestamp, folding earlier
// generated calls into the caller's history.
SplitBundle temporal_split(const std::vector<CustomerRecord>& population,
                           const std::vector<CallEvent>& calls, const GenConfig& cfg);

// generate_population + generate_calls + temporal_split.
SplitBundle generate_datasets(const GenConfig& cfg);

// CSV persistence: caller_id, timestamp (ISO-8601), split, label, features.
void write_dataset_csv(const std::string& path, const LabeledDataset& dataset);
LabeledDataset read_dataset_csv(const std::string& path);

// Sidecar schema: feature names plus the generation config.
void write_schema_json(const std::string& path, const GenConfig& cfg);
GenConfig read_schema_json(const std::string& path);

} // namespace pairing::datagen
