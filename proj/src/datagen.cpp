#include "pairing/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <json.hpp>

#include "pairing/rng.hpp"
#include "pairing/textio.hpp"

namespace pairing::datagen {

using nlohmann::json;

const std::array<const char*, kNumDepartments> kDepartmentNames = {
    "billing", "service_a_sales", "tech_support", "mobile", "internet", "retention"};

const std::array<const char*, 3> kLanguages = {"el", "en", "other"};
const std::array<const char*, 5> kRegions = {"nicosia", "limassol", "larnaca", "paphos",
                                             "famagusta"};

namespace {

constexpr std::int64_t kDay = kSecondsPerDay;
constexpr int kDaysSinceCap = 730;

// Derived-stream tags so every purpose gets an independent substream.
constexpr std::uint64_t kStreamCustomer = 0x637573746f6d6572ULL;
constexpr std::uint64_t kStreamTrait = 0x7472616974ULL;
constexpr std::uint64_t kStreamCalls = 0x63616c6c73ULL;
constexpr std::uint64_t kStreamLabel = 0x6c6162656cULL;
constexpr std::uint64_t kStreamDept = 0x64657074ULL;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double trait_for(std::uint64_t seed, std::uint64_t caller_id) {
    Rng rng(mix_seeds(mix_seeds(seed, kStreamTrait), caller_id));
    return rng.normal();
}

struct ServiceState {
    int active = 0;
    int expiring_60d = 0;
};

ServiceState service_state(const CustomerRecord& c, Timestamp as_of) {
    ServiceState s;
    for (const auto& sub : c.services) {
        if (!sub.active || sub.start > as_of || as_of >= sub.expiration) continue;
        ++s.active;
        if (sub.expiration <= as_of + 60 * kDay) ++s.expiring_60d;
    }
    return s;
}

// Observable part of the label propensity, over profile and demographics
// only. The hidden per-customer trait is added outside the signal-strength
// multiplier, so the strength knob controls how learnable labels are from
// the engineered features without also amplifying the noise. Purchase
// intent is a weighted blend of an expiring service (the part the
// rule baseline can see), business accounts, language, age band, and
// service count; at high signal the label concentrates on the top of
// this score's distribution.
double observable_propensity(const CustomerRecord& c, Timestamp as_of) {
    const ServiceState s = service_state(c, as_of);
    const double age_bump = std::max(0.0, 1.0 - std::abs(c.age - 35.0) / 25.0);
    const double score = 0.5 * (s.expiring_60d >= 1 ? 1.0 : 0.0) +
                         0.9 * (c.company ? 1.0 : 0.0) +
                         0.8 * (c.language == 1 ? 1.0 : 0.0) + 0.7 * age_bump +
                         0.5 * (std::min(s.active, 4) / 4.0);
    return score / 3.4; // normalized to [0, 1]
}

std::vector<std::string> build_feature_names() {
    std::vector<std::string> names = {
        "age_norm",         "is_company",      "lang_el",
        "lang_en",          "lang_other",      "region_nicosia",
        "region_limassol",  "region_larnaca",  "region_paphos",
        "region_famagusta", "active_services", "services_expiring_60d",
        "days_since_last_interaction",
    };
    for (const char* window : {"1m", "3m", "12m"}) {
        names.push_back(std::string("calls_") + window);
        for (const char* dept : kDepartmentNames)
            names.push_back(std::string("calls_") + dept + "_" + window);
    }
    names.push_back("retail_visits_12m");
    return names;
}

} // namespace

const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names = build_feature_names();
    return names;
}

int feature_dimension() { return static_cast<int>(feature_names().size()); }

int feature_index(const std::string& name) {
    const auto& names = feature_names();
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

const char* split_name(SplitTag tag) {
    switch (tag) {
        case SplitTag::train: return "train";
        case SplitTag::validation: return "validation";
        case SplitTag::test: return "test";
    }
    return "?";
}

void GenConfig::validate() const {
    if (n_customers == 0) throw ConfigError("n_customers must be positive");
    if (train_months < 1 || validation_months < 1 || test_months < 1)
        throw ConfigError("split durations must be at least one month each");
    if (!(positive_rate > 0.0 && positive_rate < 0.5))
        throw ConfigError("positive_rate must lie in (0, 0.5)");
    if (!(calls_per_customer_mean > 0.0))
        throw ConfigError("calls_per_customer_mean must be positive");
    if (!(label_signal_strength >= 0.0))
        throw ConfigError("label_signal_strength must be non-negative");
}

GenConfig GenConfig::scaled(double scale) const {
    if (!(scale > 0.0)) throw ConfigError("scale must be positive");
    GenConfig out = *this;
    const double scaled_n = static_cast<double>(kFullScaleCustomers) * scale;
    out.n_customers = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(scaled_n)));
    return out;
}

std::vector<CustomerRecord> generate_population(const GenConfig& cfg) {
    cfg.validate();
    const Rng base(mix_seeds(cfg.seed, kStreamCustomer));
    std::vector<CustomerRecord> population;
    population.reserve(cfg.n_customers);

    for (std::uint64_t i = 0; i < cfg.n_customers; ++i) {
        CustomerRecord c;
        c.caller_id = i + 1;
        Rng rng = base.fork(c.caller_id);

        c.age = 18 + static_cast<int>(rng.uniform_int(70));
        const double lang_u = rng.uniform();
        c.language = lang_u < 0.65 ? 0 : (lang_u < 0.90 ? 1 : 2);
        const double region_u = rng.uniform();
        c.region = region_u < 0.35 ? 0
                   : region_u < 0.60 ? 1
                   : region_u < 0.75 ? 2
                   : region_u < 0.88 ? 3
                                     : 4;
        c.company = rng.uniform() < 0.12;

        // Wide start band and multi-year terms keep the active set and the
        // expiring-soon pool roughly stationary across the dataset window.
        const int n_services = 1 + static_cast<int>(rng.poisson(1.2));
        c.services.reserve(n_services);
        for (int s = 0; s < n_services; ++s) {
            ServiceSubscription sub;
            sub.service_id = static_cast<int>(rng.uniform_int(40));
            const std::int64_t start_offset_days =
                static_cast<std::int64_t>(rng.uniform_int(1535)) - 1080;
            sub.start = cfg.start + start_offset_days * kDay;
            sub.expiration = sub.start + (360 + static_cast<std::int64_t>(rng.uniform_int(1080))) * kDay;
            sub.active = rng.uniform() < 0.9;
            c.services.push_back(sub);
        }

        const double trait = trait_for(cfg.seed, c.caller_id);
        const double p_service_a_dept =
            sigmoid(-2.5 + 2.5 * observable_propensity(c, cfg.start) + 0.5 * trait);

        const int n_history = static_cast<int>(rng.poisson(4.0));
        c.interaction_history.reserve(n_history);
        for (int h = 0; h < n_history; ++h) {
            Interaction ev;
            ev.when = cfg.start - (1 + static_cast<std::int64_t>(rng.uniform_int(365))) * kDay +
                      static_cast<std::int64_t>(rng.uniform_int(kDay));
            ev.channel = rng.uniform() < 0.25 ? Channel::retail : Channel::call_center;
            if (rng.uniform() < p_service_a_dept) {
                ev.department = kServiceADepartment;
            } else {
                static constexpr int other_depts[] = {0, 2, 3, 4, 5};
                ev.department = other_depts[rng.uniform_int(5)];
            }
            c.interaction_history.push_back(ev);
        }
        std::sort(c.interaction_history.begin(), c.interaction_history.end(),
                  [](const Interaction& a, const Interaction& b) { return a.when < b.when; });

        population.push_back(std::move(c));
    }
    return population;
}

std::vector<CallEvent> generate_calls(const std::vector<CustomerRecord>& population,
                                      const GenConfig& cfg) {
    cfg.validate();
    if (population.empty()) throw DataError("generate_calls: population is empty");

    const Timestamp window_start = cfg.start;
    const Timestamp window_end = cfg.end();
    const std::uint64_t span = static_cast<std::uint64_t>(window_end - window_start);

    const Rng arrivals(mix_seeds(cfg.seed, kStreamCalls));
    std::vector<CallEvent> calls;
    for (const auto& customer : population) {
        Rng rng = arrivals.fork(customer.caller_id);
        const std::uint64_t k = rng.poisson(cfg.calls_per_customer_mean);
        for (std::uint64_t j = 0; j < k; ++j) {
            CallEvent ev;
            ev.caller_id = customer.caller_id;
            ev.timestamp = window_start + static_cast<Timestamp>(rng.uniform_int(span));
            calls.push_back(ev);
        }
    }
    std::sort(calls.begin(), calls.end(), [](const CallEvent& a, const CallEvent& b) {
        return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.caller_id < b.caller_id;
    });

    // Latent propensity per call, then calibrate the intercept so the mean
    // positive probability hits the configured rate.
    std::unordered_map<std::uint64_t, const CustomerRecord*> by_id;
    by_id.reserve(population.size());
    for (const auto& c : population) by_id[c.caller_id] = &c;

    const double s = cfg.label_signal_strength;
    std::vector<double> raw(calls.size());
    for (std::size_t i = 0; i < calls.size(); ++i) {
        const CustomerRecord& c = *by_id.at(calls[i].caller_id);
        raw[i] = s * observable_propensity(c, calls[i].timestamp) +
                 0.7 * trait_for(cfg.seed, c.caller_id);
    }

    auto mean_prob = [&](double intercept) {
        double sum = 0.0;
        for (double r : raw) sum += sigmoid(intercept + r);
        return sum / static_cast<double>(raw.size());
    };
    // Bracket the intercept around the raw-score range so the bisection
    // can reach any target rate at any signal strength.
    double raw_lo = raw.empty() ? 0.0 : raw.front(), raw_hi = raw_lo;
    for (double r : raw) {
        raw_lo = std::min(raw_lo, r);
        raw_hi = std::max(raw_hi, r);
    }
    double lo = -raw_hi - 40.0, hi = -raw_lo + 40.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mean_prob(mid) < cfg.positive_rate ? lo : hi) = mid;
    }
    const double intercept = 0.5 * (lo + hi);

    const Rng labels(mix_seeds(cfg.seed, kStreamLabel));
    const Rng depts(mix_seeds(cfg.seed, kStreamDept));
    for (std::size_t i = 0; i < calls.size(); ++i) {
        Rng rng = labels.fork(i);
        const bool positive = rng.uniform() < sigmoid(intercept + raw[i]);
        calls[i].true_label = positive ? Label::service_a() : Label::other();
        if (positive) {
            calls[i].department = kServiceADepartment;
        } else {
            static constexpr int other_depts[] = {0, 2, 3, 4, 5};
            calls[i].department = other_depts[depts.fork(i).uniform_int(5)];
        }
    }
    return calls;
}

std::vector<double> engineer_features(const CustomerRecord& c, Timestamp as_of) {
    std::vector<double> x(feature_dimension(), 0.0);

    x[0] = c.age / 100.0;
    x[1] = c.company ? 1.0 : 0.0;
    x[2 + c.language] = 1.0;
    x[5 + c.region] = 1.0;

    const ServiceState s = service_state(c, as_of);
    x[10] = s.active;
    x[11] = s.expiring_60d;

    const Timestamp m1 = add_months(as_of, -1);
    const Timestamp m3 = add_months(as_of, -3);
    const Timestamp m12 = add_months(as_of, -12);

    Timestamp last_interaction = 0;
    bool has_interaction = false;
    for (const auto& ev : c.interaction_history) {
        if (ev.when >= as_of) break; // history is sorted; only strictly-before events count
        has_interaction = true;
        last_interaction = ev.when;
        if (ev.channel == Channel::retail) {
            if (ev.when >= m12) x[34] += 1.0;
            continue;
        }
        for (int w = 0; w < 3; ++w) {
            const Timestamp window_start = w == 0 ? m1 : (w == 1 ? m3 : m12);
            if (ev.when < window_start) continue;
            x[13 + 7 * w] += 1.0;                      // window total
            x[13 + 7 * w + 1 + ev.department] += 1.0;  // per-department count
        }
    }
    x[12] = has_interaction
                ? std::min<double>(kDaysSinceCap,
                                   static_cast<double>((as_of - last_interaction) / kDay))
                : kDaysSinceCap;
    return x;
}

SplitBundle temporal_split(const std::vector<CustomerRecord>& population,
                           const std::vector<CallEvent>& calls, const GenConfig& cfg) {
    cfg.validate();
    if (calls.empty()) throw DataError("temporal_split: no calls");

    const Timestamp b0 = cfg.start;
    const Timestamp b1 = cfg.train_end();
    const Timestamp b2 = cfg.validation_end();
    const Timestamp b3 = cfg.end();

    Timestamp max_ts = calls.front().timestamp;
    for (const auto& ev : calls) {
        if (ev.timestamp < b0 || ev.timestamp >= b3)
            throw DataError("temporal_split: call outside the configured window");
        max_ts = std::max(max_ts, ev.timestamp);
    }
    if (max_ts < b2)
        throw DataError("temporal_split: call stream does not span the configured window");

    std::unordered_map<std::uint64_t, CustomerRecord> working;
    working.reserve(population.size());
    for (const auto& c : population) working.emplace(c.caller_id, c);

    SplitBundle bundle;
    for (LabeledDataset* ds : {&bundle.train, &bundle.validation, &bundle.test})
        ds->feature_names = feature_names();
    bundle.train.split_tag = SplitTag::train;
    bundle.validation.split_tag = SplitTag::validation;
    bundle.test.split_tag = SplitTag::test;

    for (const auto& ev : calls) {
        auto it = working.find(ev.caller_id);
        if (it == working.end()) throw DataError("temporal_split: unknown caller id");
        CustomerRecord& cust = it->second;

        CallRecord rec;
        rec.caller_id = ev.caller_id;
        rec.timestamp = ev.timestamp;
        rec.true_label = ev.true_label;
        rec.features = engineer_features(cust, ev.timestamp);

        // Half-open windows; a record on the boundary instant joins the later split.
        LabeledDataset& target = ev.timestamp < b1 ? bundle.train
                                : ev.timestamp < b2 ? bundle.validation
                                                    : bundle.test;
        target.records.push_back(std::move(rec));

        cust.interaction_history.push_back(
            Interaction{ev.timestamp, Channel::call_center, ev.department});
    }
    return bundle;
}

SplitBundle generate_datasets(const GenConfig& cfg) {
    const auto population = generate_population(cfg);
    const auto calls = generate_calls(population, cfg);
    return temporal_split(population, calls, cfg);
}

void write_dataset_csv(const std::string& path, const LabeledDataset& dataset) {
    std::string out = "caller_id,timestamp,split,label";
    for (const auto& name : dataset.feature_names) out += "," + name;
    out += "\n";
    for (const auto& rec : dataset.records) {
        out += std::to_string(rec.caller_id);
        out += ",";
        out += format_iso8601(rec.timestamp);
        out += ",";
        out += split_name(dataset.split_tag);
        out += rec.true_label.positive() ? ",SERVICE_A" : ",OTHER";
        for (double v : rec.features) {
            out += ",";
            out += format_double(v);
        }
        out += "\n";
    }
    write_file_atomic(path, out);
}

LabeledDataset read_dataset_csv(const std::string& path) {
    const std::string content = read_file(path);
    const auto lines = split_text(content, '\n');
    if (lines.empty()) throw DataError("empty dataset file: " + path);

    LabeledDataset ds;
    const auto header = split_text(lines[0], ',');
    if (header.size() < 5 || header[0] != "caller_id")
        throw DataError("malformed dataset header in " + path);
    ds.feature_names.assign(header.begin() + 4, header.end());

    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const auto cells = split_text(lines[li], ',');
        if (cells.size() != header.size())
            throw DataError("malformed dataset row in " + path);
        CallRecord rec;
        try {
            rec.caller_id = std::stoull(cells[0]);
        } catch (const std::exception&) {
            throw DataError("malformed caller id '" + cells[0] + "' in " + path);
        }
        rec.timestamp = parse_iso8601(cells[1]);
        if (cells[3] == "SERVICE_A")
            rec.true_label = Label::service_a();
        else if (cells[3] == "OTHER")
            rec.true_label = Label::other();
        else
            throw DataError("unknown label '" + cells[3] + "' in " + path);
        rec.features.reserve(ds.feature_names.size());
        for (std::size_t f = 4; f < cells.size(); ++f) rec.features.push_back(parse_double(cells[f]));
        if (ds.records.empty()) {
            for (SplitTag tag : {SplitTag::train, SplitTag::validation, SplitTag::test})
                if (cells[2] == split_name(tag)) ds.split_tag = tag;
        }
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

void write_schema_json(const std::string& path, const GenConfig& cfg) {
    json j;
    j["feature_names"] = feature_names();
    j["departments"] = kDepartmentNames;
    j["languages"] = kLanguages;
    j["regions"] = kRegions;
    j["config"] = {{"n_customers", cfg.n_customers},
                   {"train_months", cfg.train_months},
                   {"validation_months", cfg.validation_months},
                   {"test_months", cfg.test_months},
                   {"positive_rate", cfg.positive_rate},
                   {"calls_per_customer_mean", cfg.calls_per_customer_mean},
                   {"seed", cfg.seed},
                   {"label_signal_strength", cfg.label_signal_strength},
                   {"start", format_iso8601(cfg.start)}};
    write_file_atomic(path, j.dump(2) + "\n");
}

GenConfig read_schema_json(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw DataError("malformed schema json " + path + ": " + e.what());
    }
    GenConfig cfg;
    const json& c = j.at("config");
    cfg.n_customers = c.at("n_customers").get<std::uint64_t>();
    cfg.train_months = c.at("train_months").get<int>();
    cfg.validation_months = c.at("validation_months").get<int>();
    cfg.test_months = c.at("test_months").get<int>();
    cfg.positive_rate = c.at("positive_rate").get<double>();
    cfg.calls_per_customer_mean = c.at("calls_per_customer_mean").get<double>();
    cfg.seed = c.at("seed").get<std::uint64_t>();
    cfg.label_signal_strength = c.at("label_signal_strength").get<double>();
    cfg.start = parse_iso8601(c.at("start").get<std::string>());
    cfg.validate();
    return cfg;
}

} // namespace pairing::datagen
