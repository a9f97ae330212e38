#pragma once

// Rule-based baseline: an ordered list of conjunctive predicates over named
// features. Any rule firing routes the call to SERVICE_A.
//
// Text format, one rule per line, '#' comments allowed:
//   feature op constant [AND feature op constant]...

#include <string>
#include <vector>

#include "pairing/models.hpp"

namespace pairing::models {

enum class RuleOp { lt, le, gt, ge, eq, ne };

struct RuleCondition {
    int feature = 0;
    RuleOp op = RuleOp::ge;
    double constant = 0.0;
};

struct Rule {
    std::vector<RuleCondition> conditions; // conjunction
};

class RuleSetModel final : public Classifier {
public:
    RuleSetModel(std::vector<Rule> rules, std::vector<std::string> feature_names,
                 double threshold = 0.5);

    const std::vector<Rule>& rules() const { return rules_; }
    std::string to_text() const;

    // ConfigError on unknown feature names or malformed syntax.
    static RuleSetModel parse(const std::string& text,
                              const std::vector<std::string>& feature_names,
                              double threshold = 0.5);

protected:
    double score(std::span<const double> x) const override;

private:
    std::vector<Rule> rules_;
};

// Stand-in production rules for the synthetic schema: recent SERVICE_A
// contact or an imminently expiring service suggests a purchase call.
const std::string& default_rules_text();

} // namespace pairing::models
