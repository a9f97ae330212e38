#include "pairing/rules.hpp"

#include <algorithm>
#include <sstream>

#include "pairing/textio.hpp"

namespace pairing::models {

namespace {

const char* op_text(RuleOp op) {
    switch (op) {
        case RuleOp::lt: return "<";
        case RuleOp::le: return "<=";
        case RuleOp::gt: return ">";
        case RuleOp::ge: return ">=";
        case RuleOp::eq: return "==";
        case RuleOp::ne: return "!=";
    }
    return "?";
}

RuleOp op_from_text(const std::string& text) {
    for (RuleOp op : {RuleOp::le, RuleOp::ge, RuleOp::lt, RuleOp::gt, RuleOp::eq, RuleOp::ne})
        if (text == op_text(op)) return op;
    throw ConfigError("unknown rule operator: '" + text + "'");
}

bool holds(const RuleCondition& c, double v) {
    switch (c.op) {
        case RuleOp::lt: return v < c.constant;
        case RuleOp::le: return v <= c.constant;
        case RuleOp::gt: return v > c.constant;
        case RuleOp::ge: return v >= c.constant;
        case RuleOp::eq: return v == c.constant;
        case RuleOp::ne: return v != c.constant;
    }
    return false;
}

} // namespace

RuleSetModel::RuleSetModel(std::vector<Rule> rules, std::vector<std::string> feature_names,
                           double threshold)
    : Classifier(ModelKind::rules, std::move(feature_names), threshold), rules_(std::move(rules)) {
    for (const auto& rule : rules_)
        for (const auto& cond : rule.conditions)
            if (cond.feature < 0 || cond.feature >= dimension())
                throw ConfigError("rule references a feature outside the schema");
}

double RuleSetModel::score(std::span<const double> x) const {
    for (const auto& rule : rules_) {
        bool fired = !rule.conditions.empty();
        for (const auto& cond : rule.conditions)
            if (!holds(cond, x[cond.feature])) {
                fired = false;
                break;
            }
        if (fired) return 1.0;
    }
    return 0.0;
}

std::string RuleSetModel::to_text() const {
    std::string out;
    for (const auto& rule : rules_) {
        for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
            const auto& c = rule.conditions[i];
            if (i > 0) out += " AND ";
            out += feature_names()[c.feature];
            out += " ";
            out += op_text(c.op);
            out += " ";
            out += format_double(c.constant);
        }
        out += "\n";
    }
    return out;
}

RuleSetModel RuleSetModel::parse(const std::string& text,
                                 const std::vector<std::string>& feature_names,
                                 double threshold) {
    std::vector<Rule> rules;
    for (const std::string& raw_line : split_text(text, '\n')) {
        const auto hash = raw_line.find('#');
        const std::string line = hash == std::string::npos ? raw_line : raw_line.substr(0, hash);

        std::istringstream tokens(line);
        std::vector<std::string> parts;
        std::string tok;
        while (tokens >> tok) parts.push_back(tok);
        if (parts.empty()) continue;

        Rule rule;
        std::size_t i = 0;
        for (;;) {
            if (i + 3 > parts.size())
                throw ConfigError("malformed rule line: '" + raw_line + "'");
            RuleCondition cond;
            const auto it = std::find(feature_names.begin(), feature_names.end(), parts[i]);
            if (it == feature_names.end())
                throw ConfigError("rule references unknown feature '" + parts[i] + "'");
            cond.feature = static_cast<int>(it - feature_names.begin());
            cond.op = op_from_text(parts[i + 1]);
            try {
                cond.constant = parse_double(parts[i + 2]);
            } catch (const DataError& e) {
                throw ConfigError(std::string("bad rule constant: ") + e.what());
            }
            rule.conditions.push_back(cond);
            i += 3;
            if (i == parts.size()) break;
            if (parts[i] != "AND")
                throw ConfigError("expected AND in rule line: '" + raw_line + "'");
            ++i;
        }
        rules.push_back(std::move(rule));
    }
    return RuleSetModel(std::move(rules), feature_names, threshold);
}

const std::string& default_rules_text() {
    static const std::string text =
        "calls_service_a_sales_3m >= 1\n"
        "services_expiring_60d >= 1\n";
    return text;
}

} // namespace pairing::models
