#include "tabnb/schema.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>

#include "tabnb/error.hpp"

namespace tabnb {

std::optional<std::size_t> AttributeSchema::attribute_index(std::string_view name) const {
    for (std::size_t i = 0; i < attributes.size(); ++i) {
        if (attributes[i].name == name) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> AttributeSchema::value_index(const Attribute& attribute,
                                                        std::string_view value) {
    for (std::size_t i = 0; i < attribute.values.size(); ++i) {
        if (attribute.values[i] == value) return i;
    }
    return std::nullopt;
}

std::size_t AttributeSchema::grid_size() const {
    std::size_t product = 1;
    for (const auto& attribute : attributes) product *= attribute.values.size();
    return product;
}

std::optional<std::size_t> ClassLabelSet::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) return i;
    }
    return std::nullopt;
}

ValidationResult validate_schema(const AttributeSchema& schema, const ClassLabelSet& classes) {
    ValidationResult result;
    auto add = [&result](std::string message) { result.violations.push_back(std::move(message)); };

    if (schema.attributes.empty()) add("no attributes");
    std::set<std::string> seen_attributes;
    for (const auto& attribute : schema.attributes) {
        if (attribute.name.empty()) add("empty attribute name");
        if (!seen_attributes.insert(attribute.name).second)
            add("duplicate attribute '" + attribute.name + "'");
        if (attribute.values.empty())
            add("attribute '" + attribute.name + "' has no values");
        std::set<std::string> seen_values;
        for (const auto& value : attribute.values) {
            if (value.empty()) {
                add("attribute '" + attribute.name + "' has an empty value name");
                continue;
            }
            if (!seen_values.insert(value).second)
                add("attribute '" + attribute.name + "' lists value '" + value + "' twice");
        }
    }

    if (classes.labels.empty()) add("no class labels");
    std::set<std::string> seen_labels;
    for (const auto& label : classes.labels) {
        if (label.empty()) {
            add("empty class label");
            continue;
        }
        if (!seen_labels.insert(label).second) add("duplicate class label '" + label + "'");
    }
    return result;
}

std::vector<std::int64_t> MarginalTableSet::column_sums(std::size_t attribute) const {
    std::vector<std::int64_t> sums(classes.size(), 0);
    for (const auto& row : tables[attribute].counts) {
        for (std::size_t c = 0; c < sums.size(); ++c) sums[c] += row[c];
    }
    return sums;
}

std::int64_t MarginalTableSet::grand_total(std::size_t attribute) const {
    const auto sums = column_sums(attribute);
    return std::accumulate(sums.begin(), sums.end(), std::int64_t{0});
}

void check_table_set(const MarginalTableSet& tables) {
    const auto validation = validate_schema(tables.schema, tables.classes);
    if (!validation.ok()) throw InputError("invalid schema: " + validation.violations.front());
    if (tables.tables.size() != tables.schema.attributes.size())
        throw InputError("table set must hold exactly one table per schema attribute");
    for (std::size_t a = 0; a < tables.tables.size(); ++a) {
        const auto& table = tables.tables[a];
        const auto& attribute = tables.schema.attributes[a];
        if (table.attribute != attribute.name)
            throw InputError("table order does not match schema order at '" + attribute.name + "'");
        if (table.counts.size() != attribute.values.size())
            throw InputError("table '" + attribute.name + "' row count does not match its values");
        for (const auto& row : table.counts) {
            if (row.size() != tables.classes.size())
                throw InputError("table '" + attribute.name + "' column count does not match classes");
            for (const auto count : row) {
                if (count < 0) throw InputError("table '" + attribute.name + "' has a negative count");
            }
        }
    }
}

ClassTotalsPolicy ClassTotalsPolicy::make_per_attribute(std::string prior_source) {
    ClassTotalsPolicy policy;
    policy.kind = Kind::per_attribute;
    policy.attribute = std::move(prior_source);
    return policy;
}

ClassTotalsPolicy ClassTotalsPolicy::make_reference(std::string attribute) {
    ClassTotalsPolicy policy;
    policy.kind = Kind::reference;
    policy.attribute = std::move(attribute);
    return policy;
}

ClassTotalsPolicy ClassTotalsPolicy::make_explicit(std::vector<std::int64_t> totals) {
    ClassTotalsPolicy policy;
    policy.kind = Kind::explicit_totals;
    policy.totals = std::move(totals);
    policy.grand_total = std::accumulate(policy.totals.begin(), policy.totals.end(), std::int64_t{0});
    return policy;
}

ClassTotalsPolicy ClassTotalsPolicy::parse(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view head = text.substr(0, colon);
    const std::string_view rest = colon == std::string_view::npos ? std::string_view{}
                                                                  : text.substr(colon + 1);
    if (head == "per-attribute") return make_per_attribute(std::string(rest));
    if (head == "reference") {
        if (rest.empty()) throw UsageError("policy 'reference' needs an attribute: reference:ATTR");
        return make_reference(std::string(rest));
    }
    throw UsageError("unknown policy '" + std::string(text) +
                     "' (expected per-attribute[:ATTR] or reference:ATTR)");
}

std::string ClassTotalsPolicy::describe() const {
    switch (kind) {
        case Kind::per_attribute:
            return attribute.empty() ? "per-attribute" : "per-attribute:" + attribute;
        case Kind::reference:
            return "reference:" + attribute;
        case Kind::explicit_totals: {
            std::ostringstream out;
            out << "explicit:";
            for (std::size_t i = 0; i < totals.size(); ++i) out << (i ? "," : "") << totals[i];
            return out.str();
        }
    }
    return "?";
}

namespace {

std::size_t policy_attribute_index(const MarginalTableSet& tables, const std::string& name,
                                   const char* role) {
    if (const auto index = tables.schema.attribute_index(name)) return *index;
    throw InputError(std::string("policy ") + role + " attribute '" + name +
                     "' is not in the schema");
}

}  // namespace

ResolvedTotals resolve_class_totals(const MarginalTableSet& tables,
                                    const ClassTotalsPolicy& policy) {
    check_table_set(tables);
    const std::size_t n_attributes = tables.schema.attributes.size();
    const std::size_t n_classes = tables.classes.size();

    ResolvedTotals resolved;
    resolved.denominators.resize(n_attributes);

    switch (policy.kind) {
        case ClassTotalsPolicy::Kind::per_attribute: {
            const std::size_t prior_attr =
                policy.attribute.empty() ? 0
                                         : policy_attribute_index(tables, policy.attribute,
                                                                  "prior-source");
            for (std::size_t a = 0; a < n_attributes; ++a)
                resolved.denominators[a] = tables.column_sums(a);
            resolved.class_totals = resolved.denominators[prior_attr];
            resolved.grand_total = tables.grand_total(prior_attr);
            break;
        }
        case ClassTotalsPolicy::Kind::reference: {
            const std::size_t ref =
                policy_attribute_index(tables, policy.attribute, "reference");
            resolved.class_totals = tables.column_sums(ref);
            resolved.grand_total = tables.grand_total(ref);
            for (std::size_t a = 0; a < n_attributes; ++a)
                resolved.denominators[a] = resolved.class_totals;
            break;
        }
        case ClassTotalsPolicy::Kind::explicit_totals: {
            if (policy.totals.size() != n_classes)
                throw InputError("explicit totals list " + std::to_string(policy.totals.size()) +
                                 " classes, table set has " + std::to_string(n_classes));
            std::int64_t sum = 0;
            for (std::size_t c = 0; c < n_classes; ++c) {
                if (policy.totals[c] <= 0)
                    throw InputError("explicit total for class '" + tables.classes.labels[c] +
                                     "' must be positive");
                sum += policy.totals[c];
            }
            if (policy.grand_total != sum)
                throw InputError("explicit grand total " + std::to_string(policy.grand_total) +
                                 " does not equal the class total sum " + std::to_string(sum));
            resolved.class_totals = policy.totals;
            resolved.grand_total = policy.grand_total;
            for (std::size_t a = 0; a < n_attributes; ++a)
                resolved.denominators[a] = policy.totals;
            break;
        }
    }
    return resolved;
}

SmoothingConfig SmoothingConfig::parse(std::string_view text) {
    auto fail = [&] {
        throw UsageError("alpha '" + std::string(text) +
                         "' is not a non-negative number (use e.g. 0, 0.25 or 1/40)");
    };
    auto parse_int = [&](std::string_view part) -> std::int64_t {
        std::int64_t value = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        if (ec != std::errc() || ptr != part.data() + part.size() || value < 0) fail();
        return value;
    };

    if (text.empty()) fail();
    SmoothingConfig config;
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        config.alpha_num = parse_int(text.substr(0, slash));
        config.alpha_den = parse_int(text.substr(slash + 1));
        if (config.alpha_den == 0) fail();
    } else if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        const std::string_view whole = text.substr(0, dot);
        const std::string_view frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 18) fail();
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        config.alpha_num = (whole.empty() ? 0 : parse_int(whole)) * den + parse_int(frac);
        config.alpha_den = den;
    } else {
        config.alpha_num = parse_int(text);
        config.alpha_den = 1;
    }
    // Keep the stored form canonical.
    const std::int64_t g = std::gcd(config.alpha_num, config.alpha_den);
    if (g > 1) {
        config.alpha_num /= g;
        config.alpha_den /= g;
    }
    return config;
}

}  // namespace tabnb
