#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tabnb {

// Ordered categorical feature space. Declaration order is significant: it
// fixes grid enumeration and every deterministic output of the toolkit.
struct AttributeSchema {
    struct Attribute {
        std::string name;
        std::vector<std::string> values;
    };

    std::vector<Attribute> attributes;

    std::optional<std::size_t> attribute_index(std::string_view name) const;
    static std::optional<std::size_t> value_index(const Attribute& attribute,
                                                  std::string_view value);
    // Product of the value counts over all attributes.
    std::size_t grid_size() const;
};

// Ordered outcome classes. Declaration order breaks prediction ties.
struct ClassLabelSet {
    std::vector<std::string> labels;

    std::optional<std::size_t> index_of(std::string_view label) const;
    std::size_t size() const { return labels.size(); }
};

// Partial assignment attribute name -> value name. Attributes may be absent.
using Profile = std::map<std::string, std::string>;

struct ValidationResult {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Collects every schema violation instead of stopping at the first.
ValidationResult validate_schema(const AttributeSchema& schema, const ClassLabelSet& classes);

// Value-by-class count block for one attribute.
struct MarginalTable {
    std::string attribute;
    std::vector<std::vector<std::int64_t>> counts;  // [value][class]
};

struct MarginalTableSet {
    AttributeSchema schema;
    ClassLabelSet classes;
    std::vector<MarginalTable> tables;  // one per attribute, schema order

    std::vector<std::int64_t> column_sums(std::size_t attribute) const;  // per class
    std::int64_t grand_total(std::size_t attribute) const;
};

// Throws InputError when the set violates its shape invariants (useful for
// hand-constructed sets; parser/aggregate outputs satisfy them by build).
void check_table_set(const MarginalTableSet& tables);

// Rule choosing which totals normalize priors and conditionals when the
// per-attribute marginals disagree.
struct ClassTotalsPolicy {
    enum class Kind { per_attribute, reference, explicit_totals };

    Kind kind = Kind::per_attribute;
    // per_attribute: prior-source attribute (empty = first schema attribute);
    // reference: the attribute whose column sums serve as every total.
    std::string attribute;
    std::vector<std::int64_t> totals;  // explicit_totals only, class order
    std::int64_t grand_total = 0;      // explicit_totals only

    static ClassTotalsPolicy make_per_attribute(std::string prior_source = {});
    static ClassTotalsPolicy make_reference(std::string attribute);
    static ClassTotalsPolicy make_explicit(std::vector<std::int64_t> totals);

    // "per-attribute[:ATTR]" | "reference:ATTR" (explicit totals come from a
    // file and have no inline spelling).
    static ClassTotalsPolicy parse(std::string_view text);
    std::string describe() const;
};

struct ResolvedTotals {
    std::vector<std::int64_t> class_totals;  // n_C
    std::int64_t grand_total = 0;            // N
    // Conditional denominator d_C^(a) per attribute and class.
    std::vector<std::vector<std::int64_t>> denominators;
};

ResolvedTotals resolve_class_totals(const MarginalTableSet& tables,
                                    const ClassTotalsPolicy& policy);

// Additive smoothing pseudo-count, kept as an exact rational so the float
// and exact evaluation paths share one configuration.
struct SmoothingConfig {
    std::int64_t alpha_num = 0;
    std::int64_t alpha_den = 1;

    double alpha() const { return static_cast<double>(alpha_num) / static_cast<double>(alpha_den); }
    bool is_zero() const { return alpha_num == 0; }

    // Accepts "0", "3", "0.25", "1/40".
    static SmoothingConfig parse(std::string_view text);
};

}  // namespace tabnb
