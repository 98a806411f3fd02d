#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabnb/model.hpp"

namespace tabnb {

// Maps predicted divisions onto a performer flag and marks profiles whose
// posterior mass on `risk_class` crosses the threshold.
struct OutcomePolicy {
    std::vector<std::string> performer_classes;
    std::string risk_class;
    double risk_threshold = 0.25;
};

// Performer = {I, II}, risk class FAIL at 0.25.
OutcomePolicy default_outcome_policy();
// Throws InputError when labels are unknown or the performer set is empty or
// covers every class.
void check_outcome_policy(const OutcomePolicy& outcome, const ClassLabelSet& classes);

struct GridRow {
    std::vector<std::uint32_t> values;  // value index per schema attribute
    std::size_t predicted = 0;          // class index, meaningful when defined
    double probability = 0.0;           // max of full_posterior when defined
    std::vector<double> full_posterior;
    bool performer = false;
    bool at_risk = false;
    bool tie = false;
    bool defined = false;
};

// Cartesian product of all attribute values; the last attribute varies
// fastest. Length = schema.grid_size().
std::vector<Profile> enumerate_profiles(const AttributeSchema& schema);

// One row per enumerated profile, in enumeration order.
std::vector<GridRow> prediction_grid(const NBModel& model, const OutcomePolicy& outcome);

enum class GridFormat { text, csv, json };
std::optional<GridFormat> parse_grid_format(std::string_view name);

// Deterministic byte output; probabilities carry exactly 6 fractional digits.
std::string render_grid(const AttributeSchema& schema, const ClassLabelSet& classes,
                        const std::vector<GridRow>& rows, GridFormat format);

struct ReferenceRow {
    std::vector<std::uint32_t> values;
    std::string predicted;     // "-" marks an undefined row
    double probability = 0.0;  // NaN when undefined
};

struct ReferenceGrid {
    std::vector<ReferenceRow> rows;
};

// Reads the comma-delimited grid format back; performer/at_risk columns are
// optional and ignored.
ReferenceGrid parse_reference_grid(std::istream& in, const AttributeSchema& schema);
ReferenceGrid parse_reference_grid(std::string_view text, const AttributeSchema& schema);
ReferenceGrid load_reference_grid(const std::string& path, const AttributeSchema& schema);

struct GridDiscrepancy {
    Profile profile;
    std::string computed_label;
    double computed_probability = 0.0;
    std::string reference_label;
    double reference_probability = 0.0;
};

// Compares predicted label and probability per reference profile. Reference
// profiles must form a subset of the computed grid.
std::vector<GridDiscrepancy> diff_grid(const AttributeSchema& schema,
                                       const ClassLabelSet& classes,
                                       const std::vector<GridRow>& rows,
                                       const ReferenceGrid& reference,
                                       double tolerance = 1e-5);

std::string render_diff(const AttributeSchema& schema,
                        const std::vector<GridDiscrepancy>& discrepancies);

// "%.6f" with round-half-even semantics of correctly rounded decimal output.
std::string format_probability(double value);

}  // namespace tabnb
