#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabnb/schema.hpp"

namespace tabnb {

// Record-level dataset: every record assigns every schema attribute.
struct RecordDataset {
    AttributeSchema schema;
    ClassLabelSet classes;

    struct Record {
        std::vector<std::uint32_t> values;  // value index per schema attribute
        std::uint32_t label = 0;            // class index
    };
    std::vector<Record> records;
};

void check_dataset(const RecordDataset& dataset);  // throws InputError

struct ParseRecordsOptions {
    // When supplied, pins the vocabulary: unseen values/labels become parse
    // errors instead of extending the inferred schema.
    std::optional<AttributeSchema> schema;
    std::optional<ClassLabelSet> classes;
};

// Record file: comma-delimited, header of attribute names plus a final
// column named "class", one record per row. Category order is inferred from
// first occurrence unless an explicit schema is supplied.
RecordDataset parse_records(std::istream& in, const ParseRecordsOptions& options = {});
RecordDataset parse_records(std::string_view text, const ParseRecordsOptions& options = {});

MarginalTableSet aggregate(const RecordDataset& dataset);

// Table file: header "attribute,value,class,count", rows in any order,
// duplicate (attribute,value,class) keys forbidden, missing cells are zero.
MarginalTableSet parse_tables(std::istream& in);
MarginalTableSet parse_tables(std::string_view text);

// Emits rows in (attribute, value, class) declaration order; parse_tables of
// the output reproduces the input exactly.
void write_tables(const MarginalTableSet& tables, std::ostream& out);
std::string write_tables(const MarginalTableSet& tables);

struct ConsistencyReport {
    std::vector<std::vector<std::int64_t>> per_class_totals;  // [attribute][class]
    std::vector<std::int64_t> grand_totals;                   // [attribute]
    std::vector<std::string> inconsistent_classes;            // class label order
    std::vector<std::string> inconsistent_grand;              // attribute names
    bool is_consistent = true;
};

ConsistencyReport audit_consistency(const MarginalTableSet& tables);
std::string render_consistency_report(const MarginalTableSet& tables,
                                      const ConsistencyReport& report);

// File helpers used by the CLI and the bindings.
RecordDataset load_records(const std::string& path, const ParseRecordsOptions& options = {});
MarginalTableSet load_tables(const std::string& path);

}  // namespace tabnb
