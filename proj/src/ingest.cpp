#include "tabnb/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>

#include "tabnb/error.hpp"

namespace tabnb {

namespace {

std::string trim(std::string_view text) {
    const auto begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    const auto end = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(begin, end - begin + 1));
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

[[noreturn]] void fail_line(std::size_t line_number, const std::string& message) {
    throw InputError("line " + std::to_string(line_number) + ": " + message);
}

std::int64_t parse_count(const std::string& field, std::size_t line_number) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        fail_line(line_number, "count '" + field + "' is not an integer");
    if (value < 0) fail_line(line_number, "negative count " + field);
    return value;
}

}  // namespace

void check_dataset(const RecordDataset& dataset) {
    const auto validation = validate_schema(dataset.schema, dataset.classes);
    if (!validation.ok()) throw InputError("invalid schema: " + validation.violations.front());
    const std::size_t n_attributes = dataset.schema.attributes.size();
    for (const auto& record : dataset.records) {
        if (record.values.size() != n_attributes)
            throw InputError("record does not assign every schema attribute");
        for (std::size_t a = 0; a < n_attributes; ++a) {
            if (record.values[a] >= dataset.schema.attributes[a].values.size())
                throw InputError("record value index out of range for attribute '" +
                                 dataset.schema.attributes[a].name + "'");
        }
        if (record.label >= dataset.classes.size())
            throw InputError("record class index out of range");
    }
}

RecordDataset parse_records(std::istream& in, const ParseRecordsOptions& options) {
    std::string line;
    std::size_t line_number = 0;

    // Header: attribute names plus a final column named "class".
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_number;
        if (blank(line)) continue;
        header = split_csv_line(line);
        break;
    }
    if (header.empty()) throw InputError("no header");
    if (header.size() < 2 || header.back() != "class")
        fail_line(line_number, "header must list attribute names and end with a 'class' column");

    RecordDataset dataset;
    const bool pinned_schema = options.schema.has_value();
    const bool pinned_classes = options.classes.has_value();
    const std::size_t n_attributes = header.size() - 1;

    if (pinned_schema) {
        dataset.schema = *options.schema;
        if (dataset.schema.attributes.size() != n_attributes)
            fail_line(line_number, "header lists " + std::to_string(n_attributes) +
                                       " attributes, supplied schema has " +
                                       std::to_string(dataset.schema.attributes.size()));
        for (std::size_t a = 0; a < n_attributes; ++a) {
            if (header[a] != dataset.schema.attributes[a].name)
                fail_line(line_number, "header attribute '" + header[a] +
                                           "' does not match supplied schema attribute '" +
                                           dataset.schema.attributes[a].name + "'");
        }
    } else {
        for (std::size_t a = 0; a < n_attributes; ++a) {
            if (header[a].empty()) fail_line(line_number, "empty attribute name in header");
            if (header[a] == "class")
                fail_line(line_number, "attribute name 'class' is reserved for the label column");
            dataset.schema.attributes.push_back({header[a], {}});
        }
    }
    if (pinned_classes) dataset.classes = *options.classes;

    while (std::getline(in, line)) {
        ++line_number;
        if (blank(line)) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            fail_line(line_number, "expected " + std::to_string(header.size()) + " fields, got " +
                                       std::to_string(fields.size()));

        RecordDataset::Record record;
        record.values.reserve(n_attributes);
        for (std::size_t a = 0; a < n_attributes; ++a) {
            const std::string& value = fields[a];
            if (value.empty()) fail_line(line_number, "empty value for attribute '" + header[a] + "'");
            auto& attribute = dataset.schema.attributes[a];
            auto index = AttributeSchema::value_index(attribute, value);
            if (!index) {
                if (pinned_schema)
                    fail_line(line_number, "unknown value '" + value + "' for attribute '" +
                                               attribute.name + "'");
                index = attribute.values.size();
                attribute.values.push_back(value);
            }
            record.values.push_back(static_cast<std::uint32_t>(*index));
        }

        const std::string& label = fields.back();
        if (label.empty()) fail_line(line_number, "empty class label");
        auto label_index = dataset.classes.index_of(label);
        if (!label_index) {
            if (pinned_classes) fail_line(line_number, "unknown class label '" + label + "'");
            label_index = dataset.classes.labels.size();
            dataset.classes.labels.push_back(label);
        }
        record.label = static_cast<std::uint32_t>(*label_index);
        dataset.records.push_back(std::move(record));
    }

    if (!pinned_schema) {
        for (const auto& attribute : dataset.schema.attributes) {
            if (attribute.values.empty())
                throw InputError("attribute '" + attribute.name +
                                 "' has no values (no records to infer from)");
        }
    }
    if (!pinned_classes && dataset.classes.labels.empty())
        throw InputError("no records to infer class labels from");

    check_dataset(dataset);
    return dataset;
}

RecordDataset parse_records(std::string_view text, const ParseRecordsOptions& options) {
    std::istringstream in{std::string(text)};
    return parse_records(in, options);
}

MarginalTableSet aggregate(const RecordDataset& dataset) {
    check_dataset(dataset);
    MarginalTableSet tables;
    tables.schema = dataset.schema;
    tables.classes = dataset.classes;
    for (const auto& attribute : dataset.schema.attributes) {
        MarginalTable table;
        table.attribute = attribute.name;
        table.counts.assign(attribute.values.size(),
                            std::vector<std::int64_t>(dataset.classes.size(), 0));
        tables.tables.push_back(std::move(table));
    }
    for (const auto& record : dataset.records) {
        for (std::size_t a = 0; a < record.values.size(); ++a)
            ++tables.tables[a].counts[record.values[a]][record.label];
    }
    return tables;
}

MarginalTableSet parse_tables(std::istream& in) {
    std::string line;
    std::size_t line_number = 0;

    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_number;
        if (blank(line)) continue;
        header = split_csv_line(line);
        break;
    }
    if (header.empty()) throw InputError("no header");
    const std::vector<std::string> expected = {"attribute", "value", "class", "count"};
    if (header != expected)
        fail_line(line_number, "header must be exactly 'attribute,value,class,count'");

    AttributeSchema schema;
    ClassLabelSet classes;
    // Cell values keyed by (attribute index, value index, class index).
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::int64_t> cells;

    while (std::getline(in, line)) {
        ++line_number;
        if (blank(line)) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4)
            fail_line(line_number, "expected 4 fields, got " + std::to_string(fields.size()));
        const std::string& attribute_name = fields[0];
        const std::string& value_name = fields[1];
        const std::string& class_name = fields[2];
        if (attribute_name.empty()) fail_line(line_number, "empty attribute name");
        if (value_name.empty()) fail_line(line_number, "empty value name");
        if (class_name.empty()) fail_line(line_number, "empty class label");
        const std::int64_t count = parse_count(fields[3], line_number);

        auto attr_index = schema.attribute_index(attribute_name);
        if (!attr_index) {
            attr_index = schema.attributes.size();
            schema.attributes.push_back({attribute_name, {}});
        }
        auto& attribute = schema.attributes[*attr_index];
        auto value_index = AttributeSchema::value_index(attribute, value_name);
        if (!value_index) {
            value_index = attribute.values.size();
            attribute.values.push_back(value_name);
        }
        auto class_index = classes.index_of(class_name);
        if (!class_index) {
            class_index = classes.labels.size();
            classes.labels.push_back(class_name);
        }

        const auto key = std::make_tuple(*attr_index, *value_index, *class_index);
        if (!cells.emplace(key, count).second)
            fail_line(line_number, "duplicate cell (" + attribute_name + "," + value_name + "," +
                                       class_name + ")");
    }

    if (schema.attributes.empty()) throw InputError("no data rows");

    MarginalTableSet tables;
    tables.schema = schema;
    tables.classes = classes;
    for (std::size_t a = 0; a < schema.attributes.size(); ++a) {
        MarginalTable table;
        table.attribute = schema.attributes[a].name;
        table.counts.assign(schema.attributes[a].values.size(),
                            std::vector<std::int64_t>(classes.size(), 0));
        tables.tables.push_back(std::move(table));
    }
    for (const auto& [key, count] : cells) {
        const auto [a, v, c] = key;
        tables.tables[a].counts[v][c] = count;
    }
    check_table_set(tables);
    return tables;
}

MarginalTableSet parse_tables(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_tables(in);
}

void write_tables(const MarginalTableSet& tables, std::ostream& out) {
    check_table_set(tables);
    out << "attribute,value,class,count\n";
    for (std::size_t a = 0; a < tables.schema.attributes.size(); ++a) {
        const auto& attribute = tables.schema.attributes[a];
        for (std::size_t v = 0; v < attribute.values.size(); ++v) {
            for (std::size_t c = 0; c < tables.classes.size(); ++c) {
                out << attribute.name << ',' << attribute.values[v] << ','
                    << tables.classes.labels[c] << ',' << tables.tables[a].counts[v][c] << '\n';
            }
        }
    }
}

std::string write_tables(const MarginalTableSet& tables) {
    std::ostringstream out;
    write_tables(tables, out);
    return out.str();
}

ConsistencyReport audit_consistency(const MarginalTableSet& tables) {
    check_table_set(tables);
    const std::size_t n_attributes = tables.schema.attributes.size();
    const std::size_t n_classes = tables.classes.size();

    ConsistencyReport report;
    for (std::size_t a = 0; a < n_attributes; ++a) {
        report.per_class_totals.push_back(tables.column_sums(a));
        report.grand_totals.push_back(
            std::accumulate(report.per_class_totals[a].begin(), report.per_class_totals[a].end(),
                            std::int64_t{0}));
    }

    for (std::size_t c = 0; c < n_classes; ++c) {
        for (std::size_t a = 1; a < n_attributes; ++a) {
            if (report.per_class_totals[a][c] != report.per_class_totals[0][c]) {
                report.inconsistent_classes.push_back(tables.classes.labels[c]);
                break;
            }
        }
    }

    // Modal grand total; ties go to the earliest attribute's total.
    std::int64_t modal = 0;
    std::size_t best_count = 0;
    for (std::size_t a = 0; a < n_attributes; ++a) {
        const std::size_t count = static_cast<std::size_t>(
            std::count(report.grand_totals.begin(), report.grand_totals.end(),
                       report.grand_totals[a]));
        if (count > best_count) {
            best_count = count;
            modal = report.grand_totals[a];
        }
    }
    for (std::size_t a = 0; a < n_attributes; ++a) {
        if (report.grand_totals[a] != modal)
            report.inconsistent_grand.push_back(tables.schema.attributes[a].name);
    }

    report.is_consistent =
        report.inconsistent_classes.empty() && report.inconsistent_grand.empty();
    return report;
}

std::string render_consistency_report(const MarginalTableSet& tables,
                                      const ConsistencyReport& report) {
    std::ostringstream out;
    std::size_t name_width = std::string("attribute").size();
    for (const auto& attribute : tables.schema.attributes)
        name_width = std::max(name_width, attribute.name.size());

    auto pad = [](const std::string& text, std::size_t width) {
        return text + std::string(width > text.size() ? width - text.size() : 0, ' ');
    };

    out << "per-class totals:\n";
    out << "  " << pad("attribute", name_width);
    for (const auto& label : tables.classes.labels) out << "  " << pad(label, 6);
    out << "  grand\n";
    for (std::size_t a = 0; a < tables.schema.attributes.size(); ++a) {
        out << "  " << pad(tables.schema.attributes[a].name, name_width);
        for (std::size_t c = 0; c < tables.classes.size(); ++c)
            out << "  " << pad(std::to_string(report.per_class_totals[a][c]), 6);
        out << "  " << report.grand_totals[a] << '\n';
    }

    out << "inconsistent classes:";
    if (report.inconsistent_classes.empty()) out << " none";
    for (const auto& label : report.inconsistent_classes) out << ' ' << label;
    out << '\n';

    out << "inconsistent grand totals:";
    if (report.inconsistent_grand.empty()) out << " none";
    for (const auto& name : report.inconsistent_grand) {
        const auto index = tables.schema.attribute_index(name);
        out << ' ' << name << " (" << report.grand_totals[*index] << ")";
    }
    out << '\n';

    out << "verdict: " << (report.is_consistent ? "consistent" : "inconsistent") << '\n';
    return out.str();
}

RecordDataset load_records(const std::string& path, const ParseRecordsOptions& options) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open records file '" + path + "'");
    return parse_records(in, options);
}

MarginalTableSet load_tables(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open tables file '" + path + "'");
    return parse_tables(in);
}

}  // namespace tabnb
