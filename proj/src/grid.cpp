#include "tabnb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
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

// Walks the cartesian product of attribute values; the last attribute varies
// fastest, matching the published grid's row order.
template <typename Fn>
void for_each_profile(const AttributeSchema& schema, Fn&& fn) {
    const std::size_t n = schema.attributes.size();
    std::vector<std::uint32_t> values(n, 0);
    while (true) {
        fn(values);
        std::size_t level = n;
        while (level > 0) {
            --level;
            if (++values[level] < schema.attributes[level].values.size()) break;
            values[level] = 0;
            if (level == 0) return;
        }
        if (n == 0) return;
    }
}

std::string describe_profile(const AttributeSchema& schema,
                             const std::vector<std::uint32_t>& values) {
    std::string out;
    for (std::size_t a = 0; a < values.size(); ++a) {
        if (a > 0) out += ' ';
        out += schema.attributes[a].name + '=' + schema.attributes[a].values[values[a]];
    }
    return out;
}

std::string json_escape(std::string_view text) {
    std::string out;
    for (const char ch : text) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += ch;
        }
    }
    return out;
}

}  // namespace

std::string format_probability(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6f", value);
    return buffer;
}

OutcomePolicy default_outcome_policy() {
    OutcomePolicy outcome;
    outcome.performer_classes = {"I", "II"};
    outcome.risk_class = "FAIL";
    outcome.risk_threshold = 0.25;
    return outcome;
}

void check_outcome_policy(const OutcomePolicy& outcome, const ClassLabelSet& classes) {
    if (outcome.performer_classes.empty())
        throw InputError("performer class set must not be empty");
    std::vector<bool> seen(classes.size(), false);
    for (const auto& label : outcome.performer_classes) {
        const auto index = classes.index_of(label);
        if (!index) throw InputError("performer class '" + label + "' is not a model class");
        seen[*index] = true;
    }
    if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
        throw InputError("performer class set must not cover every class");
    if (!classes.index_of(outcome.risk_class))
        throw InputError("risk class '" + outcome.risk_class + "' is not a model class");
    if (!(outcome.risk_threshold >= 0.0 && outcome.risk_threshold <= 1.0))
        throw InputError("risk threshold must lie in [0, 1]");
}

std::vector<Profile> enumerate_profiles(const AttributeSchema& schema) {
    std::vector<Profile> profiles;
    profiles.reserve(schema.grid_size());
    for_each_profile(schema, [&](const std::vector<std::uint32_t>& values) {
        Profile profile;
        for (std::size_t a = 0; a < values.size(); ++a)
            profile[schema.attributes[a].name] = schema.attributes[a].values[values[a]];
        profiles.push_back(std::move(profile));
    });
    return profiles;
}

std::vector<GridRow> prediction_grid(const NBModel& model, const OutcomePolicy& outcome) {
    check_outcome_policy(outcome, model.classes());
    const std::size_t risk_index = *model.classes().index_of(outcome.risk_class);
    std::vector<bool> performer_index(model.classes().size(), false);
    for (const auto& label : outcome.performer_classes)
        performer_index[*model.classes().index_of(label)] = true;

    std::vector<GridRow> rows;
    rows.reserve(model.schema().grid_size());
    for_each_profile(model.schema(), [&](const std::vector<std::uint32_t>& values) {
        IndexedProfile profile(values.size());
        for (std::size_t a = 0; a < values.size(); ++a) profile[a] = values[a];
        const auto post = posterior(model, profile);

        GridRow row;
        row.values = values;
        row.full_posterior = post.per_class;
        row.defined = post.scores_defined;
        row.tie = post.tie;
        if (post.scores_defined) {
            row.predicted = post.predicted;
            row.probability = post.per_class[post.predicted];
            row.performer = performer_index[post.predicted];
            row.at_risk = post.per_class[risk_index] >= outcome.risk_threshold;
        }
        rows.push_back(std::move(row));
    });
    return rows;
}

std::optional<GridFormat> parse_grid_format(std::string_view name) {
    if (name == "text") return GridFormat::text;
    if (name == "csv") return GridFormat::csv;
    if (name == "json" || name == "json-like") return GridFormat::json;
    return std::nullopt;
}

namespace {

std::vector<std::string> grid_header(const AttributeSchema& schema) {
    std::vector<std::string> header;
    for (const auto& attribute : schema.attributes) header.push_back(attribute.name);
    header.insert(header.end(), {"predicted", "probability", "performer", "at_risk"});
    return header;
}

std::vector<std::string> grid_cells(const AttributeSchema& schema, const ClassLabelSet& classes,
                                    const GridRow& row) {
    std::vector<std::string> cells;
    for (std::size_t a = 0; a < row.values.size(); ++a)
        cells.push_back(schema.attributes[a].values[row.values[a]]);
    if (row.defined) {
        cells.push_back(classes.labels[row.predicted]);
        cells.push_back(format_probability(row.probability));
    } else {
        cells.push_back("-");
        cells.push_back("-");
    }
    cells.push_back(row.performer ? "true" : "false");
    cells.push_back(row.at_risk ? "true" : "false");
    return cells;
}

std::string render_grid_text(const AttributeSchema& schema, const ClassLabelSet& classes,
                             const std::vector<GridRow>& rows) {
    const auto header = grid_header(schema);
    std::vector<std::size_t> widths(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) widths[i] = header[i].size();
    std::vector<std::vector<std::string>> table;
    for (const auto& row : rows) {
        table.push_back(grid_cells(schema, classes, row));
        for (std::size_t i = 0; i < widths.size(); ++i)
            widths[i] = std::max(widths[i], table.back()[i].size());
    }

    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out << cells[i];
            if (i + 1 < cells.size())
                out << std::string(widths[i] - cells[i].size() + 2, ' ');
        }
        out << '\n';
    };
    emit(header);
    for (const auto& cells : table) emit(cells);
    return out.str();
}

std::string render_grid_csv(const AttributeSchema& schema, const ClassLabelSet& classes,
                            const std::vector<GridRow>& rows) {
    std::ostringstream out;
    const auto header = grid_header(schema);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        const auto cells = grid_cells(schema, classes, row);
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    }
    return out.str();
}

std::string render_grid_json(const AttributeSchema& schema, const ClassLabelSet& classes,
                             const std::vector<GridRow>& rows) {
    std::ostringstream out;
    out << "[\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        out << "  {";
        for (std::size_t a = 0; a < row.values.size(); ++a) {
            out << '"' << json_escape(schema.attributes[a].name) << "\": \""
                << json_escape(schema.attributes[a].values[row.values[a]]) << "\", ";
        }
        if (row.defined) {
            out << "\"predicted\": \"" << json_escape(classes.labels[row.predicted]) << "\", ";
            out << "\"probability\": " << format_probability(row.probability) << ", ";
            out << "\"posterior\": {";
            for (std::size_t c = 0; c < classes.size(); ++c) {
                out << (c ? ", " : "") << '"' << json_escape(classes.labels[c])
                    << "\": " << format_probability(row.full_posterior[c]);
            }
            out << "}, ";
        } else {
            out << "\"predicted\": null, \"probability\": null, \"posterior\": null, ";
        }
        out << "\"performer\": " << (row.performer ? "true" : "false") << ", ";
        out << "\"at_risk\": " << (row.at_risk ? "true" : "false") << ", ";
        out << "\"tie\": " << (row.tie ? "true" : "false") << '}';
        out << (r + 1 < rows.size() ? ",\n" : "\n");
    }
    out << "]\n";
    return out.str();
}

}  // namespace

std::string render_grid(const AttributeSchema& schema, const ClassLabelSet& classes,
                        const std::vector<GridRow>& rows, GridFormat format) {
    switch (format) {
        case GridFormat::text: return render_grid_text(schema, classes, rows);
        case GridFormat::csv: return render_grid_csv(schema, classes, rows);
        case GridFormat::json: return render_grid_json(schema, classes, rows);
    }
    return {};
}

ReferenceGrid parse_reference_grid(std::istream& in, const AttributeSchema& schema) {
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

    const std::size_t n_attributes = schema.attributes.size();
    if (header.size() < n_attributes + 2)
        throw InputError("line " + std::to_string(line_number) +
                         ": grid header needs the attribute columns plus predicted,probability");
    for (std::size_t a = 0; a < n_attributes; ++a) {
        if (header[a] != schema.attributes[a].name)
            throw InputError("line " + std::to_string(line_number) + ": expected attribute column '" +
                             schema.attributes[a].name + "', got '" + header[a] + "'");
    }
    if (header[n_attributes] != "predicted" || header[n_attributes + 1] != "probability")
        throw InputError("line " + std::to_string(line_number) +
                         ": columns after the attributes must start with predicted,probability");

    ReferenceGrid grid;
    while (std::getline(in, line)) {
        ++line_number;
        if (blank(line)) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw InputError("line " + std::to_string(line_number) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));

        ReferenceRow row;
        for (std::size_t a = 0; a < n_attributes; ++a) {
            const auto index = AttributeSchema::value_index(schema.attributes[a], fields[a]);
            if (!index)
                throw InputError("line " + std::to_string(line_number) + ": unknown value '" +
                                 fields[a] + "' for attribute '" + schema.attributes[a].name + "'");
            row.values.push_back(static_cast<std::uint32_t>(*index));
        }
        row.predicted = fields[n_attributes];
        const std::string& prob = fields[n_attributes + 1];
        if (row.predicted == "-" && prob == "-") {
            row.probability = std::nan("");
        } else {
            try {
                std::size_t consumed = 0;
                row.probability = std::stod(prob, &consumed);
                if (consumed != prob.size()) throw std::invalid_argument(prob);
            } catch (const std::exception&) {
                throw InputError("line " + std::to_string(line_number) + ": probability '" + prob +
                                 "' is not a number");
            }
        }
        grid.rows.push_back(std::move(row));
    }
    return grid;
}

ReferenceGrid parse_reference_grid(std::string_view text, const AttributeSchema& schema) {
    std::istringstream in{std::string(text)};
    return parse_reference_grid(in, schema);
}

ReferenceGrid load_reference_grid(const std::string& path, const AttributeSchema& schema) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open reference grid '" + path + "'");
    return parse_reference_grid(in, schema);
}

std::vector<GridDiscrepancy> diff_grid(const AttributeSchema& schema,
                                       const ClassLabelSet& classes,
                                       const std::vector<GridRow>& rows,
                                       const ReferenceGrid& reference, double tolerance) {
    std::map<std::vector<std::uint32_t>, std::size_t> index;
    for (std::size_t r = 0; r < rows.size(); ++r) index[rows[r].values] = r;

    std::vector<GridDiscrepancy> discrepancies;
    for (const auto& ref : reference.rows) {
        const auto found = index.find(ref.values);
        if (found == index.end())
            throw InputError("reference profile (" + describe_profile(schema, ref.values) +
                             ") is not in the computed grid");
        const auto& row = rows[found->second];

        const bool ref_defined = !(ref.predicted == "-");
        bool mismatch = false;
        if (row.defined != ref_defined) {
            mismatch = true;
        } else if (row.defined) {
            const std::string& computed_label = classes.labels[row.predicted];
            mismatch = computed_label != ref.predicted ||
                       std::abs(row.probability - ref.probability) > tolerance;
        }
        if (!mismatch) continue;

        GridDiscrepancy discrepancy;
        for (std::size_t a = 0; a < ref.values.size(); ++a)
            discrepancy.profile[schema.attributes[a].name] =
                schema.attributes[a].values[ref.values[a]];
        discrepancy.computed_label = row.defined ? classes.labels[row.predicted] : "-";
        discrepancy.computed_probability = row.defined ? row.probability : std::nan("");
        discrepancy.reference_label = ref.predicted;
        discrepancy.reference_probability = ref.probability;
        discrepancies.push_back(std::move(discrepancy));
    }
    return discrepancies;
}

std::string render_diff(const AttributeSchema& schema,
                        const std::vector<GridDiscrepancy>& discrepancies) {
    std::ostringstream out;
    out << "discrepancies: " << discrepancies.size() << '\n';
    for (const auto& discrepancy : discrepancies) {
        bool first = true;
        for (const auto& attribute : schema.attributes) {
            const auto found = discrepancy.profile.find(attribute.name);
            if (found == discrepancy.profile.end()) continue;
            out << (first ? "" : " ") << attribute.name << '=' << found->second;
            first = false;
        }
        out << ": predicted " << discrepancy.computed_label << " ("
            << format_probability(discrepancy.computed_probability) << "), reference "
            << discrepancy.reference_label << " ("
            << format_probability(discrepancy.reference_probability) << ")\n";
    }
    return out.str();
}

}  // namespace tabnb
