#pragma once

// Deterministic random generators for property-style tests. Everything is
// seeded explicitly so failures reproduce.

#include <random>
#include <string>
#include <vector>

#include "tabnb/ingest.hpp"
#include "tabnb/schema.hpp"

namespace testgen {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline tabnb::AttributeSchema random_schema(Rng& rng, std::size_t max_attributes = 4,
                                            std::size_t max_values = 5) {
    tabnb::AttributeSchema schema;
    const std::size_t n_attributes = pick(rng, 1, max_attributes);
    for (std::size_t a = 0; a < n_attributes; ++a) {
        tabnb::AttributeSchema::Attribute attribute;
        attribute.name = "a" + std::to_string(a);
        const std::size_t n_values = pick(rng, 1, max_values);
        for (std::size_t v = 0; v < n_values; ++v)
            attribute.values.push_back("a" + std::to_string(a) + "v" + std::to_string(v));
        schema.attributes.push_back(std::move(attribute));
    }
    return schema;
}

inline tabnb::ClassLabelSet random_classes(Rng& rng, std::size_t max_classes = 5) {
    tabnb::ClassLabelSet classes;
    const std::size_t n_classes = pick(rng, 1, max_classes);
    for (std::size_t c = 0; c < n_classes; ++c) classes.labels.push_back("c" + std::to_string(c));
    return classes;
}

// Random count tables with every per-class column sum positive, so a fit
// with alpha = 0 under any policy has nonzero denominators.
inline tabnb::MarginalTableSet random_tables(Rng& rng, std::int64_t max_count = 50) {
    tabnb::MarginalTableSet tables;
    tables.schema = random_schema(rng);
    tables.classes = random_classes(rng);
    for (const auto& attribute : tables.schema.attributes) {
        tabnb::MarginalTable table;
        table.attribute = attribute.name;
        table.counts.assign(attribute.values.size(),
                            std::vector<std::int64_t>(tables.classes.size(), 0));
        for (auto& row : table.counts) {
            for (auto& cell : row)
                cell = static_cast<std::int64_t>(
                    pick(rng, 0, static_cast<std::size_t>(max_count)));
        }
        for (std::size_t c = 0; c < tables.classes.size(); ++c) {
            std::int64_t sum = 0;
            for (const auto& row : table.counts) sum += row[c];
            if (sum == 0) table.counts[0][c] = 1;
        }
        tables.tables.push_back(std::move(table));
    }
    return tables;
}

inline tabnb::RecordDataset random_dataset(Rng& rng, std::size_t max_records = 200) {
    tabnb::RecordDataset dataset;
    dataset.schema = random_schema(rng);
    dataset.classes = random_classes(rng);
    const std::size_t n_records = pick(rng, 1, max_records);
    for (std::size_t r = 0; r < n_records; ++r) {
        tabnb::RecordDataset::Record record;
        for (const auto& attribute : dataset.schema.attributes)
            record.values.push_back(
                static_cast<std::uint32_t>(pick(rng, 0, attribute.values.size() - 1)));
        record.label = static_cast<std::uint32_t>(pick(rng, 0, dataset.classes.size() - 1));
        dataset.records.push_back(std::move(record));
    }
    return dataset;
}

// Full profile over a schema as value indices.
inline std::vector<std::uint32_t> random_full_profile(Rng& rng,
                                                      const tabnb::AttributeSchema& schema) {
    std::vector<std::uint32_t> values;
    for (const auto& attribute : schema.attributes)
        values.push_back(static_cast<std::uint32_t>(pick(rng, 0, attribute.values.size() - 1)));
    return values;
}

}  // namespace testgen
