#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tabnb/ingest.hpp"
#include "tabnb/model.hpp"

namespace tabnb {

struct ConfusionMatrix {
    std::vector<std::vector<std::int64_t>> counts;  // [true class][predicted class]
    std::int64_t undefined_count = 0;               // records with undefined posterior

    std::int64_t total() const;  // classified records, undefined excluded
};

struct EvalReport {
    ConfusionMatrix confusion;
    std::optional<double> accuracy;                 // empty when nothing was classified
    std::vector<std::optional<double>> precision;   // per class; empty = 0/0
    std::vector<std::optional<double>> recall;
};

// Throws InputError when the dataset's attributes, values or labels do not
// fit the model's schema.
EvalReport evaluate(const NBModel& model, const RecordDataset& dataset);

// JSON metrics document (same object-notation family as model persistence).
std::string render_metrics(const ClassLabelSet& classes, const EvalReport& report);

// Deterministic seeded shuffle; train gets ceil(n * fraction) records, test
// the remainder. Union equals the input multiset.
std::pair<RecordDataset, RecordDataset> split(const RecordDataset& dataset, double fraction,
                                              std::uint64_t seed);

}  // namespace tabnb
