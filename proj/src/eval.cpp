#include "tabnb/eval.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "tabnb/error.hpp"

namespace tabnb {

std::int64_t ConfusionMatrix::total() const {
    std::int64_t sum = 0;
    for (const auto& row : counts) sum += std::accumulate(row.begin(), row.end(), std::int64_t{0});
    return sum;
}

namespace {

// Maps dataset categories onto model categories; the dataset may use a
// subset of the model's vocabulary (e.g. a held-out split).
struct IndexMap {
    std::vector<std::vector<std::uint32_t>> value_map;  // [attr][dataset value] -> model value
    std::vector<std::uint32_t> label_map;               // dataset class -> model class
};

IndexMap build_index_map(const NBModel& model, const RecordDataset& dataset) {
    const auto& schema = model.schema();
    if (dataset.schema.attributes.size() != schema.attributes.size())
        throw InputError("dataset attribute count does not match the model");

    IndexMap map;
    map.value_map.resize(schema.attributes.size());
    for (std::size_t a = 0; a < schema.attributes.size(); ++a) {
        const auto& dataset_attr = dataset.schema.attributes[a];
        const auto& model_attr = schema.attributes[a];
        if (dataset_attr.name != model_attr.name)
            throw InputError("dataset attribute '" + dataset_attr.name +
                             "' does not match model attribute '" + model_attr.name + "'");
        for (const auto& value : dataset_attr.values) {
            const auto index = AttributeSchema::value_index(model_attr, value);
            if (!index)
                throw InputError("dataset value '" + value + "' for attribute '" +
                                 dataset_attr.name + "' is not in the model schema");
            map.value_map[a].push_back(static_cast<std::uint32_t>(*index));
        }
    }
    for (const auto& label : dataset.classes.labels) {
        const auto index = model.classes().index_of(label);
        if (!index) throw InputError("dataset class '" + label + "' is not a model class");
        map.label_map.push_back(static_cast<std::uint32_t>(*index));
    }
    return map;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

EvalReport evaluate(const NBModel& model, const RecordDataset& dataset) {
    check_dataset(dataset);
    const auto map = build_index_map(model, dataset);
    const std::size_t n_classes = model.classes().size();

    EvalReport report;
    report.confusion.counts.assign(n_classes, std::vector<std::int64_t>(n_classes, 0));

    IndexedProfile profile(model.schema().attributes.size());
    for (const auto& record : dataset.records) {
        for (std::size_t a = 0; a < record.values.size(); ++a)
            profile[a] = map.value_map[a][record.values[a]];
        const auto post = posterior(model, profile);
        if (!post.scores_defined) {
            ++report.confusion.undefined_count;
            continue;
        }
        ++report.confusion.counts[map.label_map[record.label]][post.predicted];
    }

    const std::int64_t total = report.confusion.total();
    if (total > 0) {
        std::int64_t hits = 0;
        for (std::size_t c = 0; c < n_classes; ++c) hits += report.confusion.counts[c][c];
        report.accuracy = static_cast<double>(hits) / static_cast<double>(total);
    }

    report.precision.assign(n_classes, std::nullopt);
    report.recall.assign(n_classes, std::nullopt);
    for (std::size_t c = 0; c < n_classes; ++c) {
        std::int64_t column = 0, row = 0;
        for (std::size_t k = 0; k < n_classes; ++k) {
            column += report.confusion.counts[k][c];
            row += report.confusion.counts[c][k];
        }
        const std::int64_t hit = report.confusion.counts[c][c];
        if (column > 0)
            report.precision[c] = static_cast<double>(hit) / static_cast<double>(column);
        if (row > 0) report.recall[c] = static_cast<double>(hit) / static_cast<double>(row);
    }
    return report;
}

std::string render_metrics(const ClassLabelSet& classes, const EvalReport& report) {
    nlohmann::json doc;
    doc["classes"] = classes.labels;
    doc["confusion"] = report.confusion.counts;
    doc["evaluated"] = report.confusion.total();
    doc["undefined"] = report.confusion.undefined_count;
    doc["accuracy"] = report.accuracy ? nlohmann::json(*report.accuracy) : nlohmann::json();
    nlohmann::json precision, recall;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        precision[classes.labels[c]] =
            report.precision[c] ? nlohmann::json(*report.precision[c]) : nlohmann::json();
        recall[classes.labels[c]] =
            report.recall[c] ? nlohmann::json(*report.recall[c]) : nlohmann::json();
    }
    doc["precision"] = std::move(precision);
    doc["recall"] = std::move(recall);
    return doc.dump(2) + "\n";
}

std::pair<RecordDataset, RecordDataset> split(const RecordDataset& dataset, double fraction,
                                              std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw InputError("split fraction must lie strictly between 0 and 1");
    check_dataset(dataset);

    std::vector<std::size_t> order(dataset.records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Fisher-Yates with a fixed generator so splits reproduce across
    // platforms and standard library versions.
    std::uint64_t state = seed;
    for (std::size_t i = order.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(splitmix64(state) % i);
        std::swap(order[i - 1], order[j]);
    }

    const auto train_size = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(dataset.records.size())));

    RecordDataset train{dataset.schema, dataset.classes, {}};
    RecordDataset test{dataset.schema, dataset.classes, {}};
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto& target = i < train_size ? train : test;
        target.records.push_back(dataset.records[order[i]]);
    }
    return {std::move(train), std::move(test)};
}

}  // namespace tabnb
