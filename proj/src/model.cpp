#include "tabnb/model.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tabnb/error.hpp"

namespace tabnb {

IndexedProfile resolve_profile(const AttributeSchema& schema, const Profile& profile) {
    IndexedProfile indexed(schema.attributes.size());
    for (const auto& [name, value] : profile) {
        const auto attr = schema.attribute_index(name);
        if (!attr) throw InputError("unknown attribute '" + name + "'");
        const auto index = AttributeSchema::value_index(schema.attributes[*attr], value);
        if (!index)
            throw InputError("unknown value '" + value + "' for attribute '" + name + "'");
        indexed[*attr] = static_cast<std::uint32_t>(*index);
    }
    return indexed;
}

NBModel fit(const MarginalTableSet& tables, const ClassTotalsPolicy& policy,
            const SmoothingConfig& smoothing) {
    if (smoothing.alpha_num < 0 || smoothing.alpha_den <= 0)
        throw FitError("alpha must be a non-negative rational");

    NBModel model;
    model.counts_ = tables;
    model.policy_ = policy;
    model.smoothing_ = smoothing;
    model.totals_ = resolve_class_totals(tables, policy);

    const std::size_t n_classes = tables.classes.size();
    const double alpha = smoothing.alpha();

    if (model.totals_.grand_total <= 0)
        throw FitError("grand total is zero; no counts to estimate priors from");

    model.priors_.resize(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
        model.priors_[c] = static_cast<double>(model.totals_.class_totals[c]) /
                           static_cast<double>(model.totals_.grand_total);
    }

    model.conditionals_.resize(tables.schema.attributes.size());
    for (std::size_t a = 0; a < tables.schema.attributes.size(); ++a) {
        const auto& attribute = tables.schema.attributes[a];
        const double value_count = static_cast<double>(attribute.values.size());
        model.conditionals_[a].assign(attribute.values.size(), std::vector<double>(n_classes));
        for (std::size_t c = 0; c < n_classes; ++c) {
            const std::int64_t d = model.totals_.denominators[a][c];
            const double denom = static_cast<double>(d) + alpha * value_count;
            if (denom <= 0.0)
                throw FitError("zero denominator for class '" + tables.classes.labels[c] +
                               "' in attribute '" + attribute.name + "' (alpha = 0)");
            for (std::size_t v = 0; v < attribute.values.size(); ++v) {
                const double count = static_cast<double>(tables.tables[a].counts[v][c]);
                model.conditionals_[a][v][c] = (count + alpha) / denom;
            }
        }
    }
    return model;
}

namespace {

void check_profile_shape(const NBModel& model, const IndexedProfile& profile) {
    if (profile.size() != model.schema().attributes.size())
        throw InputError("profile does not match the model's attribute count");
    for (std::size_t a = 0; a < profile.size(); ++a) {
        if (profile[a] && *profile[a] >= model.schema().attributes[a].values.size())
            throw InputError("profile value index out of range for attribute '" +
                             model.schema().attributes[a].name + "'");
    }
}

}  // namespace

std::vector<double> likelihood(const NBModel& model, const IndexedProfile& profile) {
    check_profile_shape(model, profile);
    const std::size_t n_classes = model.classes().size();
    std::vector<double> result(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
        double log_sum = 0.0;
        bool zero = false;
        for (std::size_t a = 0; a < profile.size(); ++a) {
            if (!profile[a]) continue;  // absent attribute contributes factor 1
            const double p = model.conditionals(a)[*profile[a]][c];
            if (p == 0.0) {
                zero = true;
                break;
            }
            log_sum += std::log(p);
        }
        result[c] = zero ? 0.0 : std::exp(log_sum);
    }
    return result;
}

std::vector<double> likelihood(const NBModel& model, const Profile& profile) {
    return likelihood(model, resolve_profile(model.schema(), profile));
}

PosteriorResult posterior(const NBModel& model, const IndexedProfile& profile) {
    const auto scores_base = likelihood(model, profile);
    const std::size_t n_classes = model.classes().size();

    PosteriorResult result;
    result.per_class.assign(n_classes, 0.0);

    std::vector<double> scores(n_classes);
    double sum = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        scores[c] = model.priors()[c] * scores_base[c];
        sum += scores[c];
    }
    if (sum <= 0.0) return result;  // scores_defined stays false

    result.scores_defined = true;
    for (std::size_t c = 0; c < n_classes; ++c) result.per_class[c] = scores[c] / sum;

    // Argmax over the unnormalized scores, first declared class on ties.
    std::size_t best = 0;
    for (std::size_t c = 1; c < n_classes; ++c) {
        if (scores[c] > scores[best]) best = c;
    }
    std::size_t max_count = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (scores[c] == scores[best]) ++max_count;
    }
    result.predicted = best;
    result.tie = max_count > 1;
    return result;
}

PosteriorResult posterior(const NBModel& model, const Profile& profile) {
    return posterior(model, resolve_profile(model.schema(), profile));
}

std::optional<std::pair<std::string, double>> predict(const NBModel& model,
                                                      const Profile& profile) {
    const auto result = posterior(model, profile);
    if (!result.scores_defined) return std::nullopt;
    return std::make_pair(model.classes().labels[result.predicted],
                          result.per_class[result.predicted]);
}

ExactPosterior posterior_exact(const NBModel& model, const IndexedProfile& profile) {
    check_profile_shape(model, profile);
    const std::size_t n_classes = model.classes().size();
    const auto& tables = model.raw_counts();
    const auto& totals = model.totals();
    const BigUint alpha_num(static_cast<std::uint64_t>(model.smoothing().alpha_num));
    const BigUint alpha_den(static_cast<std::uint64_t>(model.smoothing().alpha_den));

    ExactPosterior result;
    result.per_class.assign(n_classes, Rational());

    std::vector<Rational> scores(n_classes);
    Rational sum;
    for (std::size_t c = 0; c < n_classes; ++c) {
        Rational score(BigUint(static_cast<std::uint64_t>(totals.class_totals[c])),
                       BigUint(static_cast<std::uint64_t>(totals.grand_total)));
        for (std::size_t a = 0; a < profile.size(); ++a) {
            if (!profile[a]) continue;
            const std::uint64_t count =
                static_cast<std::uint64_t>(tables.tables[a].counts[*profile[a]][c]);
            const std::uint64_t d = static_cast<std::uint64_t>(totals.denominators[a][c]);
            const std::uint64_t values =
                static_cast<std::uint64_t>(tables.schema.attributes[a].values.size());
            // (count * alpha_den + alpha_num) / (d * alpha_den + alpha_num * values)
            BigUint num = BigUint(count) * alpha_den + alpha_num;
            BigUint den = BigUint(d) * alpha_den + alpha_num * BigUint(values);
            score = score * Rational(std::move(num), std::move(den));
        }
        sum = sum + score;
        scores[c] = std::move(score);
    }
    if (sum.is_zero()) return result;

    result.scores_defined = true;
    for (std::size_t c = 0; c < n_classes; ++c) result.per_class[c] = scores[c] / sum;

    std::size_t best = 0;
    for (std::size_t c = 1; c < n_classes; ++c) {
        if (scores[c].compare(scores[best]) > 0) best = c;
    }
    std::size_t max_count = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (scores[c] == scores[best]) ++max_count;
    }
    result.predicted = best;
    result.tie = max_count > 1;
    return result;
}

ExactPosterior posterior_exact(const NBModel& model, const Profile& profile) {
    return posterior_exact(model, resolve_profile(model.schema(), profile));
}

namespace {

constexpr const char* kModelFormat = "tabnb-model";
constexpr int kModelVersion = 1;

}  // namespace

void save_model(const NBModel& model, std::ostream& out) {
    nlohmann::json doc;
    doc["format"] = kModelFormat;
    doc["version"] = kModelVersion;

    nlohmann::json schema = nlohmann::json::array();
    for (const auto& attribute : model.schema().attributes)
        schema.push_back({{"name", attribute.name}, {"values", attribute.values}});
    doc["schema"] = std::move(schema);
    doc["classes"] = model.classes().labels;

    nlohmann::json counts = nlohmann::json::array();
    for (const auto& table : model.raw_counts().tables) counts.push_back(table.counts);
    doc["counts"] = std::move(counts);

    nlohmann::json policy;
    switch (model.policy().kind) {
        case ClassTotalsPolicy::Kind::per_attribute:
            policy["kind"] = "per-attribute";
            policy["attribute"] = model.policy().attribute;
            break;
        case ClassTotalsPolicy::Kind::reference:
            policy["kind"] = "reference";
            policy["attribute"] = model.policy().attribute;
            break;
        case ClassTotalsPolicy::Kind::explicit_totals:
            policy["kind"] = "explicit";
            policy["totals"] = model.policy().totals;
            policy["grand_total"] = model.policy().grand_total;
            break;
    }
    doc["policy"] = std::move(policy);
    doc["alpha"] = {{"num", model.smoothing().alpha_num}, {"den", model.smoothing().alpha_den}};

    out << doc.dump(2) << '\n';
}

std::string save_model(const NBModel& model) {
    std::ostringstream out;
    save_model(model, out);
    return out.str();
}

NBModel load_model(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("model file is not valid JSON: ") + e.what());
    }

    try {
        if (doc.at("format").get<std::string>() != kModelFormat)
            throw InputError("not a model file (unexpected format tag)");
        if (doc.at("version").get<int>() != kModelVersion)
            throw InputError("unsupported model file version");

        MarginalTableSet tables;
        for (const auto& entry : doc.at("schema")) {
            AttributeSchema::Attribute attribute;
            attribute.name = entry.at("name").get<std::string>();
            attribute.values = entry.at("values").get<std::vector<std::string>>();
            tables.schema.attributes.push_back(std::move(attribute));
        }
        tables.classes.labels = doc.at("classes").get<std::vector<std::string>>();
        const auto& counts = doc.at("counts");
        for (std::size_t a = 0; a < tables.schema.attributes.size(); ++a) {
            MarginalTable table;
            table.attribute = tables.schema.attributes[a].name;
            table.counts = counts.at(a).get<std::vector<std::vector<std::int64_t>>>();
            tables.tables.push_back(std::move(table));
        }

        ClassTotalsPolicy policy;
        const auto& policy_doc = doc.at("policy");
        const auto kind = policy_doc.at("kind").get<std::string>();
        if (kind == "per-attribute") {
            policy = ClassTotalsPolicy::make_per_attribute(
                policy_doc.at("attribute").get<std::string>());
        } else if (kind == "reference") {
            policy =
                ClassTotalsPolicy::make_reference(policy_doc.at("attribute").get<std::string>());
        } else if (kind == "explicit") {
            policy = ClassTotalsPolicy::make_explicit(
                policy_doc.at("totals").get<std::vector<std::int64_t>>());
            policy.grand_total = policy_doc.at("grand_total").get<std::int64_t>();
        } else {
            throw InputError("unknown policy kind '" + kind + "' in model file");
        }

        SmoothingConfig smoothing;
        smoothing.alpha_num = doc.at("alpha").at("num").get<std::int64_t>();
        smoothing.alpha_den = doc.at("alpha").at("den").get<std::int64_t>();

        return fit(tables, policy, smoothing);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed model file: ") + e.what());
    }
}

NBModel load_model(std::string_view text) {
    std::istringstream in{std::string(text)};
    return load_model(in);
}

void save_model_file(const NBModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write model file '" + path + "'");
    save_model(model, out);
}

NBModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open model file '" + path + "'");
    return load_model(in);
}

}  // namespace tabnb
