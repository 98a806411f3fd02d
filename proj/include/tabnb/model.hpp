#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tabnb/rational.hpp"
#include "tabnb/schema.hpp"

namespace tabnb {

struct PosteriorResult {
    std::vector<double> per_class;  // normalized; all zero when !scores_defined
    std::size_t predicted = 0;      // class index, meaningful when scores_defined
    bool tie = false;               // argmax not unique before the declaration-order tie-break
    bool scores_defined = false;    // false when every class score is exactly zero
};

struct ExactPosterior {
    std::vector<Rational> per_class;
    std::size_t predicted = 0;
    bool tie = false;
    bool scores_defined = false;
};

// Partial profile resolved against a schema: value index per attribute,
// nullopt where the attribute is absent.
using IndexedProfile = std::vector<std::optional<std::uint32_t>>;

// Throws InputError naming any unknown attribute or value.
IndexedProfile resolve_profile(const AttributeSchema& schema, const Profile& profile);

// Fitted categorical naive Bayes model. Immutable after fit; safe to share
// across threads.
class NBModel {
public:
    const AttributeSchema& schema() const { return counts_.schema; }
    const ClassLabelSet& classes() const { return counts_.classes; }
    const std::vector<double>& priors() const { return priors_; }
    // P(value | class) matrix for one attribute, indexed [value][class].
    const std::vector<std::vector<double>>& conditionals(std::size_t attribute) const {
        return conditionals_[attribute];
    }
    const MarginalTableSet& raw_counts() const { return counts_; }
    const ClassTotalsPolicy& policy() const { return policy_; }
    const SmoothingConfig& smoothing() const { return smoothing_; }
    const ResolvedTotals& totals() const { return totals_; }

private:
    friend NBModel fit(const MarginalTableSet&, const ClassTotalsPolicy&, const SmoothingConfig&);

    NBModel() = default;

    MarginalTableSet counts_;
    ClassTotalsPolicy policy_;
    SmoothingConfig smoothing_;
    ResolvedTotals totals_;
    std::vector<double> priors_;
    std::vector<std::vector<std::vector<double>>> conditionals_;  // [attr][value][class]
};

// Priors are n_C / N; conditionals are (count + alpha) / (d_C + alpha * V).
// Throws FitError when a denominator is zero and alpha is zero.
NBModel fit(const MarginalTableSet& tables, const ClassTotalsPolicy& policy,
            const SmoothingConfig& smoothing = {});

// Product of conditionals over the attributes present in the profile; absent
// attributes contribute factor 1. Accumulated in log space; a zero factor
// short-circuits the class to exactly 0.
std::vector<double> likelihood(const NBModel& model, const IndexedProfile& profile);
std::vector<double> likelihood(const NBModel& model, const Profile& profile);

PosteriorResult posterior(const NBModel& model, const IndexedProfile& profile);
PosteriorResult posterior(const NBModel& model, const Profile& profile);

// (label, posterior probability) of the predicted class; nullopt when the
// posterior is undefined (every class score zero).
std::optional<std::pair<std::string, double>> predict(const NBModel& model,
                                                      const Profile& profile);

// Same formulas evaluated in exact rational arithmetic from the raw counts.
ExactPosterior posterior_exact(const NBModel& model, const IndexedProfile& profile);
ExactPosterior posterior_exact(const NBModel& model, const Profile& profile);

// Persistence: one JSON document holding schema, class labels, raw counts,
// policy and alpha. Probabilities are recomputed on load, never serialized.
void save_model(const NBModel& model, std::ostream& out);
std::string save_model(const NBModel& model);
NBModel load_model(std::istream& in);
NBModel load_model(std::string_view text);
void save_model_file(const NBModel& model, const std::string& path);
NBModel load_model_file(const std::string& path);

}  // namespace tabnb
