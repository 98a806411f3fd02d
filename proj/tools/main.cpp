#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tabnb/bundled.hpp"
#include "tabnb/error.hpp"
#include "tabnb/eval.hpp"
#include "tabnb/grid.hpp"
#include "tabnb/ingest.hpp"
#include "tabnb/model.hpp"

namespace {

using namespace tabnb;

std::string format_alpha(const SmoothingConfig& smoothing) {
    if (smoothing.alpha_den == 1) return std::to_string(smoothing.alpha_num);
    return std::to_string(smoothing.alpha_num) + "/" + std::to_string(smoothing.alpha_den);
}

// Explicit totals file: header "class,total", one row per class.
ClassTotalsPolicy parse_explicit_totals(const std::string& path, const ClassLabelSet& classes) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open totals file '" + path + "'");
    std::string line;
    std::size_t line_number = 0;
    std::vector<std::optional<std::int64_t>> totals(classes.size());
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream fields(line);
        std::string label, total;
        if (!std::getline(fields, label, ',') || !std::getline(fields, total))
            throw InputError("line " + std::to_string(line_number) + ": expected 'class,total'");
        auto trim = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
        };
        trim(label);
        trim(total);
        if (!saw_header) {
            if (label != "class" || total != "total")
                throw InputError("line " + std::to_string(line_number) +
                                 ": totals file header must be 'class,total'");
            saw_header = true;
            continue;
        }
        const auto index = classes.index_of(label);
        if (!index)
            throw InputError("line " + std::to_string(line_number) + ": unknown class '" + label +
                             "'");
        if (totals[*index])
            throw InputError("line " + std::to_string(line_number) + ": duplicate class '" + label +
                             "'");
        try {
            totals[*index] = std::stoll(total);
        } catch (const std::exception&) {
            throw InputError("line " + std::to_string(line_number) + ": total '" + total +
                             "' is not an integer");
        }
    }
    if (!saw_header) throw InputError("no header");
    std::vector<std::int64_t> resolved;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (!totals[c]) throw InputError("totals file misses class '" + classes.labels[c] + "'");
        resolved.push_back(*totals[c]);
    }
    return ClassTotalsPolicy::make_explicit(std::move(resolved));
}

struct FitArgs {
    std::string tables_path;
    std::string records_path;
    bool replicate = false;
    std::string policy = "per-attribute";
    bool policy_given = false;
    std::string alpha = "0";
    std::string out_path;
};

struct PredictArgs {
    std::string model_path;
    std::vector<std::string> assignments;
};

struct GridArgs {
    std::string model_path;
    bool replicate = false;
    std::string format = "text";
    std::string performer;
    std::string risk_class;
    double risk_threshold = 0.0;
    bool risk_threshold_given = false;
    std::string diff_path;
    double tolerance = 1e-5;
};

struct AuditArgs {
    std::string tables_path;
};

struct EvalArgs {
    std::string model_path;
    std::string records_path;
};

MarginalTableSet load_fit_tables(const FitArgs& args) {
    const int sources = int(!args.tables_path.empty()) + int(!args.records_path.empty()) +
                        int(args.replicate);
    if (sources != 1)
        throw UsageError("fit needs exactly one of --tables, --records or --replicate-paper");
    if (args.replicate) return bundled::table1();
    if (!args.tables_path.empty()) return load_tables(args.tables_path);
    return aggregate(load_records(args.records_path));
}

int run_fit(const FitArgs& args) {
    if (args.out_path.empty()) throw UsageError("fit needs --out MODEL");
    const MarginalTableSet tables = load_fit_tables(args);

    ClassTotalsPolicy policy;
    SmoothingConfig smoothing;
    if (args.replicate) {
        if (args.policy_given || args.alpha != "0")
            throw UsageError("--replicate-paper pins --policy reference:stream and --alpha 0");
        policy = bundled::replication_policy();
    } else {
        smoothing = SmoothingConfig::parse(args.alpha);
        if (args.policy.rfind("explicit:", 0) == 0)
            policy = parse_explicit_totals(args.policy.substr(9), tables.classes);
        else
            policy = ClassTotalsPolicy::parse(args.policy);
    }

    const NBModel model = fit(tables, policy, smoothing);
    save_model_file(model, args.out_path);

    const auto report = audit_consistency(tables);
    if (!report.is_consistent)
        std::cerr << "note: marginal totals are inconsistent across attributes; "
                     "policy '" << policy.describe() << "' resolved them (run audit for details)\n";

    std::cout << "fitted " << tables.schema.attributes.size() << " attributes, "
              << tables.classes.size() << " classes, N=" << model.totals().grand_total << '\n';
    std::cout << "policy: " << policy.describe() << '\n';
    std::cout << "alpha: " << format_alpha(model.smoothing()) << '\n';
    std::cout << "priors:";
    for (std::size_t c = 0; c < tables.classes.size(); ++c)
        std::cout << ' ' << tables.classes.labels[c] << '='
                  << format_probability(model.priors()[c]);
    std::cout << '\n';
    std::cout << "model written to " << args.out_path << '\n';
    return 0;
}

int run_predict(const PredictArgs& args) {
    if (args.model_path.empty()) throw UsageError("predict needs --model MODEL");
    const NBModel model = load_model_file(args.model_path);

    Profile profile;
    for (const auto& assignment : args.assignments) {
        const auto equals = assignment.find('=');
        if (equals == std::string::npos || equals == 0)
            throw UsageError("--set expects ATTR=VALUE, got '" + assignment + "'");
        const std::string attribute = assignment.substr(0, equals);
        const std::string value = assignment.substr(equals + 1);
        if (profile.count(attribute))
            throw UsageError("duplicate --set for attribute '" + attribute + "'");
        profile[attribute] = value;
    }

    const auto result = posterior(model, profile);
    if (!result.scores_defined)
        throw Error(ErrorCategory::undefined,
                    "every class score is zero for this profile; no posterior is defined");

    std::size_t width = 0;
    for (const auto& label : model.classes().labels) width = std::max(width, label.size());
    for (std::size_t c = 0; c < model.classes().size(); ++c) {
        const std::string& label = model.classes().labels[c];
        std::cout << label << std::string(width - label.size() + 2, ' ')
                  << format_probability(result.per_class[c]) << '\n';
    }
    std::cout << "predicted: " << model.classes().labels[result.predicted] << '\n';
    std::cout << "probability: " << format_probability(result.per_class[result.predicted]) << '\n';
    std::cout << "tie: " << (result.tie ? "yes" : "no") << '\n';
    return 0;
}

int run_grid(const GridArgs& args) {
    if (args.model_path.empty() == !args.replicate)
        throw UsageError("grid needs exactly one of --model or --replicate-paper");
    const NBModel model =
        args.replicate ? bundled::replication_model() : load_model_file(args.model_path);

    OutcomePolicy outcome = default_outcome_policy();
    if (!args.performer.empty()) {
        outcome.performer_classes.clear();
        std::istringstream list(args.performer);
        std::string label;
        while (std::getline(list, label, ','))
            if (!label.empty()) outcome.performer_classes.push_back(label);
    }
    if (!args.risk_class.empty()) outcome.risk_class = args.risk_class;
    if (args.risk_threshold_given) outcome.risk_threshold = args.risk_threshold;

    const auto rows = prediction_grid(model, outcome);

    if (!args.diff_path.empty()) {
        const auto reference = load_reference_grid(args.diff_path, model.schema());
        const auto discrepancies =
            diff_grid(model.schema(), model.classes(), rows, reference, args.tolerance);
        std::cout << render_diff(model.schema(), discrepancies);
        return 0;
    }

    const auto format = parse_grid_format(args.format);
    if (!format)
        throw UsageError("unknown grid format '" + args.format + "' (text, csv or json-like)");
    std::cout << render_grid(model.schema(), model.classes(), rows, *format);
    return 0;
}

int run_audit(const AuditArgs& args) {
    if (args.tables_path.empty()) throw UsageError("audit needs --tables FILE");
    const MarginalTableSet tables = load_tables(args.tables_path);
    const auto report = audit_consistency(tables);
    std::cout << render_consistency_report(tables, report);
    if (!report.is_consistent) {
        std::cerr << "error:audit: marginal totals are inconsistent\n";
        return static_cast<int>(ErrorCategory::audit);
    }
    return 0;
}

int run_eval(const EvalArgs& args) {
    if (args.model_path.empty()) throw UsageError("eval needs --model MODEL");
    if (args.records_path.empty()) throw UsageError("eval needs --records FILE");
    const NBModel model = load_model_file(args.model_path);
    const RecordDataset dataset = load_records(args.records_path);
    const auto report = evaluate(model, dataset);
    std::cout << render_metrics(model.classes(), report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"categorical naive Bayes over marginal contingency tables"};
    app.require_subcommand(1);

    FitArgs fit_args;
    auto* fit_cmd = app.add_subcommand("fit", "fit a model from tables or records");
    fit_cmd->add_option("--tables", fit_args.tables_path, "counts file (attribute,value,class,count)");
    fit_cmd->add_option("--records", fit_args.records_path, "record file (attributes...,class)");
    fit_cmd->add_flag("--replicate-paper", fit_args.replicate,
                      "use the bundled study counts with policy reference:stream, alpha 0");
    fit_cmd->add_option("--policy", fit_args.policy,
                        "per-attribute[:PRIOR_ATTR] | reference:ATTR | explicit:FILE");
    fit_cmd->add_option("--alpha", fit_args.alpha, "additive smoothing pseudo-count (default 0)");
    fit_cmd->add_option("--out", fit_args.out_path, "model output path");

    PredictArgs predict_args;
    auto* predict_cmd = app.add_subcommand("predict", "posterior for one profile");
    predict_cmd->add_option("--model", predict_args.model_path, "fitted model file");
    predict_cmd->add_option("--set", predict_args.assignments,
                            "ATTR=VALUE assignment (repeatable; partial profiles allowed)");

    GridArgs grid_args;
    auto* grid_cmd = app.add_subcommand("grid", "prediction grid over every full profile");
    grid_cmd->add_option("--model", grid_args.model_path, "fitted model file");
    grid_cmd->add_flag("--replicate-paper", grid_args.replicate,
                       "grid of the bundled study model (reference:stream, alpha 0)");
    grid_cmd->add_option("--format", grid_args.format, "text | csv | json-like");
    grid_cmd->add_option("--performer", grid_args.performer,
                         "comma-separated performer classes (default I,II)");
    grid_cmd->add_option("--risk-class", grid_args.risk_class, "risk class (default FAIL)");
    grid_cmd->add_option("--risk-threshold", grid_args.risk_threshold,
                         "risk posterior threshold (default 0.25)");
    grid_cmd->add_option("--diff", grid_args.diff_path, "reference grid to compare against");
    grid_cmd->add_option("--tolerance", grid_args.tolerance,
                         "probability tolerance for --diff (default 1e-5)");

    AuditArgs audit_args;
    auto* audit_cmd = app.add_subcommand("audit", "check marginal consistency of a table file");
    audit_cmd->add_option("--tables", audit_args.tables_path, "counts file");

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "confusion matrix and metrics on labeled records");
    eval_cmd->add_option("--model", eval_args.model_path, "fitted model file");
    eval_cmd->add_option("--records", eval_args.records_path, "labeled record file");

    try {
        app.parse(argc, argv);
        fit_args.policy_given = fit_cmd->count("--policy") > 0;
        grid_args.risk_threshold_given = grid_cmd->count("--risk-threshold") > 0;

        if (app.got_subcommand(fit_cmd)) return run_fit(fit_args);
        if (app.got_subcommand(predict_cmd)) return run_predict(predict_args);
        if (app.got_subcommand(grid_cmd)) return run_grid(grid_args);
        if (app.got_subcommand(audit_cmd)) return run_audit(audit_args);
        if (app.got_subcommand(eval_cmd)) return run_eval(eval_args);
        throw UsageError("no subcommand given");
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error:usage: " << e.what() << '\n';
        return static_cast<int>(tabnb::ErrorCategory::usage);
    } catch (const tabnb::Error& e) {
        std::cerr << "error:" << category_name(e.category()) << ": " << e.what() << '\n';
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error:internal: " << e.what() << '\n';
        return 70;
    }
}
