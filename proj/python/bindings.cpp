#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tabnb/bundled.hpp"
#include "tabnb/error.hpp"
#include "tabnb/eval.hpp"
#include "tabnb/grid.hpp"
#include "tabnb/ingest.hpp"
#include "tabnb/model.hpp"

namespace py = pybind11;
using namespace tabnb;

namespace {

ClassTotalsPolicy policy_from_args(const std::string& policy,
                                   const std::optional<std::vector<std::int64_t>>& explicit_totals) {
    if (explicit_totals) return ClassTotalsPolicy::make_explicit(*explicit_totals);
    return ClassTotalsPolicy::parse(policy);
}

OutcomePolicy outcome_from_args(const std::vector<std::string>& performer,
                                const std::string& risk_class, double risk_threshold) {
    OutcomePolicy outcome;
    outcome.performer_classes = performer;
    outcome.risk_class = risk_class;
    outcome.risk_threshold = risk_threshold;
    return outcome;
}

py::dict posterior_to_dict(const NBModel& model, const PosteriorResult& result) {
    py::dict per_class;
    for (std::size_t c = 0; c < model.classes().size(); ++c)
        per_class[py::str(model.classes().labels[c])] = result.per_class[c];
    py::dict out;
    out["per_class"] = per_class;
    out["predicted"] = result.scores_defined
                           ? py::object(py::str(model.classes().labels[result.predicted]))
                           : py::object(py::none());
    out["tie"] = result.tie;
    out["defined"] = result.scores_defined;
    return out;
}

py::list grid_to_list(const NBModel& model, const std::vector<GridRow>& rows) {
    py::list out;
    const auto& schema = model.schema();
    for (const auto& row : rows) {
        py::dict entry;
        for (std::size_t a = 0; a < row.values.size(); ++a)
            entry[py::str(schema.attributes[a].name)] =
                schema.attributes[a].values[row.values[a]];
        entry["predicted"] = row.defined
                                 ? py::object(py::str(model.classes().labels[row.predicted]))
                                 : py::object(py::none());
        entry["probability"] = row.defined ? py::object(py::float_(row.probability))
                                           : py::object(py::none());
        py::dict posterior;
        for (std::size_t c = 0; c < model.classes().size(); ++c)
            posterior[py::str(model.classes().labels[c])] = row.full_posterior[c];
        entry["posterior"] = posterior;
        entry["performer"] = row.performer;
        entry["at_risk"] = row.at_risk;
        entry["tie"] = row.tie;
        entry["defined"] = row.defined;
        out.append(entry);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(tabnb, m) {
    m.doc() = "categorical naive Bayes over marginal contingency tables";

    py::register_exception<Error>(m, "TabnbError");

    py::class_<AttributeSchema>(m, "AttributeSchema")
        .def_property_readonly("attributes",
                               [](const AttributeSchema& schema) {
                                   py::list out;
                                   for (const auto& attribute : schema.attributes)
                                       out.append(py::make_tuple(attribute.name, attribute.values));
                                   return out;
                               })
        .def("grid_size", &AttributeSchema::grid_size);

    py::class_<ClassLabelSet>(m, "ClassLabelSet")
        .def_property_readonly("labels",
                               [](const ClassLabelSet& classes) { return classes.labels; });

    py::class_<ConsistencyReport>(m, "ConsistencyReport")
        .def_readonly("per_class_totals", &ConsistencyReport::per_class_totals)
        .def_readonly("grand_totals", &ConsistencyReport::grand_totals)
        .def_readonly("inconsistent_classes", &ConsistencyReport::inconsistent_classes)
        .def_readonly("inconsistent_grand", &ConsistencyReport::inconsistent_grand)
        .def_readonly("is_consistent", &ConsistencyReport::is_consistent);

    py::class_<MarginalTableSet>(m, "MarginalTableSet")
        .def_property_readonly("schema",
                               [](const MarginalTableSet& tables) { return tables.schema; })
        .def_property_readonly("classes",
                               [](const MarginalTableSet& tables) { return tables.classes; })
        .def("counts",
             [](const MarginalTableSet& tables, const std::string& attribute) {
                 const auto index = tables.schema.attribute_index(attribute);
                 if (!index) throw InputError("unknown attribute '" + attribute + "'");
                 return tables.tables[*index].counts;
             },
             py::arg("attribute"))
        .def("column_sums", &MarginalTableSet::column_sums, py::arg("attribute_index"))
        .def("grand_total", &MarginalTableSet::grand_total, py::arg("attribute_index"))
        .def("write", [](const MarginalTableSet& tables) { return write_tables(tables); })
        .def("audit", &audit_consistency)
        .def("render_audit", [](const MarginalTableSet& tables) {
            return render_consistency_report(tables, audit_consistency(tables));
        });

    py::class_<RecordDataset>(m, "RecordDataset")
        .def_property_readonly("schema",
                               [](const RecordDataset& dataset) { return dataset.schema; })
        .def_property_readonly("classes",
                               [](const RecordDataset& dataset) { return dataset.classes; })
        .def("__len__", [](const RecordDataset& dataset) { return dataset.records.size(); });

    py::class_<NBModel>(m, "NBModel")
        .def_property_readonly("schema", &NBModel::schema)
        .def_property_readonly("classes", &NBModel::classes)
        .def_property_readonly("priors",
                               [](const NBModel& model) {
                                   py::dict out;
                                   for (std::size_t c = 0; c < model.classes().size(); ++c)
                                       out[py::str(model.classes().labels[c])] = model.priors()[c];
                                   return out;
                               })
        .def_property_readonly("policy",
                               [](const NBModel& model) { return model.policy().describe(); })
        .def("likelihood",
             [](const NBModel& model, const Profile& profile) {
                 const auto values = likelihood(model, profile);
                 py::dict out;
                 for (std::size_t c = 0; c < model.classes().size(); ++c)
                     out[py::str(model.classes().labels[c])] = values[c];
                 return out;
             },
             py::arg("profile"))
        .def("posterior",
             [](const NBModel& model, const Profile& profile) {
                 return posterior_to_dict(model, posterior(model, profile));
             },
             py::arg("profile"))
        .def("predict",
             [](const NBModel& model, const Profile& profile) -> py::object {
                 const auto result = predict(model, profile);
                 if (!result) return py::none();
                 return py::make_tuple(result->first, result->second);
             },
             py::arg("profile"))
        .def("posterior_exact_decimal",
             [](const NBModel& model, const Profile& profile, std::size_t digits) {
                 const auto result = posterior_exact(model, profile);
                 py::dict out;
                 for (std::size_t c = 0; c < model.classes().size(); ++c)
                     out[py::str(model.classes().labels[c])] =
                         result.per_class[c].to_decimal(digits);
                 return out;
             },
             py::arg("profile"), py::arg("digits") = 12)
        .def("grid",
             [](const NBModel& model, const std::vector<std::string>& performer,
                const std::string& risk_class, double risk_threshold) {
                 const auto rows = prediction_grid(
                     model, outcome_from_args(performer, risk_class, risk_threshold));
                 return grid_to_list(model, rows);
             },
             py::arg("performer") = std::vector<std::string>{"I", "II"},
             py::arg("risk_class") = "FAIL", py::arg("risk_threshold") = 0.25)
        .def("render_grid",
             [](const NBModel& model, const std::string& format,
                const std::vector<std::string>& performer, const std::string& risk_class,
                double risk_threshold) {
                 const auto parsed = parse_grid_format(format);
                 if (!parsed) throw UsageError("unknown grid format '" + format + "'");
                 const auto rows = prediction_grid(
                     model, outcome_from_args(performer, risk_class, risk_threshold));
                 return render_grid(model.schema(), model.classes(), rows, *parsed);
             },
             py::arg("format") = "text",
             py::arg("performer") = std::vector<std::string>{"I", "II"},
             py::arg("risk_class") = "FAIL", py::arg("risk_threshold") = 0.25)
        .def("diff_reference",
             [](const NBModel& model, const std::string& reference_csv, double tolerance) {
                 const auto rows = prediction_grid(model, default_outcome_policy());
                 const auto reference = parse_reference_grid(reference_csv, model.schema());
                 const auto discrepancies =
                     diff_grid(model.schema(), model.classes(), rows, reference, tolerance);
                 py::list out;
                 for (const auto& d : discrepancies) {
                     py::dict entry;
                     entry["profile"] = d.profile;
                     entry["computed"] = py::make_tuple(d.computed_label, d.computed_probability);
                     entry["reference"] =
                         py::make_tuple(d.reference_label, d.reference_probability);
                     out.append(entry);
                 }
                 return out;
             },
             py::arg("reference_csv"), py::arg("tolerance") = 1e-5)
        .def("save", [](const NBModel& model) { return save_model(model); })
        .def("save_file", [](const NBModel& model, const std::string& path) {
            save_model_file(model, path);
        });

    m.def("parse_tables", [](const std::string& text) { return parse_tables(text); },
          py::arg("text"));
    m.def("load_tables", &load_tables, py::arg("path"));
    m.def("parse_records",
          [](const std::string& text) { return parse_records(std::string_view(text)); },
          py::arg("text"));
    m.def("load_records", [](const std::string& path) { return load_records(path); },
          py::arg("path"));
    m.def("aggregate", &aggregate, py::arg("dataset"));
    m.def("validate_schema",
          [](const AttributeSchema& schema, const ClassLabelSet& classes) {
              return validate_schema(schema, classes).violations;
          },
          py::arg("schema"), py::arg("classes"));
    m.def("enumerate_profiles", &enumerate_profiles, py::arg("schema"));

    m.def("fit",
          [](const MarginalTableSet& tables, const std::string& policy, const std::string& alpha,
             const std::optional<std::vector<std::int64_t>>& explicit_totals) {
              return fit(tables, policy_from_args(policy, explicit_totals),
                         SmoothingConfig::parse(alpha));
          },
          py::arg("tables"), py::arg("policy") = "per-attribute", py::arg("alpha") = "0",
          py::arg("explicit_totals") = std::nullopt);
    m.def("load_model", [](const std::string& text) { return load_model(std::string_view(text)); },
          py::arg("text"));
    m.def("load_model_file", &load_model_file, py::arg("path"));

    m.def("evaluate",
          [](const NBModel& model, const RecordDataset& dataset) {
              const auto report = evaluate(model, dataset);
              py::dict out;
              out["accuracy"] = report.accuracy ? py::object(py::float_(*report.accuracy))
                                                : py::object(py::none());
              out["confusion"] = report.confusion.counts;
              out["undefined"] = report.confusion.undefined_count;
              out["evaluated"] = report.confusion.total();
              py::dict precision, recall;
              for (std::size_t c = 0; c < model.classes().size(); ++c) {
                  const auto& label = model.classes().labels[c];
                  precision[py::str(label)] = report.precision[c]
                                                  ? py::object(py::float_(*report.precision[c]))
                                                  : py::object(py::none());
                  recall[py::str(label)] = report.recall[c]
                                               ? py::object(py::float_(*report.recall[c]))
                                               : py::object(py::none());
              }
              out["precision"] = precision;
              out["recall"] = recall;
              return out;
          },
          py::arg("model"), py::arg("dataset"));
    m.def("split", &split, py::arg("dataset"), py::arg("fraction"), py::arg("seed"));

    auto bundled_module = m.def_submodule("bundled", "data of the replicated study");
    bundled_module.def("table1_csv", [] { return std::string(bundled::table1_csv()); });
    bundled_module.def("table2_reference_csv",
                       [] { return std::string(bundled::table2_reference_csv()); });
    bundled_module.def("table1", &bundled::table1);
    bundled_module.def("replication_model", &bundled::replication_model);
}
