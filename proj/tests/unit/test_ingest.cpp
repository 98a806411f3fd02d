#include <doctest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "generators.hpp"
#include "tabnb/bundled.hpp"
#include "tabnb/error.hpp"
#include "tabnb/ingest.hpp"

using namespace tabnb;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

bool message_contains(const std::exception& e, std::string_view needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("parse_records infers schema and classes in first-occurrence order") {
    const std::string text =
        "medium,caste,stream,class\n"
        "ENGLISH,GEN,BA(NC),I\n"
        "HINDI,OBC,BCom,FAIL\n";
    const auto dataset = parse_records(text);
    CHECK(dataset.records.size() == 2);
    CHECK(dataset.schema.attributes.size() == 3);
    CHECK(dataset.schema.attributes[0].values == std::vector<std::string>{"ENGLISH", "HINDI"});
    CHECK(dataset.schema.attributes[1].values == std::vector<std::string>{"GEN", "OBC"});
    CHECK(dataset.schema.attributes[2].values == std::vector<std::string>{"BA(NC)", "BCom"});
    CHECK(dataset.classes.labels == std::vector<std::string>{"I", "FAIL"});
    CHECK(dataset.records[1].values == std::vector<std::uint32_t>{1, 1, 1});
    CHECK(dataset.records[1].label == 1);
}

TEST_CASE("parse_records error paths name the line") {
    SUBCASE("empty input") {
        CHECK_THROWS_WITH_AS(parse_records(std::string_view("")), "no header", InputError);
    }
    SUBCASE("wrong arity") {
        try {
            parse_records(std::string_view("a,b,c,class\n1,2,3,x\n1,2,3\n"));
            FAIL("expected InputError");
        } catch (const InputError& e) {
            CHECK(message_contains(e, "line 3"));
            CHECK(message_contains(e, "got 3"));
        }
    }
    SUBCASE("value conflicting with a supplied schema") {
        ParseRecordsOptions options;
        AttributeSchema schema;
        schema.attributes.push_back({"medium", {"ENGLISH", "HINDI"}});
        options.schema = schema;
        try {
            parse_records(std::string_view("medium,class\nFRENCH,I\n"), options);
            FAIL("expected InputError");
        } catch (const InputError& e) {
            CHECK(message_contains(e, "line 2"));
            CHECK(message_contains(e, "FRENCH"));
        }
    }
    SUBCASE("header must end with class") {
        CHECK_THROWS_AS(parse_records(std::string_view("a,b\n1,2\n")), InputError);
    }
}

TEST_CASE("aggregate counts the two-record dataset") {
    const auto dataset = parse_records(std::string_view("medium,caste,stream,class\n"
                                                        "ENGLISH,GEN,BA(NC),I\n"
                                                        "HINDI,OBC,BCom,FAIL\n"));
    const auto tables = aggregate(dataset);
    for (std::size_t a = 0; a < tables.tables.size(); ++a) {
        CHECK(tables.grand_total(a) == 2);
        std::int64_t ones = 0;
        for (const auto& row : tables.tables[a].counts)
            for (const auto cell : row) {
                CHECK((cell == 0 || cell == 1));
                ones += cell;
            }
        CHECK(ones == 2);
    }
    CHECK(tables.tables[0].counts[0][0] == 1);  // ENGLISH x I
    CHECK(tables.tables[0].counts[1][1] == 1);  // HINDI x FAIL
}

TEST_CASE("aggregate of an empty record list keeps all-zero tables") {
    RecordDataset dataset;
    dataset.schema.attributes.push_back({"a", {"x", "y"}});
    dataset.classes.labels = {"c"};
    const auto tables = aggregate(dataset);
    CHECK(tables.tables[0].counts == std::vector<std::vector<std::int64_t>>{{0}, {0}});
    CHECK(audit_consistency(tables).is_consistent);
}

TEST_CASE("aggregate equals a naive recount") {
    testgen::Rng rng(123457);
    for (int trial = 0; trial < 40; ++trial) {
        const auto dataset = testgen::random_dataset(rng, 200);
        const auto tables = aggregate(dataset);
        for (std::size_t a = 0; a < dataset.schema.attributes.size(); ++a) {
            for (std::size_t v = 0; v < dataset.schema.attributes[a].values.size(); ++v) {
                for (std::size_t c = 0; c < dataset.classes.size(); ++c) {
                    std::int64_t direct = 0;
                    for (const auto& record : dataset.records)
                        if (record.values[a] == v && record.label == c) ++direct;
                    CHECK(tables.tables[a].counts[v][c] == direct);
                }
            }
        }
        // Column sums are identical across blocks by construction.
        const auto first = tables.column_sums(0);
        for (std::size_t a = 1; a < tables.tables.size(); ++a)
            CHECK(tables.column_sums(a) == first);
        CHECK(audit_consistency(tables).is_consistent);
    }
}

TEST_CASE("parse_tables reads the bundled study counts") {
    const auto tables = bundled::table1();
    const auto caste = tables.schema.attribute_index("caste");
    REQUIRE(caste.has_value());
    CHECK(tables.tables[*caste].counts[0] == std::vector<std::int64_t>{100, 120, 34, 46});
    CHECK(tables.grand_total(*caste) == 600);
    CHECK(tables.schema.attributes[*caste].values ==
          std::vector<std::string>{"GEN", "OBC", "SC/ST"});
}

TEST_CASE("parse_tables is row-order independent") {
    std::vector<std::string> lines;
    std::istringstream in{std::string(bundled::table1_csv())};
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) lines.push_back(line);
    // Reverse the data rows; category declaration order changes, so compare
    // cell contents through name lookups.
    std::string shuffled = "attribute,value,class,count\n";
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) shuffled += *it + "\n";

    const auto base = bundled::table1();
    const auto other = parse_tables(shuffled);
    for (std::size_t a = 0; a < base.schema.attributes.size(); ++a) {
        const auto& attribute = base.schema.attributes[a];
        const auto oa = other.schema.attribute_index(attribute.name);
        REQUIRE(oa.has_value());
        for (std::size_t v = 0; v < attribute.values.size(); ++v) {
            const auto ov =
                AttributeSchema::value_index(other.schema.attributes[*oa], attribute.values[v]);
            REQUIRE(ov.has_value());
            for (std::size_t c = 0; c < base.classes.size(); ++c) {
                const auto oc = other.classes.index_of(base.classes.labels[c]);
                REQUIRE(oc.has_value());
                CHECK(base.tables[a].counts[v][c] == other.tables[*oa].counts[*ov][*oc]);
            }
        }
    }
}

TEST_CASE("parse_tables error paths") {
    SUBCASE("negative count") {
        try {
            parse_tables(std::string_view("attribute,value,class,count\ncaste,GEN,I,-5\n"));
            FAIL("expected InputError");
        } catch (const InputError& e) {
            CHECK(message_contains(e, "negative count"));
            CHECK(message_contains(e, "line 2"));
        }
    }
    SUBCASE("non-integer count") {
        CHECK_THROWS_AS(
            parse_tables(std::string_view("attribute,value,class,count\na,v,c,many\n")),
            InputError);
    }
    SUBCASE("duplicate key") {
        try {
            parse_tables(std::string_view("attribute,value,class,count\na,v,c,1\na,v,c,2\n"));
            FAIL("expected InputError");
        } catch (const InputError& e) {
            CHECK(message_contains(e, "line 3"));
            CHECK(message_contains(e, "duplicate"));
        }
    }
    SUBCASE("bad header") {
        CHECK_THROWS_AS(parse_tables(std::string_view("a,b,c\n")), InputError);
    }
    SUBCASE("missing cells default to zero") {
        const auto tables =
            parse_tables(std::string_view("attribute,value,class,count\na,v,c0,3\na,w,c1,2\n"));
        CHECK(tables.tables[0].counts == std::vector<std::vector<std::int64_t>>{{3, 0}, {0, 2}});
    }
}

TEST_CASE("write_tables round-trips bit-exact") {
    SUBCASE("study fixture") {
        const auto tables = bundled::table1();
        const auto text = write_tables(tables);
        CHECK(text == bundled::table1_csv());
        const auto reparsed = parse_tables(text);
        CHECK(reparsed.tables[0].counts == tables.tables[0].counts);
    }
    SUBCASE("random tables") {
        testgen::Rng rng(5150);
        for (int trial = 0; trial < 30; ++trial) {
            const auto tables = testgen::random_tables(rng);
            const auto reparsed = parse_tables(write_tables(tables));
            CHECK(reparsed.schema.attributes.size() == tables.schema.attributes.size());
            CHECK(reparsed.classes.labels == tables.classes.labels);
            for (std::size_t a = 0; a < tables.tables.size(); ++a) {
                CHECK(reparsed.schema.attributes[a].name == tables.schema.attributes[a].name);
                CHECK(reparsed.schema.attributes[a].values == tables.schema.attributes[a].values);
                CHECK(reparsed.tables[a].counts == tables.tables[a].counts);
            }
        }
    }
}

TEST_CASE("audit_consistency flags the study counts") {
    const auto tables = bundled::table1();
    const auto report = audit_consistency(tables);
    CHECK_FALSE(report.is_consistent);
    CHECK(report.inconsistent_classes == std::vector<std::string>{"III", "FAIL"});
    CHECK(report.inconsistent_grand == std::vector<std::string>{"medium"});
    // Schema order: medium, caste, stream.
    CHECK(report.grand_totals == std::vector<std::int64_t>{590, 600, 600});
    CHECK(report.per_class_totals[0] == std::vector<std::int64_t>{190, 248, 81, 71});
    CHECK(report.per_class_totals[1] == std::vector<std::int64_t>{190, 248, 81, 81});
    CHECK(report.per_class_totals[2] == std::vector<std::int64_t>{190, 248, 91, 71});

    const auto rendered = render_consistency_report(tables, report);
    CHECK(rendered.find("medium (590)") != std::string::npos);
    CHECK(rendered.find("inconsistent classes: III FAIL") != std::string::npos);
    CHECK(rendered.find("verdict: inconsistent") != std::string::npos);
}

TEST_CASE("audit_consistency passes consistent sets") {
    MarginalTableSet tables;
    tables.schema.attributes.push_back({"a", {"x"}});
    tables.schema.attributes.push_back({"b", {"y", "z"}});
    tables.classes.labels = {"c0", "c1"};
    tables.tables.push_back({"a", {{2, 3}}});
    tables.tables.push_back({"b", {{1, 1}, {1, 2}}});
    const auto report = audit_consistency(tables);
    CHECK(report.is_consistent);
    CHECK(render_consistency_report(tables, report).find("verdict: consistent") !=
          std::string::npos);
}

TEST_CASE("fields are whitespace-trimmed and CRLF endings are accepted") {
    const auto tables = parse_tables(
        std::string_view("attribute,value,class,count\r\n caste , GEN , I , 100 \r\n"));
    CHECK(tables.schema.attributes[0].name == "caste");
    CHECK(tables.schema.attributes[0].values[0] == "GEN");
    CHECK(tables.tables[0].counts[0][0] == 100);

    const auto dataset =
        parse_records(std::string_view("medium, caste ,class\r\nENGLISH , GEN , I\r\n"));
    CHECK(dataset.schema.attributes[1].name == "caste");
    CHECK(dataset.records.size() == 1);
}

TEST_CASE("a header-only record file needs a pinned vocabulary") {
    // Without a supplied schema there is nothing to infer values from.
    CHECK_THROWS_AS(parse_records(std::string_view("medium,class\n")), InputError);

    ParseRecordsOptions options;
    AttributeSchema schema;
    schema.attributes.push_back({"medium", {"ENGLISH", "HINDI"}});
    options.schema = schema;
    options.classes = ClassLabelSet{{"I", "II"}};
    const auto dataset = parse_records(std::string_view("medium,class\n"), options);
    CHECK(dataset.records.empty());
    CHECK(aggregate(dataset).tables[0].counts ==
          std::vector<std::vector<std::int64_t>>{{0, 0}, {0, 0}});
}

TEST_CASE("bundled data files stay in sync with the embedded constants") {
    CHECK(read_file(std::string(TABNB_DATA_DIR) + "/table1.csv") == bundled::table1_csv());
    CHECK(read_file(std::string(TABNB_DATA_DIR) + "/table2_reference.csv") ==
          bundled::table2_reference_csv());
}
