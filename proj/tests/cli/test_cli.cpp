#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string shell_quote(const std::string& arg) {
    std::string quoted = "'";
    for (const char ch : arg) {
        if (ch == '\'')
            quoted += "'\\''";
        else
            quoted += ch;
    }
    quoted += "'";
    return quoted;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("tabnb_cli_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static inline int counter = 0;
};

CommandResult run_cli(const TempDir& tmp, const std::vector<std::string>& args) {
    const fs::path out_file = tmp.path / "stdout.txt";
    const fs::path err_file = tmp.path / "stderr.txt";
    std::string command = shell_quote(TABNB_CLI_PATH);
    for (const auto& arg : args) command += " " + shell_quote(arg);
    command += " > " + shell_quote(out_file.string()) + " 2> " + shell_quote(err_file.string());
    const int status = std::system(command.c_str());
    CommandResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = read_file(out_file);
    result.err = read_file(err_file);
    return result;
}

const std::string kDataDir = TABNB_DATA_DIR;
const std::string kTable1 = kDataDir + "/table1.csv";
const std::string kTable2 = kDataDir + "/table2_reference.csv";

}  // namespace

TEST_CASE("cli fit and predict reproduce the published second-division call") {
    TempDir tmp;
    const std::string model_path = (tmp.path / "model.json").string();
    const auto fit = run_cli(tmp, {"fit", "--tables", kTable1, "--policy", "reference:stream",
                                   "--out", model_path});
    CHECK(fit.exit_code == 0);
    CHECK(fit.out.find("policy: reference:stream") != std::string::npos);
    CHECK(fit.out.find("N=600") != std::string::npos);
    CHECK(fit.out.find("I=0.316667") != std::string::npos);
    // The counts are inconsistent; fit says so on stderr but still succeeds.
    CHECK(fit.err.find("note:") != std::string::npos);

    const auto predict =
        run_cli(tmp, {"predict", "--model", model_path, "--set", "medium=HINDI", "--set",
                      "caste=OBC", "--set", "stream=BA(NC)"});
    CHECK(predict.exit_code == 0);
    CHECK(predict.out.find("predicted: II") != std::string::npos);
    CHECK(predict.out.find("0.568261") != std::string::npos);
    CHECK(predict.out.find("tie: no") != std::string::npos);
}

TEST_CASE("cli predict supports partial profiles") {
    TempDir tmp;
    const std::string model_path = (tmp.path / "model.json").string();
    run_cli(tmp, {"fit", "--replicate-paper", "--out", model_path});
    const auto result = run_cli(tmp, {"predict", "--model", model_path, "--set", "caste=GEN"});
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("predicted: II") != std::string::npos);
    CHECK(result.out.find("0.400000") != std::string::npos);
}

TEST_CASE("cli audit reports the defect and exits 4") {
    TempDir tmp;
    const auto result = run_cli(tmp, {"audit", "--tables", kTable1});
    CHECK(result.exit_code == 4);
    CHECK(result.out.find("medium (590)") != std::string::npos);
    CHECK(result.out.find("inconsistent classes: III FAIL") != std::string::npos);
    CHECK(result.err.find("error:audit:") != std::string::npos);
}

TEST_CASE("cli audit exits 0 on consistent tables") {
    TempDir tmp;
    const fs::path tables = tmp.path / "tables.csv";
    std::ofstream(tables) << "attribute,value,class,count\n"
                             "a,x,c0,2\na,x,c1,1\na,y,c0,1\na,y,c1,3\n"
                             "b,u,c0,3\nb,u,c1,4\n";
    const auto result = run_cli(tmp, {"audit", "--tables", tables.string()});
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("verdict: consistent") != std::string::npos);
}

TEST_CASE("cli error paths carry the machine-readable prefix and exit codes") {
    TempDir tmp;
    const std::string model_path = (tmp.path / "model.json").string();
    run_cli(tmp, {"fit", "--replicate-paper", "--out", model_path});

    SUBCASE("unknown value is an input error (exit 2)") {
        const auto result =
            run_cli(tmp, {"predict", "--model", model_path, "--set", "caste=NOPE"});
        CHECK(result.exit_code == 2);
        CHECK(result.err.rfind("error:input:", 0) == 0);
        CHECK(result.err.find("NOPE") != std::string::npos);
    }
    SUBCASE("usage errors exit 1") {
        CHECK(run_cli(tmp, {}).exit_code == 1);
        const auto unknown = run_cli(tmp, {"frobnicate"});
        CHECK(unknown.exit_code == 1);
        CHECK(unknown.err.rfind("error:usage:", 0) == 0);
        const auto exclusive =
            run_cli(tmp, {"fit", "--replicate-paper", "--tables", kTable1, "--out", model_path});
        CHECK(exclusive.exit_code == 1);
        CHECK(exclusive.err.rfind("error:usage:", 0) == 0);
    }
    SUBCASE("missing input file is an input error") {
        const auto result = run_cli(tmp, {"audit", "--tables", "/nonexistent/nope.csv"});
        CHECK(result.exit_code == 2);
        CHECK(result.err.rfind("error:input:", 0) == 0);
    }
    SUBCASE("malformed --set is a usage error") {
        const auto result = run_cli(tmp, {"predict", "--model", model_path, "--set", "caste"});
        CHECK(result.exit_code == 1);
        CHECK(result.err.rfind("error:usage:", 0) == 0);
    }
    SUBCASE("unknown performer class is an input error") {
        const auto result =
            run_cli(tmp, {"grid", "--replicate-paper", "--performer", "I,NOPE"});
        CHECK(result.exit_code == 2);
        CHECK(result.err.find("NOPE") != std::string::npos);
    }
    SUBCASE("zero denominator with alpha 0 exits 5") {
        const fs::path tables = tmp.path / "degenerate.csv";
        std::ofstream(tables) << "attribute,value,class,count\na,x,c0,1\na,x,c1,0\n";
        const auto result = run_cli(tmp, {"fit", "--tables", tables.string(), "--policy",
                                          "reference:a", "--out", model_path});
        CHECK(result.exit_code == 5);
        CHECK(result.err.rfind("error:fit:", 0) == 0);
    }
    SUBCASE("undefined posterior on predict exits 3") {
        const fs::path tables = tmp.path / "zeros.csv";
        std::ofstream(tables) << "attribute,value,class,count\n"
                                 "a,x,c0,2\na,x,c1,1\na,y,c0,0\na,y,c1,0\n";
        const std::string degenerate_model = (tmp.path / "zeros.json").string();
        const auto fit = run_cli(tmp, {"fit", "--tables", tables.string(), "--policy",
                                       "per-attribute", "--out", degenerate_model});
        REQUIRE(fit.exit_code == 0);
        const auto result =
            run_cli(tmp, {"predict", "--model", degenerate_model, "--set", "a=y"});
        CHECK(result.exit_code == 3);
        CHECK(result.err.rfind("error:undefined:", 0) == 0);
    }
}

TEST_CASE("cli grid renders and diffs") {
    TempDir tmp;

    SUBCASE("replicate flag, csv output, byte determinism") {
        const auto first = run_cli(tmp, {"grid", "--replicate-paper", "--format", "csv"});
        const auto second = run_cli(tmp, {"grid", "--replicate-paper", "--format", "csv"});
        CHECK(first.exit_code == 0);
        CHECK(first.out == second.out);
        CHECK(first.out.find("ENGLISH,GEN,BA(NC),II,0.549218") != std::string::npos);
        std::istringstream lines(first.out);
        std::string line;
        int count = 0;
        while (std::getline(lines, line)) ++count;
        CHECK(count == 31);  // header + 30 rows
    }
    SUBCASE("a fitted model file gives the same grid as --replicate-paper") {
        const std::string model_path = (tmp.path / "model.json").string();
        run_cli(tmp, {"fit", "--replicate-paper", "--out", model_path});
        const auto from_model = run_cli(tmp, {"grid", "--model", model_path, "--format", "csv"});
        const auto from_flag = run_cli(tmp, {"grid", "--replicate-paper", "--format", "csv"});
        CHECK(from_model.out == from_flag.out);
    }
    SUBCASE("json-like format") {
        const auto result = run_cli(tmp, {"grid", "--replicate-paper", "--format", "json-like"});
        CHECK(result.exit_code == 0);
        CHECK(result.out.find("\"posterior\"") != std::string::npos);
        CHECK(result.out.find("\"probability\": 0.549218") != std::string::npos);
    }
    SUBCASE("diff against the published grid") {
        const auto result =
            run_cli(tmp, {"grid", "--replicate-paper", "--diff", kTable2});
        CHECK(result.exit_code == 0);
        CHECK(result.out.find("discrepancies: 1") != std::string::npos);
        CHECK(result.out.find("medium=HINDI caste=SC/ST stream=BCom") != std::string::npos);
        CHECK(result.out.find("predicted II (0.401030), reference FAIL (0.456478)") !=
              std::string::npos);
    }
    SUBCASE("a label mismatch is flagged at any tolerance") {
        const auto result = run_cli(
            tmp, {"grid", "--replicate-paper", "--diff", kTable2, "--tolerance", "1.0"});
        CHECK(result.exit_code == 0);
        CHECK(result.out.find("discrepancies: 1") != std::string::npos);
    }
    SUBCASE("outcome flags are configurable") {
        const auto result = run_cli(tmp, {"grid", "--replicate-paper", "--format", "csv",
                                          "--performer", "I", "--risk-threshold", "0.30"});
        CHECK(result.exit_code == 0);
        // (ENGLISH, GEN, BA(NC)) predicts II: not a performer under {I}.
        CHECK(result.out.find("ENGLISH,GEN,BA(NC),II,0.549218,false") != std::string::npos);
    }
}

TEST_CASE("cli fit from records plus eval") {
    TempDir tmp;
    const fs::path records = tmp.path / "records.csv";
    std::ofstream(records) << "medium,caste,class\n"
                              "ENGLISH,GEN,I\n"
                              "ENGLISH,OBC,I\n"
                              "ENGLISH,GEN,I\n"
                              "HINDI,GEN,II\n"
                              "HINDI,OBC,II\n"
                              "HINDI,OBC,II\n";
    const std::string model_path = (tmp.path / "model.json").string();
    const auto fit = run_cli(tmp, {"fit", "--records", records.string(), "--policy",
                                   "per-attribute", "--out", model_path});
    CHECK(fit.exit_code == 0);
    CHECK(fit.out.find("N=6") != std::string::npos);

    const auto eval = run_cli(tmp, {"eval", "--model", model_path, "--records",
                                    records.string()});
    CHECK(eval.exit_code == 0);
    CHECK(eval.out.find("\"accuracy\": 1.0") != std::string::npos);
    CHECK(eval.out.find("\"evaluated\": 6") != std::string::npos);
}

TEST_CASE("cli fit with explicit totals and alpha") {
    TempDir tmp;
    const fs::path totals = tmp.path / "totals.csv";
    std::ofstream(totals) << "class,total\nI,190\nII,248\nIII,91\nFAIL,71\n";
    const std::string model_path = (tmp.path / "model.json").string();
    const auto fit = run_cli(tmp, {"fit", "--tables", kTable1, "--policy",
                                   "explicit:" + totals.string(), "--alpha", "1/2", "--out",
                                   model_path});
    CHECK(fit.exit_code == 0);
    CHECK(fit.out.find("alpha: 1/2") != std::string::npos);
    CHECK(fit.out.find("N=600") != std::string::npos);

    // Explicit totals equal to the stream column sums reproduce the study
    // priors exactly.
    CHECK(fit.out.find("I=0.316667") != std::string::npos);
}

TEST_CASE("identical invocations produce byte-identical stdout") {
    TempDir tmp;
    const std::string model_path = (tmp.path / "model.json").string();
    const auto fit1 = run_cli(tmp, {"fit", "--replicate-paper", "--out", model_path});
    const auto fit2 = run_cli(tmp, {"fit", "--replicate-paper", "--out", model_path});
    CHECK(fit1.out == fit2.out);

    const std::vector<std::string> predict_args = {
        "predict", "--model", model_path, "--set", "medium=ENGLISH", "--set", "caste=SC/ST",
        "--set", "stream=BSc(Bio)"};
    const auto p1 = run_cli(tmp, predict_args);
    const auto p2 = run_cli(tmp, predict_args);
    CHECK(p1.out == p2.out);
    CHECK(p1.out.find("predicted: I") != std::string::npos);
    CHECK(p1.out.find("0.601875") != std::string::npos);
}
