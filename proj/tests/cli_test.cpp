#include <cbmo/cli.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

namespace fs = std::filesystem;
using namespace cbmo;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    return cli::detail::read_file(p.string());
}

void spit(const fs::path& p, const std::string& content)
{
    cli::detail::write_file(p, content);
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path()
               / ("cbmo_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string synth(const std::string& name, std::uint64_t seed = 7)
    {
        auto r = run({"synth", path(name), "--seed", std::to_string(seed)});
        EXPECT_EQ(r.code, 0) << r.err;
        return path(name);
    }

    fs::path dir_;
};

} // namespace

TEST_F(CliTest, ValidateCanonicalModel)
{
    spit(path("full.cbm"), serialize_model(make_full_instance(canonical_schema())));
    auto r = run({"validate", path("full.cbm")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "valid: true\nviolations: 0\n");
}

TEST_F(CliTest, ValidateReportsViolations)
{
    auto instance = make_full_instance(canonical_schema());
    instance.elements.erase(ConceptId::PRF);
    spit(path("m.cbm"), serialize_model(instance));
    auto r = run({"validate", path("m.cbm")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("valid: false\n"), std::string::npos);
    EXPECT_NE(r.out.find("\nMissingElement PRF: "), std::string::npos);
}

TEST_F(CliTest, ParseErrorsCarryFileAndLine)
{
    spit(path("bad.cbm"), "model x\nelement VP\nrelation VP nope TC\n");
    auto r = run({"validate", path("bad.cbm")});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.err, "error: " + path("bad.cbm") + ":3: UnknownVerb: unknown verb 'nope'\n");

    spit(path("bad.csv"), "year,VP,profit\n2020,1,2\n2021,x,3\n");
    r = run({"ablate", path("bad.csv"), "--out-dir", path("out")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find(path("bad.csv") + ":3: Syntax:"), std::string::npos) << r.err;
}

TEST_F(CliTest, UsageAndIoErrors)
{
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"train", "data.csv"}).code, 2); // --binding is required
    auto r = run({"validate", path("missing.cbm")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("cannot open"), std::string::npos);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, AblateIsByteIdenticalAcrossRunsAndDirectories)
{
    auto data = synth("syn.csv");
    const auto before = slurp(data);
    auto a = run({"ablate", data, "--seed", "3", "--out-dir", path("a")});
    auto b = run({"ablate", data, "--seed", "3", "--out-dir", path("b")});
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(slurp(dir_ / "a" / "ablation.json"), slurp(dir_ / "b" / "ablation.json"));
    EXPECT_EQ(slurp(dir_ / "a" / "ablation.tsv"), slurp(dir_ / "b" / "ablation.tsv"));
    EXPECT_EQ(slurp(data), before);

    auto doc = cli::Json::parse(slurp(dir_ / "a" / "ablation.json"));
    EXPECT_EQ(doc["run"]["command"], "ablate");
    EXPECT_EQ(doc["run"]["seed"], 3);
    EXPECT_FALSE(doc["run"].contains("out_dir"));
    EXPECT_EQ(doc["test_periods"].size(), 8u);
    EXPECT_EQ(slurp(dir_ / "a" / "ablation.tsv").rfind("# run: {", 0), 0u);
}

TEST_F(CliTest, AblateWithBindingFile)
{
    auto data = synth("syn.csv");
    auto text = slurp(data);
    const std::string header = text.substr(0, text.find('\n'));
    std::string renamed = "year";
    std::string binding = "column,concept\n";
    int k = 0;
    for (auto id : canonical_schema().input_elements) {
        renamed += ",indicator " + std::to_string(k);
        binding += "indicator " + std::to_string(k++) + "," + std::string(symbol(id)) + "\n";
    }
    renamed += ",Profit";
    spit(path("renamed.csv"), renamed + text.substr(text.find('\n')));
    spit(path("binding.csv"), binding);

    ASSERT_EQ(run({"ablate", data, "--out-dir", path("plain")}).code, 0);
    auto r = run({"ablate", path("renamed.csv"), "--binding", path("binding.csv"), "--out-dir", path("bound")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto plain = cli::Json::parse(slurp(dir_ / "plain" / "ablation.json"));
    auto bound = cli::Json::parse(slurp(dir_ / "bound" / "ablation.json"));
    EXPECT_EQ(plain["models"], bound["models"]);
}

TEST_F(CliTest, ReportSummarisesAblation)
{
    auto data = synth("syn.csv");
    ASSERT_EQ(run({"ablate", data, "--out-dir", path("out")}).code, 0);
    auto r = run({"report", path("out/ablation.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("Ablation report: 32 training periods, 8 test periods (2017..2024)"), std::string::npos);
    EXPECT_NE(r.out.find("Rate of change of profit"), std::string::npos);

    spit(path("junk.json"), "{\"x\": 1}");
    EXPECT_EQ(run({"report", path("junk.json")}).code, 2);
    spit(path("broken.json"), "{");
    EXPECT_EQ(run({"report", path("broken.json")}).code, 2);
}

TEST_F(CliTest, TrainThenPredict)
{
    auto data = synth("syn.csv");
    spit(path("identity.csv"), [] {
        std::string b;
        for (auto id : canonical_schema().input_elements) {
            b += std::string(symbol(id)) + "," + std::string(symbol(id)) + "\n";
        }
        return b;
    }());
    auto r = run({"train", data, "--binding", path("identity.csv"), "--epochs", "200", "--out-dir", path("model")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto metrics = cli::Json::parse(slurp(dir_ / "model" / "train_metrics.json"));
    EXPECT_EQ(metrics["train_rows"], 32);
    EXPECT_EQ(metrics["features"].size(), 14u);
    EXPECT_EQ(metrics["run"]["epochs"], 200);
    EXPECT_EQ(metrics["polynomial"]["coefficients"].size(), 29u);

    const auto snapshot = slurp(dir_ / "model" / "network.txt");
    EXPECT_EQ(snapshot.rfind("# run: ", 0), 0u);
    auto net = bel::from_snapshot(snapshot);
    EXPECT_EQ(net.size(), 14u);
    EXPECT_EQ(net.config().epochs, 200u);

    r = run({"predict", data, "--net", path("model/network.txt"), "--out-dir", path("pred")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto lines = text::split_lines(slurp(dir_ / "pred" / "predictions.tsv"));
    EXPECT_EQ(lines[1], "period\tpredicted_profit\tactual_profit");
    EXPECT_EQ(lines.size(), 2u + 40u);

    // Prediction inputs without a profit column.
    auto text = slurp(data);
    std::string stripped;
    for (auto line : text::split_lines(text)) {
        if (!line.empty()) {
            stripped += std::string(line.substr(0, line.rfind(','))) + "\n";
        }
    }
    spit(path("noprofit.csv"), stripped);
    r = run({"predict", path("noprofit.csv"), "--net", path("model/network.txt"), "--out-dir", path("pred2")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto first = text::split_lines(slurp(dir_ / "pred" / "predictions.tsv"))[2];
    auto second = text::split_lines(slurp(dir_ / "pred2" / "predictions.tsv"))[2];
    EXPECT_EQ(second, first.substr(0, first.rfind('\t')));
}

TEST_F(CliTest, SynthIsDeterministic)
{
    auto a = slurp(synth("a.csv", 11));
    auto b = slurp(synth("b.csv", 11));
    auto c = slurp(synth("c.csv", 12));
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    auto table = load_observations(a, identity_binding());
    EXPECT_EQ(table.rows(), 40u);
}
