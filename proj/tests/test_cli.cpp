#include "ntklens/cli.hpp"
#include "ntklens/errors.hpp"

#include "doctest.h"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace ntklens;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path root;
    TempDir() {
        root = fs::temp_directory_path() /
               ("ntklens_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(root);
    }
    ~TempDir() { fs::remove_all(root); }
    std::string path(const std::string &name) const { return (root / name).string(); }
    static int &counter() {
        static int n = 0;
        return n;
    }
};

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

KeyValueConfig cfg_of(std::initializer_list<std::pair<std::string, std::string>> kv) {
    KeyValueConfig c = KeyValueConfig::parse_text("");
    for (const auto &[k, v] : kv) c.set(k, v);
    return c;
}

int gen_positional(const std::string &out, int n_per_class, const std::string &seed) {
    return run_command("gen", cfg_of({{"kind", "positional"},
                                      {"n_per_class", std::to_string(n_per_class)},
                                      {"out", out},
                                      {"seed", seed}}));
}

} // namespace

TEST_CASE("key-value configs parse comments, types and lists") {
    const KeyValueConfig c = KeyValueConfig::parse_text("# header\n"
                                                        "model = mlp   \n"
                                                        "width = 64\n"
                                                        "\n"
                                                        "lr = 0.25\n"
                                                        "shuffle = true\n"
                                                        "widths = 8, 16,32\n",
                                                        "inline");
    CHECK(c.get_string("model") == "mlp");
    CHECK(c.get_int("width") == 64);
    CHECK(c.get_double("lr") == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(c.get_bool("shuffle"));
    CHECK(c.get_int_list("widths") == std::vector<std::int64_t>{8, 16, 32});
    CHECK(c.get_int("missing", 7) == 7);
    CHECK_THROWS_AS(c.get_int("model"), ConfigError);
    CHECK_THROWS_AS(c.get_string("missing"), ConfigError);

    const std::vector<std::string> allowed{"model", "width", "lr", "shuffle", "widths"};
    CHECK_NOTHROW(c.restrict_keys(allowed));
    const std::vector<std::string> narrow{"model"};
    CHECK_THROWS_AS(c.restrict_keys(narrow), ConfigError);

    KeyValueConfig u = KeyValueConfig::parse_text("a = 1\n");
    u.set("a", "2");
    CHECK(u.get_int("a") == 2);
    CHECK_THROWS_AS(KeyValueConfig::parse_text("a = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::parse_text("just words\n"), ConfigError);
}

TEST_CASE("gen writes a deterministic corpus and a manifest") {
    TempDir tmp;
    REQUIRE(gen_positional(tmp.path("a"), 6, "3") == 0);
    REQUIRE(gen_positional(tmp.path("b"), 6, "3") == 0);
    const std::string ta = slurp(tmp.path("a") + "/train.tsv");
    CHECK(ta == slurp(tmp.path("b") + "/train.tsv"));
    CHECK(ta.find('\t') != std::string::npos);

    const nlohmann::json m = nlohmann::json::parse(slurp(tmp.path("a") + "/manifest.json"));
    CHECK(m["command"] == "gen");
    CHECK(m["config"]["kind"] == "positional");
    CHECK(!m["outputs"].empty());

    // another seed changes the bytes
    REQUIRE(gen_positional(tmp.path("c"), 6, "4") == 0);
    CHECK(ta != slurp(tmp.path("c") + "/train.tsv"));
}

TEST_CASE("config mistakes exit with code 2") {
    TempDir tmp;
    CHECK(run_command("gen", cfg_of({{"kind", "positional"},
                                     {"out", tmp.path("x")},
                                     {"typo_key", "1"}})) == 2);
    CHECK(run_command("gen", cfg_of({{"kind", "unheard-of"}, {"out", tmp.path("y")}})) == 2);
    CHECK(run_command("no-such-command", cfg_of({})) == 2);
    CHECK(run_command("extract", cfg_of({{"corpus", tmp.path("missing.tsv")},
                                         {"out", tmp.path("z")}})) == 2);
}

TEST_CASE("extract summarizes a generated corpus") {
    TempDir tmp;
    REQUIRE(gen_positional(tmp.path("gen"), 25, "1") == 0);
    const int rc = run_command("extract", cfg_of({{"corpus", tmp.path("gen") + "/train.tsv"},
                                                  {"out", tmp.path("ex")}}));
    CHECK(rc == 0);
    const std::string csv = slurp(tmp.path("ex") + "/cooccurrence.csv");
    CHECK(csv.find("pos0") != std::string::npos);
    const nlohmann::json m = nlohmann::json::parse(slurp(tmp.path("ex") + "/manifest.json"));
    CHECK(m["results"]["extracted_units"].get<int>() > 0);

    CHECK(run_command("extract", cfg_of({{"corpus", tmp.path("gen") + "/train.tsv"},
                                         {"unit", "sentence"},
                                         {"out", tmp.path("ex2")}})) == 2);
}

TEST_CASE("converged cnn kernels outside relu are unsupported, code 4") {
    TempDir tmp;
    const int rc = run_command("ntk-check", cfg_of({{"model", "cnn"},
                                                    {"activation", "gelu"},
                                                    {"widths", "16"},
                                                    {"seeds", "1"},
                                                    {"out", tmp.path("nc")}}));
    CHECK(rc == 4);
}

TEST_CASE("dynamics reports divergence with code 3") {
    TempDir tmp;
    REQUIRE(gen_positional(tmp.path("gen"), 6, "2") == 0);
    const int rc = run_command("dynamics", cfg_of({{"model", "mlp"},
                                                   {"corpus", tmp.path("gen") + "/train.tsv"},
                                                   {"tracked", "pos0"},
                                                   {"dt", "1e6"},
                                                   {"steps", "5"},
                                                   {"record_stride", "1"},
                                                   {"divergence_cap", "1"},
                                                   {"out", tmp.path("dyn")}}));
    CHECK(rc == 3);
}

TEST_CASE("dynamics writes converged traces for a tiny corpus") {
    TempDir tmp;
    REQUIRE(gen_positional(tmp.path("gen"), 6, "2") == 0);
    const int rc = run_command("dynamics", cfg_of({{"model", "mlp"},
                                                   {"corpus", tmp.path("gen") + "/train.tsv"},
                                                   {"tracked", "pos0, neg0"},
                                                   {"dt", "0.5"},
                                                   {"steps", "20"},
                                                   {"record_stride", "5"},
                                                   {"out", tmp.path("dyn")}}));
    CHECK(rc == 0);
    const std::string csv = slurp(tmp.path("dyn") + "/dynamics_trace.csv");
    CHECK(csv.rfind("t,series,name,class,score", 0) == 0);
    CHECK(csv.find(",tracked,pos0,") != std::string::npos);
}

TEST_CASE("train runs end to end and records the sweep") {
    TempDir tmp;
    REQUIRE(gen_positional(tmp.path("gen"), 10, "1") == 0);
    const int rc = run_command("train", cfg_of({{"model", "mlp"},
                                                {"width", "8"},
                                                {"epochs", "2"},
                                                {"corpus", tmp.path("gen") + "/train.tsv"},
                                                {"tracked", "pos0, neg0"},
                                                {"out", tmp.path("tr")}}));
    CHECK(rc == 0);
    const nlohmann::json m = nlohmann::json::parse(slurp(tmp.path("tr") + "/manifest.json"));
    REQUIRE(m["results"]["runs"].is_array());
    REQUIRE(m["results"]["runs"].size() == 1);
    CHECK(m["results"]["runs"][0]["train_accuracy"].is_number());
    const std::string csv = slurp(tmp.path("tr") + "/train_trace.csv");
    CHECK(csv.rfind("epoch,series,name,class,value", 0) == 0);
    CHECK(csv.find(",unit,pos0,") != std::string::npos);
}

TEST_CASE("the argv front end forwards overrides and flags errors") {
    TempDir tmp;
    std::ofstream(tmp.path("gen.cfg")) << "kind = positional\nn_per_class = 6\n";
    const std::string out = tmp.path("cli_out");
    std::string cfg_path = tmp.path("gen.cfg");
    std::vector<const char *> argv = {"ntklens", "gen",        "--config", cfg_path.c_str(),
                                      "--out",   out.c_str(), "--seed",   "9"};
    CHECK(run_cli(static_cast<int>(argv.size()), argv.data()) == 0);
    const nlohmann::json m = nlohmann::json::parse(slurp(out + "/manifest.json"));
    CHECK(m["config"]["seed"] == "9");
    CHECK(m["config"]["out"] == out);

    std::string missing = tmp.path("nope.cfg");
    std::vector<const char *> bad = {"ntklens", "gen", "--config", missing.c_str()};
    CHECK(run_cli(static_cast<int>(bad.size()), bad.data()) == 2);

    std::vector<const char *> unknown = {"ntklens", "transmogrify"};
    CHECK(run_cli(static_cast<int>(unknown.size()), unknown.data()) == 2);
}
