#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "rbnet/io.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = CLI_PATH;

std::string work_dir() {
    auto dir = fs::temp_directory_path() / "rbnet_cli_tests";
    fs::create_directories(dir);
    return dir.string();
}

int run(const std::string& args) {
    std::string cmd = kCli + " " + args + " >> " + work_dir() + "/stdout.log 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    return std::string(std::istreambuf_iterator<char>(f), {});
}

// Byte compare all regular files except the timing log.
bool dirs_identical(const std::string& a, const std::string& b) {
    std::vector<std::string> names;
    for (auto& e : fs::directory_iterator(a))
        if (e.is_regular_file()) names.push_back(e.path().filename().string());
    for (auto& name : names) {
        if (name == "timing.log") continue;
        if (!fs::exists(fs::path(b) / name)) return false;
        if (slurp((fs::path(a) / name).string()) != slurp((fs::path(b) / name).string())) return false;
    }
    return true;
}

std::string manifest_value(const std::string& path, const std::string& key) {
    for (auto& [k, v] : rbnet::io::read_kv(path))
        if (k == key) return v;
    return "";
}

}  // namespace

TEST_CASE("generate + fit + explain pipeline, deterministic reruns") {
    std::string w = work_dir();
    REQUIRE(run("generate --n 150 --kind pure --m 30 --k 3 --seed 11 --out " + w + "/net1") == 0);
    REQUIRE(run("generate --n 150 --kind pure --m 30 --k 3 --seed 11 --out " + w + "/net2") == 0);
    CHECK(dirs_identical(w + "/net1", w + "/net2"));
    CHECK(fs::exists(w + "/net1/truth/truth_block.csv"));

    std::string fit_args = "fit --edges " + w + "/net1/edges.tsv --covariates " + w + "/net1/covariates.csv" +
                           " --labels " + w + "/net1/labels.txt --k 3 --tau 60 --gradient-mode exact --seed 5" +
                           " --prior-beta-diag 12.2 --prior-beta-offdiag 122 --elbo-every 10 --out ";
    REQUIRE(run(fit_args + w + "/fit1") == 0);
    REQUIRE(run(fit_args + w + "/fit2") == 0);
    CHECK(dirs_identical(w + "/fit1", w + "/fit2"));
    double nmi = std::stod(manifest_value(w + "/fit1/manifest.txt", "nmi"));
    CHECK(nmi > 0.5);

    REQUIRE(run("explain --fit-dir " + w + "/fit1 --top-n 4 --out " + w + "/prof") == 0);
    auto lines = rbnet::io::read_lines(w + "/prof/profiles.txt");
    int communities = 0, covs = 0;
    for (auto& l : lines) {
        if (l.rfind("community=", 0) == 0) ++communities;
        if (l.rfind("covariate=", 0) == 0) ++covs;
    }
    CHECK(communities == 3);
    CHECK(covs == 12);  // top-n honored

    CHECK(run("explain --fit-dir " + w + "/nonexistent --out " + w + "/prof2") != 0);
}

TEST_CASE("predict-links writes scores and auc; rejects bad fractions") {
    std::string w = work_dir();
    REQUIRE(run("generate --n 120 --kind pure --m 20 --k 3 --seed 3 --out " + w + "/lnet") == 0);
    std::string base = "predict-links --edges " + w + "/lnet/edges.tsv --covariates " + w +
                       "/lnet/covariates.csv --k 3 --tau 50 --gradient-mode exact --seed 7 --out " + w + "/pred";
    REQUIRE(run(base + " --mask-fraction 0.2") == 0);
    auto manifest = w + "/pred/manifest.txt";
    double auc = std::stod(manifest_value(manifest, "auc"));
    CHECK(auc >= 0.0);
    CHECK(auc <= 1.0);
    int pos = std::stoi(manifest_value(manifest, "heldout_pos"));
    auto scores = rbnet::io::read_lines(w + "/pred/scores.csv");
    CHECK(static_cast<int>(scores.size()) == 1 + 2 * pos);  // header + pos + neg
    CHECK(fs::exists(w + "/pred/split.txt"));

    CHECK(run(base + " --mask-fraction 0") != 0);
    CHECK(run(base + " --mask-fraction 1.5") != 0);
}

TEST_CASE("rbmmsbm fit and select-k") {
    std::string w = work_dir();
    REQUIRE(run("generate --n 60 --kind mixed --m 4 --k 2 --seed 9 --out " + w + "/mmnet") == 0);
    CHECK(fs::exists(w + "/mmnet/mm_labels.csv"));
    std::string fit_args = "fit --edges " + w + "/mmnet/edges.tsv --covariates " + w + "/mmnet/covariates.csv" +
                           " --model rbmmsbm --k 2 --tau 8 --chains 20 --omega-samples 500 --seed 2 --out ";
    REQUIRE(run(fit_args + w + "/mmfit1") == 0);
    REQUIRE(run(fit_args + w + "/mmfit2") == 0);
    CHECK(dirs_identical(w + "/mmfit1", w + "/mmfit2"));
    CHECK(manifest_value(w + "/mmfit1/manifest.txt", "log_omega") != "");

    REQUIRE(run("select-k --edges " + w + "/mmnet/edges.tsv --covariates " + w + "/mmnet/covariates.csv" +
                " --model rbmmsbm --k-range 2:3 --tau 5 --chains 10 --omega-samples 300 --seed 2 --out " + w +
                "/selk") == 0);
    auto table = rbnet::io::read_lines(w + "/selk/k_selection.csv");
    CHECK(table.size() == 3);  // header + 2 rows
    std::string chosen = manifest_value(w + "/selk/manifest.txt", "chosen_k");
    CHECK((chosen == "2" || chosen == "3"));

    // k larger than n fails cleanly
    CHECK(run("fit --edges " + w + "/mmnet/edges.tsv --covariates " + w + "/mmnet/covariates.csv --k 500 --tau 2 --out " +
              w + "/bad") != 0);
}

TEST_CASE("eval subcommand computes NMI and aligned JS") {
    std::string w = work_dir();
    rbnet::io::write_lines(w + "/la.txt", {"0", "0", "1", "1"});
    rbnet::io::write_lines(w + "/lb.txt", {"5", "5", "9", "9"});
    REQUIRE(run("eval --labels-a " + w + "/la.txt --labels-b " + w + "/lb.txt --out " + w + "/ev") == 0);
    CHECK(std::stod(manifest_value(w + "/ev/eval.txt", "nmi")) == doctest::Approx(1.0));

    rbnet::io::write_lines(w + "/ma.csv", {"1,0", "0,1", "0.5,0.5"});
    rbnet::io::write_lines(w + "/mb.csv", {"0,1", "1,0", "0.5,0.5"});  // columns swapped
    REQUIRE(run("eval --mm-est " + w + "/ma.csv --mm-truth " + w + "/mb.csv --out " + w + "/ev2") == 0);
    CHECK(std::stod(manifest_value(w + "/ev2/eval.txt", "mean_js")) == doctest::Approx(0.0).epsilon(1e-9));

    CHECK(run("eval --out " + w + "/ev3") != 0);
}

TEST_CASE("config file values apply and flags win") {
    std::string w = work_dir();
    REQUIRE(run("generate --n 80 --kind pure --m 10 --k 2 --seed 4 --out " + w + "/cnet") == 0);
    rbnet::io::write_lines(w + "/fit.cfg", {"k = 2", "tau = 5", "gradient-mode = exact", "seed = 19"});
    REQUIRE(run("fit --edges " + w + "/cnet/edges.tsv --covariates " + w + "/cnet/covariates.csv --config " + w +
                "/fit.cfg --out " + w + "/cfit1") == 0);
    CHECK(manifest_value(w + "/cfit1/manifest.txt", "tau") == "5");
    CHECK(manifest_value(w + "/cfit1/manifest.txt", "seed") == "19");
    // flag beats config
    REQUIRE(run("fit --edges " + w + "/cnet/edges.tsv --covariates " + w + "/cnet/covariates.csv --config " + w +
                "/fit.cfg --tau 7 --out " + w + "/cfit2") == 0);
    CHECK(manifest_value(w + "/cfit2/manifest.txt", "tau") == "7");
}

TEST_CASE("encode-lazega emits core_data formats") {
    std::string w = work_dir();
    rbnet::io::write_lines(w + "/laz.csv", {"status,gender,office,years,age,practice,school", "1,1,2,10,45,1,2",
                                            "2,2,1,3,28,2,1", "1,1,3,22,59,1,3"});
    rbnet::io::write_lines(w + "/laz_edges.tsv", {"0\t1", "1\t2"});
    REQUIRE(run("encode-lazega --attributes " + w + "/laz.csv --edges " + w + "/laz_edges.tsv --out " + w + "/laz") == 0);
    auto header = rbnet::io::read_lines(w + "/laz/covariates.csv");
    REQUIRE(!header.empty());
    // 24 columns in the header
    int commas = 0;
    for (char c : header[0]) commas += c == ',';
    CHECK(commas == 23);
}

TEST_CASE("binarized continuous fit runs") {
    std::string w = work_dir();
    // small continuous network by hand
    rbnet::io::write_lines(w + "/ce.tsv", {"0\t1", "1\t2", "2\t3", "3\t0", "0\t2"});
    rbnet::io::write_lines(w + "/cc.csv", {"a,b", "0.1,0.9", "0.2,0.8", "0.9,0.1", "0.95,0.2"});
    REQUIRE(run("fit --edges " + w + "/ce.tsv --covariates " + w + "/cc.csv --mode continuous --k 2 --tau 5" +
                " --gradient-mode gibbs --chains 10 --seed 1 --out " + w + "/contfit") == 0);
    REQUIRE(run("fit --edges " + w + "/ce.tsv --covariates " + w + "/cc.csv --mode continuous --binarize-bins 10" +
                " --k 2 --tau 5 --gradient-mode gibbs --chains 10 --seed 1 --out " + w + "/binfit") == 0);
    CHECK(manifest_value(w + "/binfit/manifest.txt", "m") == "20");
}
