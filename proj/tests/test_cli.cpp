#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cli_app.hpp"
#include "locsnn/checkpoint.hpp"
#include "locsnn/dataset_io.hpp"

namespace fs = std::filesystem;
using locsnn::cli::run;

namespace {

int counter = 0;

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() /
                 ("locsnn-cli-" + tag + "-" + std::to_string(::getpid()) + "-" +
                  std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> gen_args(const fs::path& dir) {
  return {"gen-synth", "--out", dir.string(), "--classes", "3", "--taxels", "12",
          "--steps", "24", "--per-class", "6", "--seed", "5"};
}

}  // namespace

TEST_CASE("gen-synth writes a loadable, reproducible dataset") {
  const fs::path dir_a = fresh_dir("gen-a");
  const fs::path dir_b = fresh_dir("gen-b");
  REQUIRE(run(gen_args(dir_a)) == 0);
  REQUIRE(run(gen_args(dir_b)) == 0);

  locsnn::Dataset ds = locsnn::read_dataset(dir_a / "manifest.txt");
  CHECK(ds.samples.size() == 18);
  CHECK(ds.channels == 12);
  CHECK(fs::exists(dir_a / "run-config.txt"));

  // Byte-identical across runs with the same flags.
  CHECK(slurp(dir_a / "manifest.txt") == slurp(dir_b / "manifest.txt"));
  CHECK(slurp(dir_a / "events" / "c0-s0.events") ==
        slurp(dir_b / "events" / "c0-s0.events"));

  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("missing required flags are a usage error") {
  CHECK(run({"gen-synth"}) == locsnn::cli::kUsageError);
  CHECK(run({"no-such-command"}) == locsnn::cli::kUsageError);
  CHECK(run({}) == locsnn::cli::kUsageError);
}

TEST_CASE("orders prints the 1-based permutations") {
  const fs::path dir = fresh_dir("orders");
  const fs::path listing = dir / "orders.txt";
  REQUIRE(run({"orders", "--out", listing.string()}) == 0);
  const std::string text = slurp(listing);
  CHECK(text.find("arch: 11, 25, 35") != std::string::npos);
  CHECK(text.find("whorl: 21, 15, 16") != std::string::npos);
  CHECK(text.find("loop: 1, 2, 3") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("train / eval / cost / infer-stream round trip") {
  const fs::path data_dir = fresh_dir("pipeline-data");
  REQUIRE(run(gen_args(data_dir)) == 0);
  const std::string manifest = (data_dir / "manifest.txt").string();

  const fs::path run_dir = fresh_dir("pipeline-run");
  std::vector<std::string> train_args = {
      "train",  "--data",   manifest,        "--out",    run_dir.string(),
      "--model", "hybrid",  "--hidden", "8", "--epochs", "2",
      "--lr",    "0.05",    "--seed",   "3"};
  REQUIRE(run(train_args) == 0);
  CHECK(fs::exists(run_dir / "checkpoint.txt"));
  CHECK(fs::exists(run_dir / "curves.csv"));
  CHECK(fs::exists(run_dir / "run-config.txt"));

  SUBCASE("training twice is byte-identical") {
    const fs::path run_dir2 = fresh_dir("pipeline-run2");
    std::vector<std::string> again = train_args;
    again[4] = run_dir2.string();
    REQUIRE(run(again) == 0);
    CHECK(slurp(run_dir / "checkpoint.txt") == slurp(run_dir2 / "checkpoint.txt"));
    CHECK(slurp(run_dir / "curves.csv") == slurp(run_dir2 / "curves.csv"));
    fs::remove_all(run_dir2);
  }

  SUBCASE("eval reports metrics and a confusion matrix") {
    const fs::path eval_dir = fresh_dir("pipeline-eval");
    REQUIRE(run({"eval", "--data", manifest, "--checkpoint",
                 (run_dir / "checkpoint.txt").string(), "--out",
                 eval_dir.string()}) == 0);
    const std::string metrics = slurp(eval_dir / "metrics.txt");
    CHECK(metrics.find("accuracy") != std::string::npos);
    CHECK(fs::exists(eval_dir / "confusion.csv"));
    fs::remove_all(eval_dir);
  }

  SUBCASE("cost reports per-layer accumulate counts") {
    const fs::path cost_dir = fresh_dir("pipeline-cost");
    REQUIRE(run({"cost", "--data", manifest, "--checkpoint",
                 (run_dir / "checkpoint.txt").string(), "--out",
                 cost_dir.string()}) == 0);
    const std::string cost = slurp(cost_dir / "cost.txt");
    CHECK(cost.find("snn_multiply_ops 0") != std::string::npos);
    CHECK(slurp(cost_dir / "cost.csv").find("time.layer0") != std::string::npos);
    fs::remove_all(cost_dir);
  }

  SUBCASE("infer-stream emits one line per timestep") {
    const fs::path csv = fresh_dir("pipeline-stream") / "stream.csv";
    REQUIRE(run({"infer-stream", "--data", manifest, "--checkpoint",
                 (run_dir / "checkpoint.txt").string(), "--out", csv.string(),
                 "--sample", "c0-s0"}) == 0);
    std::ifstream in(csv);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 1 + 24);  // header + one line per time bin
    REQUIRE(run({"infer-stream", "--data", manifest, "--checkpoint",
                 (run_dir / "checkpoint.txt").string(), "--out", csv.string(),
                 "--sample", "c0-s0", "--time-weighted", "--psi", "10"}) == 0);
    fs::remove_all(csv.parent_path());
  }

  SUBCASE("mismatched dataset and checkpoint is a validation error") {
    const fs::path other_data = fresh_dir("pipeline-mismatch");
    REQUIRE(run({"gen-synth", "--out", other_data.string(), "--classes", "3",
                 "--taxels", "10", "--steps", "24", "--per-class", "4"}) == 0);
    const fs::path eval_dir = fresh_dir("pipeline-mismatch-eval");
    CHECK(run({"eval", "--data", (other_data / "manifest.txt").string(),
               "--checkpoint", (run_dir / "checkpoint.txt").string(), "--out",
               eval_dir.string()}) == locsnn::cli::kValidationError);
    fs::remove_all(other_data);
    fs::remove_all(eval_dir);
  }

  SUBCASE("missing files are io errors") {
    const fs::path eval_dir = fresh_dir("pipeline-missing");
    CHECK(run({"eval", "--data", manifest, "--checkpoint", "/nonexistent.ckpt",
               "--out", eval_dir.string()}) == locsnn::cli::kIoError);
    fs::remove_all(eval_dir);
  }

  SUBCASE("multi-round training reports per-round accuracies") {
    const fs::path rounds_dir = fresh_dir("pipeline-rounds");
    REQUIRE(run({"train", "--data", manifest, "--out", rounds_dir.string(),
                 "--model", "lsrm", "--hidden", "8", "--epochs", "1", "--rounds",
                 "2"}) == 0);
    CHECK(fs::exists(rounds_dir / "checkpoint-round0.txt"));
    CHECK(fs::exists(rounds_dir / "checkpoint-round1.txt"));
    const std::string summary = slurp(rounds_dir / "rounds-summary.csv");
    CHECK(summary.find("round,final_test_accuracy") != std::string::npos);
    CHECK(summary.find("\n0,") != std::string::npos);
    CHECK(summary.find("\n1,") != std::string::npos);
    fs::remove_all(rounds_dir);
  }

  SUBCASE("checkpoints reload exactly") {
    locsnn::Model model = locsnn::load_model(run_dir / "checkpoint.txt");
    CHECK(model.classes == 3);
    CHECK(model.taxels == 12);
    CHECK(model.steps == 24);
    const fs::path copy = run_dir / "copy.txt";
    locsnn::save_model(copy, model);
    CHECK(slurp(copy) == slurp(run_dir / "checkpoint.txt"));
  }

  fs::remove_all(data_dir);
  fs::remove_all(run_dir);
}

TEST_CASE("config file provides defaults and flags win") {
  const fs::path dir = fresh_dir("config");
  const fs::path config = dir / "gen.conf";
  {
    std::ofstream out(config);
    out << "[gen-synth]\n";
    out << "classes=5\ntaxels=15\nsteps=20\nper-class=3\nseed=9\n";
    out << "out=" << (dir / "ignored").string() << "\n";
  }
  const fs::path out_dir = dir / "data";
  // The --out flag overrides the config file's value.
  REQUIRE(run({"--config", config.string(), "gen-synth", "--out",
               out_dir.string()}) == 0);
  locsnn::Dataset ds = locsnn::read_dataset(out_dir / "manifest.txt");
  CHECK(ds.classes == 5);
  CHECK(ds.channels == 15);
  CHECK(ds.steps == 20);
  CHECK(ds.samples.size() == 15);
  fs::remove_all(dir);
}

TEST_CASE("run manifests reload as config files") {
  const fs::path dir = fresh_dir("manifest-reuse");
  REQUIRE(run(gen_args(dir)) == 0);
  const fs::path replay_dir = fresh_dir("manifest-replay");
  REQUIRE(run({"--config", (dir / "run-config.txt").string(), "gen-synth", "--out",
               replay_dir.string()}) == 0);
  CHECK(slurp(dir / "manifest.txt") == slurp(replay_dir / "manifest.txt"));
  fs::remove_all(dir);
  fs::remove_all(replay_dir);
}
