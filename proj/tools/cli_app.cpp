#include "cli_app.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "locsnn/checkpoint.hpp"
#include "locsnn/dataset_io.hpp"
#include "locsnn/energy.hpp"
#include "locsnn/errors.hpp"
#include "locsnn/location_order.hpp"
#include "locsnn/metrics.hpp"
#include "locsnn/model.hpp"
#include "locsnn/synth.hpp"
#include "locsnn/trainer.hpp"

namespace locsnn::cli {

namespace {

namespace fs = std::filesystem;

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

// Every artifact-producing run records its resolved options (defaults +
// config file + flags) next to its outputs. The section header makes the
// manifest directly reusable via --config.
void write_run_config(const CLI::App& sub, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "# resolved " << sub.get_name() << " configuration\n";
  out << "[" << sub.get_name() << "]\n";
  out << sub.config_to_str(true, true);
}

struct KernelFlags {
  KernelConfig shared;
  double loc_tau_s = -1.0;  // < 0 means "same as the time branch"
  double loc_tau_r = -1.0;

  void attach(CLI::App* sub) {
    sub->add_option("--theta", shared.theta, "Firing threshold")
        ->capture_default_str();
    sub->add_option("--tau-s", shared.tau_s, "Incoming-kernel time constant (steps)")
        ->capture_default_str();
    sub->add_option("--tau-r", shared.tau_r, "Refractory time constant (steps)")
        ->capture_default_str();
    sub->add_option("--kernel-len", shared.kernel_len,
                    "Kernel truncation in steps (0 = derive from the axis length)")
        ->capture_default_str();
    sub->add_option("--surr-alpha", shared.surr_alpha, "Surrogate-gradient scale")
        ->capture_default_str();
    sub->add_option("--surr-beta", shared.surr_beta, "Surrogate-gradient sharpness")
        ->capture_default_str();
    sub->add_option("--delay", shared.delay, "Transmission delay inside the kernel")
        ->capture_default_str();
    sub->add_option("--loc-tau-s", loc_tau_s,
                    "Location-branch tau_s override (default: same as --tau-s)");
    sub->add_option("--loc-tau-r", loc_tau_r,
                    "Location-branch tau_r override (default: same as --tau-r)");
  }

  KernelConfig time_kernel() const { return shared; }
  KernelConfig location_kernel() const {
    KernelConfig cfg = shared;
    if (loc_tau_s > 0.0) cfg.tau_s = loc_tau_s;
    if (loc_tau_r > 0.0) cfg.tau_r = loc_tau_r;
    return cfg;
  }
};

// ---------------------------------------------------------------- gen-synth

struct GenSynthCmd {
  SynthSpec spec;
  std::string out_dir;

  void attach(CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output dataset directory")->required();
    sub->add_option("--classes", spec.classes, "Number of classes")
        ->capture_default_str();
    sub->add_option("--taxels", spec.taxels, "Taxels per sample")
        ->capture_default_str();
    sub->add_option("--steps", spec.steps, "Time bins per sample")
        ->capture_default_str();
    sub->add_option("--per-class", spec.samples_per_class, "Samples per class")
        ->capture_default_str();
    sub->add_option("--base-rate", spec.base_rate, "Background spike probability")
        ->capture_default_str();
    sub->add_option("--pattern-strength", spec.pattern_strength,
                    "Per-motif-cell spike probability")
        ->capture_default_str();
    sub->add_option("--jitter", spec.jitter, "Temporal motif jitter, +/- steps")
        ->capture_default_str();
    sub->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
  }

  int run(const CLI::App& sub) const {
    const fs::path dir(out_dir);
    ensure_dir(dir);
    write_dataset(dir / "manifest.txt", generate(spec));
    write_run_config(sub, dir / "run-config.txt");
    std::cout << "wrote " << spec.classes * spec.samples_per_class << " samples to "
              << (dir / "manifest.txt").string() << "\n";
    return kOk;
  }
};

// -------------------------------------------------------------------- train

struct TrainCmd {
  std::string data_path;
  std::string out_dir;
  std::string model_name = "hybrid";
  std::string order_name = "loop";
  int hidden = 32;
  double init_gain = 0.0;
  int rounds = 1;
  bool resplit = false;
  std::uint64_t seed = 1;
  TrainConfig train_cfg;
  KernelFlags kernels;

  void attach(CLI::App* sub) {
    sub->add_option("--data", data_path, "Dataset manifest")->required();
    sub->add_option("--out", out_dir, "Output directory")->required();
    sub->add_option("--model", model_name, "Model kind: tsrm, lsrm, or hybrid")
        ->capture_default_str();
    sub->add_option("--order", order_name, "Location order: loop, arch, or whorl")
        ->capture_default_str();
    sub->add_option("--hidden", hidden, "Hidden layer width")->capture_default_str();
    sub->add_option("--init-gain", init_gain,
                    "Weight init gain (0 = 10 * theta)")
        ->capture_default_str();
    sub->add_option("--lambda", train_cfg.lambda, "Location-count balance")
        ->capture_default_str();
    sub->add_option("--lr", train_cfg.lr, "Learning rate")->capture_default_str();
    sub->add_option("--l2", train_cfg.l2, "Weight-decay coefficient")
        ->capture_default_str();
    sub->add_option("--epochs", train_cfg.epochs, "Training epochs")
        ->capture_default_str();
    sub->add_option("--batch-size", train_cfg.batch_size, "Batch size")
        ->capture_default_str();
    sub->add_option("--r-true", train_cfg.r_true,
                    "Desired spike rate for the correct class")
        ->capture_default_str();
    sub->add_option("--r-false", train_cfg.r_false,
                    "Desired spike rate for the other classes")
        ->capture_default_str();
    sub->add_option("--split-frac", train_cfg.split_frac, "Training fraction")
        ->capture_default_str();
    sub->add_option("--seed", seed, "Seed for init, split, and shuffling")
        ->capture_default_str();
    sub->add_option("--rounds", rounds, "Repetitions with re-seeded weights")
        ->capture_default_str();
    sub->add_flag("--resplit", resplit,
                  "Re-split the data each round instead of re-seeding only");
    sub->add_option("--jobs", train_cfg.jobs, "Worker threads per batch")
        ->capture_default_str();
    kernels.attach(sub);
  }

  int run(const CLI::App& sub) const {
    const fs::path dir(out_dir);
    ensure_dir(dir);
    write_run_config(sub, dir / "run-config.txt");

    const Dataset dataset = read_dataset(data_path);

    ModelSpec model_spec;
    model_spec.kind = model_kind_from_string(model_name);
    model_spec.hidden = hidden;
    model_spec.order_name = order_name;
    model_spec.time_kernel = kernels.time_kernel();
    model_spec.location_kernel = kernels.location_kernel();
    model_spec.init_gain = init_gain;

    std::ofstream summary;
    if (rounds > 1) {
      summary = open_out(dir / "rounds-summary.csv");
      summary << "round,final_test_accuracy\n";
    }

    double acc_sum = 0.0, acc_sq_sum = 0.0;
    bool any_diverged = false;
    for (int round = 0; round < rounds; ++round) {
      TrainConfig cfg = train_cfg;
      cfg.seed = resplit ? seed + round : seed;
      model_spec.seed = seed + round;

      Model model = build_model(model_spec, dataset.classes, dataset.channels,
                                dataset.steps);
      TrainResult result = train(model, dataset, cfg);

      const std::string tag = rounds > 1 ? "-round" + std::to_string(round) : "";
      save_model(dir / ("checkpoint" + tag + ".txt"), model);
      std::ofstream curves = open_out(dir / ("curves" + tag + ".csv"));
      curves << "epoch,train_loss,train_accuracy,test_accuracy\n";
      for (const EpochRecord& r : result.curves) {
        curves << r.epoch << "," << format_g17(r.train_loss) << ","
               << format_g17(r.train_accuracy) << "," << format_g17(r.test_accuracy)
               << "\n";
      }

      if (result.diverged) {
        any_diverged = true;
        std::cerr << "training diverged in epoch " << result.divergence_epoch
                  << "; checkpoint holds the last finite weights\n";
        continue;
      }
      const double final_acc = result.curves.back().test_accuracy;
      acc_sum += final_acc;
      acc_sq_sum += final_acc * final_acc;
      if (rounds > 1) summary << round << "," << format_g17(final_acc) << "\n";
      std::cout << "round " << round << ": test accuracy "
                << format_g17(final_acc) << "\n";
    }
    if (any_diverged) return kTrainingError;
    if (rounds > 1) {
      const double mean = acc_sum / rounds;
      const double var = acc_sq_sum / rounds - mean * mean;
      std::cout << "mean test accuracy " << format_g17(mean) << " (std "
                << format_g17(std::sqrt(std::max(0.0, var))) << ") over " << rounds
                << " rounds\n";
    }
    return kOk;
  }
};

// --------------------------------------------------------------------- eval

struct EvalCmd {
  std::string data_path;
  std::string checkpoint_path;
  std::string out_dir;
  int jobs = 1;

  void attach(CLI::App* sub) {
    sub->add_option("--data", data_path, "Dataset manifest")->required();
    sub->add_option("--checkpoint", checkpoint_path, "Model checkpoint")->required();
    sub->add_option("--out", out_dir, "Output directory")->required();
    sub->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
  }

  int run(const CLI::App& sub) const {
    const fs::path dir(out_dir);
    ensure_dir(dir);
    const Model model = load_model(checkpoint_path);
    const Dataset dataset = read_dataset(data_path);
    if (dataset.channels != model.taxels || dataset.steps != model.steps ||
        dataset.classes != model.classes) {
      throw ValidationError("dataset shape does not match the checkpoint (" +
                            std::to_string(dataset.channels) + "x" +
                            std::to_string(dataset.steps) + "/" +
                            std::to_string(dataset.classes) + " vs model " +
                            std::to_string(model.taxels) + "x" +
                            std::to_string(model.steps) + "/" +
                            std::to_string(model.classes) + ")");
    }
    const Metrics metrics = evaluate(model, dataset, jobs);

    std::ofstream report = open_out(dir / "metrics.txt");
    report << "samples " << dataset.samples.size() << "\n";
    report << "accuracy " << format_g17(metrics.accuracy) << "\n";
    for (int k = 0; k < model.classes; ++k) {
      report << "class " << k << " precision " << format_g17(metrics.precision[k])
             << " recall " << format_g17(metrics.recall[k]) << "\n";
    }
    write_confusion_csv(dir / "confusion.csv", metrics.confusion);
    write_run_config(sub, dir / "run-config.txt");
    std::cout << "accuracy " << format_g17(metrics.accuracy) << " on "
              << dataset.samples.size() << " samples\n";
    return kOk;
  }
};

// ------------------------------------------------------------- infer-stream

struct InferStreamCmd {
  std::string data_path;
  std::string checkpoint_path;
  std::string out_path;
  std::string sample_id;
  bool time_weighted = false;
  double psi = 10.0;

  void attach(CLI::App* sub) {
    sub->add_option("--data", data_path, "Dataset manifest")->required();
    sub->add_option("--checkpoint", checkpoint_path, "Model checkpoint")->required();
    sub->add_option("--out", out_path, "Output CSV file")->required();
    sub->add_option("--sample", sample_id, "Restrict to one sample id");
    sub->add_flag("--time-weighted", time_weighted,
                  "Blend the branches with the sigmoid schedule");
    sub->add_option("--psi", psi, "Sharpness of the time-weighted schedule")
        ->capture_default_str();
  }

  int run(const CLI::App& sub) const {
    const Model model = load_model(checkpoint_path);
    if (model.kind != ModelKind::kHybrid) {
      throw ValidationError("timestep-wise inference requires a hybrid checkpoint");
    }
    const Dataset dataset = read_dataset(data_path);
    std::ofstream out = open_out(out_path);
    out << "sample_id,t";
    for (int k = 0; k < model.classes; ++k) out << ",score_" << k;
    out << ",prediction\n";

    bool matched = false;
    for (const LabeledSample& sample : dataset.samples) {
      if (!sample_id.empty() && sample.meta.sample_id != sample_id) continue;
      matched = true;
      StreamingSession session(model, sample.tensor);
      for (int t = 1; t <= model.steps; ++t) {
        const TimestepOutput step = session.advance();
        out << sample.meta.sample_id << "," << t;
        if (time_weighted) {
          const TimeWeightedOutput weighted =
              time_weighted_output(step.o1, step.o2, psi, t, model.steps);
          for (int k = 0; k < model.classes; ++k) {
            out << "," << format_g17(weighted.class_scores[k]);
          }
          out << "," << weighted.prediction << "\n";
        } else {
          for (int k = 0; k < model.classes; ++k) {
            out << "," << step.o.channel_spikes(k);
          }
          out << "," << step.prediction << "\n";
        }
      }
    }
    if (!matched) {
      throw ValidationError(sample_id.empty() ? "dataset has no samples"
                                              : "no sample with id '" + sample_id + "'");
    }
    write_run_config(sub, fs::path(out_path + ".run-config.txt"));
    return kOk;
  }
};

// --------------------------------------------------------------------- cost

struct CostCmd {
  std::string data_path;
  std::string checkpoint_path;
  std::string out_dir;
  std::string model_name = "hybrid";
  std::string order_name = "loop";
  int hidden = 32;
  std::uint64_t seed = 1;
  int jobs = 1;

  void attach(CLI::App* sub) {
    sub->add_option("--data", data_path, "Dataset manifest")->required();
    sub->add_option("--out", out_dir, "Output directory")->required();
    sub->add_option("--checkpoint", checkpoint_path,
                    "Model checkpoint (omit to count a freshly initialized model)");
    sub->add_option("--model", model_name, "Model kind when no checkpoint is given")
        ->capture_default_str();
    sub->add_option("--order", order_name, "Location order when no checkpoint is given")
        ->capture_default_str();
    sub->add_option("--hidden", hidden, "Hidden width when no checkpoint is given")
        ->capture_default_str();
    sub->add_option("--seed", seed, "Init seed when no checkpoint is given")
        ->capture_default_str();
    sub->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
  }

  int run(const CLI::App& sub) const {
    const fs::path dir(out_dir);
    ensure_dir(dir);
    const Dataset dataset = read_dataset(data_path);

    Model model = [&] {
      if (!checkpoint_path.empty()) return load_model(checkpoint_path);
      ModelSpec spec;
      spec.kind = model_kind_from_string(model_name);
      spec.hidden = hidden;
      spec.order_name = order_name;
      spec.seed = seed;
      return build_model(spec, dataset.classes, dataset.channels, dataset.steps);
    }();
    if (dataset.channels != model.taxels || dataset.steps != model.steps) {
      throw ValidationError("dataset shape does not match the model");
    }

    OpReport report = count_snn_ops(model, dataset, jobs);
    const int model_hidden = model.time_branch
                                 ? model.time_branch->layer0.out_channels()
                                 : model.location_branch->layer0.out_channels();
    report.ann_mac_ops = dense_equivalent_ops(model, model_hidden) *
                         static_cast<long long>(dataset.samples.size());
    report.compression_ratio = compression(report.snn_accumulate_ops, report.ann_mac_ops);

    std::ofstream csv = open_out(dir / "cost.csv");
    csv << "layer,input_spikes,fan_out,accumulate_ops\n";
    for (const LayerOps& layer : report.per_layer) {
      csv << layer.name << "," << layer.input_spikes << "," << layer.fan_out << ","
          << layer.accumulate_ops << "\n";
    }

    std::ofstream txt = open_out(dir / "cost.txt");
    txt << "samples " << dataset.samples.size() << "\n";
    for (const LayerOps& layer : report.per_layer) {
      txt << layer.name << ": " << layer.input_spikes << " spikes x " << layer.fan_out
          << " fan-out = " << layer.accumulate_ops << " accumulate ops\n";
    }
    txt << "snn_accumulate_ops " << report.snn_accumulate_ops << "\n";
    txt << "snn_multiply_ops " << report.snn_multiply_ops << "\n";
    txt << "ann_dense_mac_ops " << report.ann_mac_ops << "\n";
    txt << "compression_ratio " << format_g17(report.compression_ratio) << "\n";
    txt << "# accumulate ops follow the presynaptic-spike x fan-out convention;\n";
    txt << "# kernel-table arithmetic and refractory additions are not counted.\n";

    write_run_config(sub, dir / "run-config.txt");
    std::cout << "snn ops " << report.snn_accumulate_ops << ", dense-equivalent macs "
              << report.ann_mac_ops << ", ratio "
              << format_g17(report.compression_ratio) << "\n";
    return kOk;
  }
};

// ------------------------------------------------------------------- orders

struct OrdersCmd {
  std::string out_path;

  void attach(CLI::App* sub) {
    sub->add_option("--out", out_path, "Also write the listing to this file");
  }

  static void print(std::ostream& out) {
    // 1-based taxel indices, matching the printed sensor layout.
    for (const char* name : {"arch", "whorl", "loop"}) {
      const LocationOrder& order = builtin_order(name);
      out << name << ": ";
      for (int i = 0; i < order.size(); ++i) {
        out << (i ? ", " : "") << order.taxel_at(i) + 1;
      }
      out << "\n";
    }
  }

  int run(const CLI::App& sub) const {
    print(std::cout);
    if (!out_path.empty()) {
      std::ofstream out = open_out(out_path);
      print(out);
      write_run_config(sub, fs::path(out_path + ".run-config.txt"));
    }
    return kOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Event-driven spiking neural networks with time- and "
               "location-domain neurons"};
  app.name("locsnn");
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "Config file with [subcommand] sections; flags win over file values");

  GenSynthCmd gen_synth;
  TrainCmd train_cmd;
  EvalCmd eval_cmd;
  InferStreamCmd infer_cmd;
  CostCmd cost_cmd;
  OrdersCmd orders_cmd;

  CLI::App* gen_sub = app.add_subcommand("gen-synth", "Generate a synthetic dataset");
  gen_synth.attach(gen_sub);
  CLI::App* train_sub = app.add_subcommand("train", "Train a model");
  train_cmd.attach(train_sub);
  CLI::App* eval_sub = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval_cmd.attach(eval_sub);
  CLI::App* infer_sub =
      app.add_subcommand("infer-stream", "Timestep-wise streaming inference");
  infer_cmd.attach(infer_sub);
  CLI::App* cost_sub = app.add_subcommand("cost", "Synaptic-operation cost report");
  cost_cmd.attach(cost_sub);
  CLI::App* orders_sub =
      app.add_subcommand("orders", "Print the builtin location orders (1-based)");
  orders_cmd.attach(orders_sub);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*gen_sub) return gen_synth.run(*gen_sub);
    if (*train_sub) return train_cmd.run(*train_sub);
    if (*eval_sub) return eval_cmd.run(*eval_sub);
    if (*infer_sub) return infer_cmd.run(*infer_sub);
    if (*cost_sub) return cost_cmd.run(*cost_sub);
    if (*orders_sub) return orders_cmd.run(*orders_sub);
  } catch (const DivergenceError& e) {
    std::cerr << "training error: " << e.what() << "\n";
    return kTrainingError;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kValidationError;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kTrainingError;
  }
  return kUsageError;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? argc - 1 : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace locsnn::cli
