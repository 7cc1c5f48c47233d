#include "locsnn/dataset_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "locsnn/errors.hpp"

namespace locsnn {

namespace {

constexpr const char* kMagic = "locsnn-dataset v1";

bool is_skippable(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;  // blank
}

[[noreturn]] void fail_parse(const std::filesystem::path& file, int line_no,
                             const std::string& msg) {
  throw ValidationError(file.string() + ":" + std::to_string(line_no) + ": " + msg);
}

SpikeTensor read_events_file(const std::filesystem::path& path, int channels, int steps) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open event file " + path.string());
  SpikeTensor tensor(channels, steps);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    int taxel = 0, step = 0;
    char comma = 0;
    std::istringstream ls(line);
    if (!(ls >> taxel >> comma >> step) || comma != ',') {
      fail_parse(path, line_no, "expected 'taxel,step', got '" + line + "'");
    }
    if (taxel < 0 || taxel >= channels || step < 0 || step >= steps) {
      fail_parse(path, line_no, "event (" + std::to_string(taxel) + "," +
                                    std::to_string(step) + ") outside grid " +
                                    std::to_string(channels) + "x" + std::to_string(steps));
    }
    tensor.set(taxel, step, true);
  }
  return tensor;
}

}  // namespace

Dataset read_dataset(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open manifest " + manifest_path.string());

  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    throw ValidationError(manifest_path.string() + ": missing header '" +
                          std::string(kMagic) + "'");
  }

  Dataset dataset;
  const std::filesystem::path base = manifest_path.parent_path();
  int line_no = 1;
  bool have_channels = false, have_steps = false, have_classes = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "channels") {
      if (!(ls >> dataset.channels) || dataset.channels < 1) {
        fail_parse(manifest_path, line_no, "channels must be a positive integer");
      }
      have_channels = true;
    } else if (key == "steps") {
      if (!(ls >> dataset.steps) || dataset.steps < 1) {
        fail_parse(manifest_path, line_no, "steps must be a positive integer");
      }
      have_steps = true;
    } else if (key == "classes") {
      if (!(ls >> dataset.classes) || dataset.classes < 1) {
        fail_parse(manifest_path, line_no, "classes must be a positive integer");
      }
      have_classes = true;
    } else if (key == "sample") {
      if (!have_channels || !have_steps || !have_classes) {
        fail_parse(manifest_path, line_no,
                   "sample listed before channels/steps/classes were declared");
      }
      std::string id, rel_path;
      int label = 0;
      if (!(ls >> id >> label >> rel_path)) {
        fail_parse(manifest_path, line_no, "expected 'sample <id> <label> <path>'");
      }
      if (label < 0 || label >= dataset.classes) {
        fail_parse(manifest_path, line_no, "label " + std::to_string(label) +
                                               " outside [0, " +
                                               std::to_string(dataset.classes) + ")");
      }
      LabeledSample sample;
      sample.meta = SampleMeta{label, id};
      sample.tensor = read_events_file(base / rel_path, dataset.channels, dataset.steps);
      dataset.samples.push_back(std::move(sample));
    } else {
      fail_parse(manifest_path, line_no, "unknown directive '" + key + "'");
    }
  }
  return dataset;
}

void write_dataset(const std::filesystem::path& manifest_path, const Dataset& dataset) {
  if (dataset.channels < 1 || dataset.steps < 1 || dataset.classes < 1) {
    throw ValidationError("write_dataset: dataset shape is undeclared");
  }
  const std::filesystem::path base = manifest_path.parent_path();
  const std::filesystem::path events_dir = base / "events";
  std::error_code ec;
  std::filesystem::create_directories(events_dir, ec);
  if (ec) throw IoError("cannot create " + events_dir.string() + ": " + ec.message());

  std::ofstream manifest(manifest_path);
  if (!manifest) throw IoError("cannot write manifest " + manifest_path.string());
  manifest << kMagic << "\n";
  manifest << "channels " << dataset.channels << "\n";
  manifest << "steps " << dataset.steps << "\n";
  manifest << "classes " << dataset.classes << "\n";

  for (const LabeledSample& sample : dataset.samples) {
    if (sample.meta.label < 0 || sample.meta.label >= dataset.classes) {
      throw ValidationError("sample " + sample.meta.sample_id + " has label " +
                            std::to_string(sample.meta.label) + " outside [0, " +
                            std::to_string(dataset.classes) + ")");
    }
    if (sample.tensor.channels() != dataset.channels ||
        sample.tensor.steps() != dataset.steps) {
      throw ValidationError("sample " + sample.meta.sample_id +
                            " does not match the declared shape");
    }
    const std::string rel = "events/" + sample.meta.sample_id + ".events";
    manifest << "sample " << sample.meta.sample_id << " " << sample.meta.label << " "
             << rel << "\n";

    std::ofstream events(base / rel);
    if (!events) throw IoError("cannot write " + (base / rel).string());
    for (int c = 0; c < sample.tensor.channels(); ++c) {
      for (int s = 0; s < sample.tensor.steps(); ++s) {
        if (sample.tensor.at(c, s)) events << c << "," << s << "\n";
      }
    }
  }
}

}  // namespace locsnn
