#include "locsnn/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "locsnn/errors.hpp"

namespace locsnn {

namespace {

constexpr const char* kMagic = "locsnn-checkpoint v1";

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double parse_double(const std::string& token, const std::filesystem::path& file) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + token.size()) {
    throw ValidationError(file.string() + ": bad numeric token '" + token + "'");
  }
  return v;
}

void write_kernel(std::ostream& out, const KernelConfig& cfg) {
  out << "kernel " << format_double(cfg.tau_s) << " " << format_double(cfg.tau_r) << " "
      << format_double(cfg.theta) << " " << cfg.kernel_len << " "
      << format_double(cfg.surr_alpha) << " " << format_double(cfg.surr_beta) << " "
      << cfg.delay << "\n";
}

void write_branch(std::ostream& out, const char* name, const BranchNet& branch) {
  out << "branch " << name << "\n";
  if (branch.order) {
    out << "sensors " << branch.sensors << "\n";
    out << "order " << branch.order->size();
    for (int taxel : branch.order->indices()) out << " " << taxel;
    out << "\n";
  }
  write_kernel(out, branch.layer0.config());
  for (const DenseSpikingLayer* layer : {&branch.layer0, &branch.layer1}) {
    out << "layer " << layer->out_channels() << " " << layer->in_channels() << "\n";
    const Eigen::MatrixXd& w = layer->weights();
    for (int i = 0; i < w.rows(); ++i) {
      for (int j = 0; j < w.cols(); ++j) {
        out << (j ? " " : "") << format_double(w(i, j));
      }
      out << "\n";
    }
  }
}

class Reader {
 public:
  Reader(std::istream& in, std::filesystem::path path)
      : in_(in), path_(std::move(path)) {}

  std::string next_token() {
    std::string token;
    if (!(in_ >> token)) {
      throw ValidationError(path_.string() + ": truncated checkpoint");
    }
    return token;
  }

  void expect(const std::string& keyword) {
    const std::string token = next_token();
    if (token != keyword) {
      throw ValidationError(path_.string() + ": expected '" + keyword + "', got '" +
                            token + "'");
    }
  }

  int next_int() {
    const std::string token = next_token();
    try {
      std::size_t used = 0;
      const int v = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      return v;
    } catch (const std::exception&) {
      throw ValidationError(path_.string() + ": bad integer token '" + token + "'");
    }
  }

  double next_double() { return parse_double(next_token(), path_); }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::istream& in_;
  std::filesystem::path path_;
};

// Reads the fields after the 'kernel' keyword.
KernelConfig read_kernel_fields(Reader& reader) {
  KernelConfig cfg;
  cfg.tau_s = reader.next_double();
  cfg.tau_r = reader.next_double();
  cfg.theta = reader.next_double();
  cfg.kernel_len = reader.next_int();
  cfg.surr_alpha = reader.next_double();
  cfg.surr_beta = reader.next_double();
  cfg.delay = reader.next_int();
  cfg.validate();
  return cfg;
}

Eigen::MatrixXd read_layer(Reader& reader) {
  reader.expect("layer");
  const int rows = reader.next_int();
  const int cols = reader.next_int();
  if (rows < 1 || cols < 1) {
    throw ValidationError(reader.path().string() + ": invalid layer shape");
  }
  Eigen::MatrixXd w(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      w(i, j) = reader.next_double();
    }
  }
  return w;
}

BranchNet read_branch(Reader& reader, RecurrenceAxis axis, const std::string& token_after_branch) {
  std::optional<LocationOrder> order;
  int sensors = 1;
  std::string token = token_after_branch;
  if (axis == RecurrenceAxis::kLocation) {
    if (token != "sensors") {
      throw ValidationError(reader.path().string() + ": location branch needs sensors");
    }
    sensors = reader.next_int();
    reader.expect("order");
    const int n = reader.next_int();
    std::vector<int> indices(n);
    for (int& v : indices) v = reader.next_int();
    order = LocationOrder(std::move(indices));
    token = reader.next_token();
  }
  if (token != "kernel") {
    throw ValidationError(reader.path().string() + ": expected 'kernel', got '" + token +
                          "'");
  }
  const KernelConfig cfg = read_kernel_fields(reader);

  Eigen::MatrixXd w0 = read_layer(reader);
  Eigen::MatrixXd w1 = read_layer(reader);
  return BranchNet{axis, DenseSpikingLayer(std::move(w0), cfg),
                   DenseSpikingLayer(std::move(w1), cfg), std::move(order), sensors};
}

}  // namespace

void save_model(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out << kMagic << "\n";
  out << "kind " << to_string(model.kind) << "\n";
  out << "classes " << model.classes << "\n";
  out << "taxels " << model.taxels << "\n";
  out << "steps " << model.steps << "\n";
  if (model.time_branch) write_branch(out, "time", *model.time_branch);
  if (model.location_branch) write_branch(out, "location", *model.location_branch);
  out << "end\n";
  if (!out) throw IoError("failed while writing checkpoint " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::string header;
  std::getline(in, header);
  if (header != kMagic) {
    throw ValidationError(path.string() + ": missing header '" + std::string(kMagic) +
                          "'");
  }
  Reader reader(in, path);
  Model model;
  reader.expect("kind");
  model.kind = model_kind_from_string(reader.next_token());
  reader.expect("classes");
  model.classes = reader.next_int();
  reader.expect("taxels");
  model.taxels = reader.next_int();
  reader.expect("steps");
  model.steps = reader.next_int();

  std::string token = reader.next_token();
  while (token == "branch") {
    const std::string which = reader.next_token();
    const std::string next = reader.next_token();
    if (which == "time") {
      model.time_branch = read_branch(reader, RecurrenceAxis::kTime, next);
    } else if (which == "location") {
      model.location_branch = read_branch(reader, RecurrenceAxis::kLocation, next);
    } else {
      throw ValidationError(path.string() + ": unknown branch '" + which + "'");
    }
    token = reader.next_token();
  }
  if (token != "end") {
    throw ValidationError(path.string() + ": expected 'end', got '" + token + "'");
  }

  const bool needs_time = model.kind != ModelKind::kLsrm;
  const bool needs_loc = model.kind != ModelKind::kTsrm;
  if (needs_time != model.time_branch.has_value() ||
      needs_loc != model.location_branch.has_value()) {
    throw ValidationError(path.string() + ": branches do not match model kind");
  }
  return model;
}

}  // namespace locsnn
