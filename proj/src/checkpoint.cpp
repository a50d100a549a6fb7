#include "orcadrl/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace orcadrl {

namespace {

constexpr const char* kMagic = "orcadrl-checkpoint";
constexpr int kVersion = 1;

void append_block(std::string& out, const char* name,
                  const Eigen::VectorXd& p) {
  out += name;
  out += ' ';
  out += std::to_string(p.size());
  out += '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    // 17 significant digits: doubles survive the text round trip exactly.
    std::snprintf(buf, sizeof(buf), "%.17g", p[i]);
    out += buf;
    out += (i + 1) % 8 == 0 ? '\n' : ' ';
  }
  if (p.size() % 8 != 0) out += '\n';
}

Eigen::VectorXd read_block(std::istringstream& in, const std::string& name) {
  std::string tag;
  long count = -1;
  if (!(in >> tag >> count) || tag != name || count < 0) {
    throw std::runtime_error("checkpoint: bad block header for " + name);
  }
  Eigen::VectorXd p(count);
  for (long i = 0; i < count; ++i) {
    if (!(in >> p[i])) {
      throw std::runtime_error("checkpoint: truncated block " + name);
    }
  }
  return p;
}

}  // namespace

std::string checkpoint_to_text(const PolicyBundle& b) {
  std::string out;
  out += kMagic;
  out += ' ';
  out += std::to_string(kVersion);
  out += '\n';
  char buf[96];
  std::snprintf(buf, sizeof(buf), "state_dim %d\nfeature_dim %d\n",
                b.state_dim, b.feature_dim);
  out += buf;
  std::snprintf(buf, sizeof(buf), "delta %.17g\nencoder_seed %llu\n", b.delta,
                static_cast<unsigned long long>(b.encoder_seed));
  out += buf;
  append_block(out, "policy", b.policy.params());
  append_block(out, "value", b.value.params());
  append_block(out, "inverse", b.inverse_net.params());
  append_block(out, "forward", b.forward_net.params());
  return out;
}

PolicyBundle checkpoint_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string magic, key;
  int version = 0;
  if (!(in >> magic >> version) || magic != kMagic || version != kVersion) {
    throw std::runtime_error("checkpoint: unrecognized header");
  }
  int state_dim = 0, feature_dim = 0;
  double delta = 0.0;
  unsigned long long encoder_seed = 0;
  if (!(in >> key >> state_dim) || key != "state_dim" || state_dim <= 0 ||
      !(in >> key >> feature_dim) || key != "feature_dim" ||
      feature_dim <= 0 || !(in >> key >> delta) || key != "delta" ||
      !(in >> key >> encoder_seed) || key != "encoder_seed") {
    throw std::runtime_error("checkpoint: malformed preamble");
  }

  // A seed-zero bundle builds the fixed architecture; parameters and the
  // encoder are then overwritten from the file.
  PolicyBundle b(state_dim, 0, delta);
  if (feature_dim != b.feature_dim) {
    throw std::runtime_error("checkpoint: unsupported feature dimension");
  }
  b.encoder_seed = encoder_seed;
  b.encoder = FeatureProjector(state_dim, feature_dim, encoder_seed);

  const Eigen::VectorXd pp = read_block(in, "policy");
  const Eigen::VectorXd pv = read_block(in, "value");
  const Eigen::VectorXd pa = read_block(in, "inverse");
  const Eigen::VectorXd ps = read_block(in, "forward");
  if (pp.size() != b.policy.param_count() ||
      pv.size() != b.value.param_count() ||
      pa.size() != b.inverse_net.param_count() ||
      ps.size() != b.forward_net.param_count()) {
    throw std::runtime_error("checkpoint: parameter count mismatch");
  }
  b.policy.set_params(pp);
  b.value.set_params(pv);
  b.inverse_net.set_params(pa);
  b.forward_net.set_params(ps);
  return b;
}

void save_checkpoint(const std::string& path, const PolicyBundle& bundle) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("checkpoint: cannot write " + path);
  f << checkpoint_to_text(bundle);
}

PolicyBundle load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("checkpoint: cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return checkpoint_from_text(ss.str());
}

}  // namespace orcadrl
