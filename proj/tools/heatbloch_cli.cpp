// heatbloch: certify, invert and verify schlicht disks of heat maps.
#include "heatbloch/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

using namespace heatbloch;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
  std::optional<double> gamma, r0, sigma, a_m, K, eta_scale;
  std::optional<std::size_t> budget;
  std::optional<int> threads;
  std::string map, certificate, branch;
  std::vector<double> w;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON config file");
  cmd->add_option("--seed", o.seed, "64-bit sampling seed");
  cmd->add_option("--out", o.out, "write the report here instead of stdout");
  cmd->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--map", o.map, "heat map document");
  cmd->add_option("--budget", o.budget, "samples per ball maximisation");
  cmd->add_option("--threads", o.threads, "worker threads (results do not depend on it)");
}

void add_certify_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--gamma", o.gamma, "sequence parameter gamma > 1");
  cmd->add_option("--r0", o.r0, "initial radius; gamma is derived from it");
  cmd->add_option("--sigma", o.sigma, "contraction margin in (0, 1)");
  cmd->add_option("--a-m", o.a_m, "interior derivative constant");
  cmd->add_option("--k", o.K, "Takahashi constant K");
}

void add_certificate_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--certificate", o.certificate, "certify report holding the certificate");
  cmd->add_option("--branch", o.branch, "certificate to use")->check(CLI::IsMember({"origin", "interior"}));
}

RunConfig build_config(const Overrides& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (!o.map.empty()) cfg.map_source = o.map;
  if (o.budget) cfg.sample_budget = *o.budget;
  if (o.threads) cfg.threads = *o.threads;
  // A flag for gamma or r0 replaces whichever of the two the config gave.
  if (o.gamma) {
    cfg.gamma = o.gamma;
    cfg.r0.reset();
  }
  if (o.r0) {
    cfg.r0 = o.r0;
    if (!o.gamma) cfg.gamma.reset();
  }
  if (o.sigma) cfg.sigma = *o.sigma;
  if (o.a_m) cfg.a_m = o.a_m;
  if (o.K) cfg.K = o.K;
  if (o.eta_scale) cfg.eta_scale = *o.eta_scale;
  if (!o.certificate.empty()) cfg.certificate = o.certificate;
  if (!o.branch.empty()) cfg.branch = o.branch;
  return cfg;
}

int emit(const CommandResult& res, const Overrides& o) {
  const std::string text = o.format == "csv" ? render_csv(res) : render_json(res);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw InvalidInput("cli", "cannot write " + o.out);
    f << text;
  }
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schlicht disk certificates for heat maps"};
  app.require_subcommand(1);
  Overrides o;

  auto* estimate = app.add_subcommand("estimate-k", "sampled Takahashi constant over a radii grid");
  add_common(estimate, o);

  auto* certify = app.add_subcommand("certify", "radii sequence, certificates and bounds");
  add_common(certify, o);
  add_certify_flags(certify, o);

  auto* invert = app.add_subcommand("invert", "solve F(z) = w inside a certificate");
  add_common(invert, o);
  add_certificate_flags(invert, o);
  invert->add_option("--w", o.w, "target point (m+1 numbers)")->required()->expected(1, kMaxSpatialDim + 1);

  auto* verify = app.add_subcommand("verify", "check contraction and injectivity of a certificate");
  add_common(verify, o);
  add_certificate_flags(verify, o);
  verify->add_option("--eta-scale", o.eta_scale, "inflate eta before checking");

  auto* constants = app.add_subcommand("constants", "optimal gamma, sigma and the theorem bound table");
  constants->add_option("--out", o.out, "write the report here instead of stdout");
  constants->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (*constants) return emit(cmd_constants(), o);
    const RunConfig cfg = build_config(o);
    if (*estimate) return emit(cmd_estimate_k(cfg), o);
    if (*certify) return emit(cmd_certify(cfg), o);
    if (*invert) {
      Vector w = Eigen::Map<const Vector>(o.w.data(), static_cast<Eigen::Index>(o.w.size()));
      return emit(cmd_invert(cfg, w), o);
    }
    return emit(cmd_verify(cfg), o);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumericalFailure;
  }
}
