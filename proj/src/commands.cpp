#include "heatbloch/commands.hpp"

#include "heatbloch/bounds.hpp"
#include "heatbloch/contraction.hpp"
#include "heatbloch/linalg.hpp"
#include "heatbloch/radii.hpp"
#include "heatbloch/serialize.hpp"
#include "heatbloch/takahashi.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace heatbloch {

namespace {

using nlohmann::json;

SamplingOptions sampling_of(const RunConfig& cfg) {
  SamplingOptions opts;
  opts.budget = cfg.sample_budget;
  opts.seed = cfg.seed;
  opts.threads = cfg.threads;
  return opts;
}

HeatMap load_map(const RunConfig& cfg) {
  require(!cfg.map_source.empty(), "cli", "no map document given (config 'map' or --map)");
  return load_heat_map(cfg.map_source);
}

json record_json(const BallMaxRecord& rec) {
  return {{"r", rec.r}, {"M", rec.M}, {"beta", to_json(rec.beta)}, {"max_frob", rec.max_frob},
          {"sample_count", rec.sample_count}};
}

json wu_json(const WuReport& w) {
  return {{"lambda", w.lambda},
          {"Lambda", w.Lambda},
          {"det", w.det},
          {"K", w.K},
          {"slack_spread_m", w.spread_m_slack},
          {"slack_spread", w.spread_slack},
          {"slack_small_eigen", w.small_eigen_slack},
          {"k_admissible", w.k_admissible},
          {"holds", w.holds()}};
}

json certificate_json(const SchlichtCertificate& c) {
  return {{"branch", c.branch},
          {"n", c.n},
          {"beta", to_json(c.beta)},
          {"sigma", c.sigma},
          {"eta", c.eta},
          {"lambda_at_beta", c.lambda_at_beta},
          {"rho", c.rho},
          {"center_image", to_json(c.center_image)}};
}

SchlichtCertificate certificate_from_json(const json& j) {
  SchlichtCertificate c;
  c.branch = j.at("branch").get<std::string>();
  c.n = j.at("n").get<int>();
  c.beta = vector_from_json(j.at("beta"));
  c.sigma = j.at("sigma").get<double>();
  c.eta = j.at("eta").get<double>();
  c.lambda_at_beta = j.at("lambda_at_beta").get<double>();
  c.rho = j.at("rho").get<double>();
  c.center_image = vector_from_json(j.at("center_image"));
  return c;
}

json bounds_json(const BlochBoundReport& b) {
  return {{"m", b.m},
          {"K", b.K},
          {"a_m", b.a_m},
          {"gamma", b.gamma},
          {"sigma", b.sigma},
          {"r_gamma", b.r_gamma},
          {"M_rgamma", b.M_rgamma},
          {"bound_interior", b.bound_interior},
          {"bound_origin", b.bound_origin},
          {"bound_worst_case", b.bound_worst_case},
          {"theorem_bound", b.theorem_bound},
          {"theorem_bound_stated_denominator_m", b.theorem_bound_stated},
          {"better_branch", std::string(to_string(b.better_branch))}};
}

json header(const std::string& command) { return {{"schema_version", kSchemaVersion}, {"command", command}}; }

// Loads the map and chosen certificate out of a certify report.
struct StoredCertificate {
  HeatMap map;
  SchlichtCertificate cert;
};

StoredCertificate load_certificate(const RunConfig& cfg) {
  require(!cfg.certificate.empty(), "cli", "no certificate report given (config 'certificate' or --certificate)");
  std::ifstream in(cfg.certificate);
  if (!in) throw InvalidInput("cli", "cannot open certificate report " + cfg.certificate.string());
  json doc;
  try {
    in >> doc;
    require(doc.at("command") == "certify", "cli", "certificate file is not a certify report");
    const json& certs = doc.at("certificates");
    require(certs.contains(cfg.branch) && !certs.at(cfg.branch).is_null(), "cli",
            "report has no '" + cfg.branch + "' certificate");
    StoredCertificate out{heat_map_from_json(doc.at("map")), certificate_from_json(certs.at(cfg.branch))};
    if (cfg.eta_scale != 1.0) {
      out.cert.eta *= cfg.eta_scale;
      out.cert.rho = out.cert.sigma * out.cert.eta * out.cert.lambda_at_beta;
    }
    return out;
  } catch (const json::exception& e) {
    throw InvalidInput("cli", std::string("malformed certificate report: ") + e.what());
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// --- configuration --------------------------------------------------------

RunConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  try {
    if (doc.contains("map")) {
      std::filesystem::path p = doc.at("map").get<std::string>();
      cfg.map_source = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    if (doc.contains("certificate")) {
      std::filesystem::path p = doc.at("certificate").get<std::string>();
      cfg.certificate = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    if (doc.contains("gamma")) cfg.gamma = doc.at("gamma").get<double>();
    if (doc.contains("r0")) cfg.r0 = doc.at("r0").get<double>();
    if (doc.contains("a_m")) cfg.a_m = doc.at("a_m").get<double>();
    if (doc.contains("K")) cfg.K = doc.at("K").get<double>();
    cfg.sigma = doc.value("sigma", cfg.sigma);
    cfg.k_safety = doc.value("k_safety", cfg.k_safety);
    cfg.am_safety = doc.value("am_safety", cfg.am_safety);
    cfg.sample_budget = doc.value("sample_budget", cfg.sample_budget);
    cfg.radii_grid_size = doc.value("radii_grid_size", cfg.radii_grid_size);
    cfg.am_radii = doc.value("am_radii", cfg.am_radii);
    cfg.pair_budget = doc.value("pair_budget", cfg.pair_budget);
    cfg.n_targets = doc.value("n_targets", cfg.n_targets);
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.branch = doc.value("branch", cfg.branch);
    cfg.eta_scale = doc.value("eta_scale", cfg.eta_scale);
    if (doc.contains("tolerances")) {
      const json& t = doc.at("tolerances");
      cfg.chord_tol = t.value("chord", cfg.chord_tol);
      cfg.ratio_tol = t.value("sequence_ratio", cfg.ratio_tol);
      cfg.uniqueness_tol = t.value("uniqueness", cfg.uniqueness_tol);
      cfg.max_iter = t.value("max_iter", cfg.max_iter);
    }
  } catch (const json::exception& e) {
    throw InvalidInput("cli", std::string("malformed config: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cli", "cannot open config " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InvalidInput("cli", path.string() + ": " + e.what());
  }
  return config_from_json(doc, path.parent_path());
}

json echo_config(const RunConfig& cfg) {
  json j = {{"map", cfg.map_source.string()},
            {"sigma", cfg.sigma},
            {"k_safety", cfg.k_safety},
            {"am_safety", cfg.am_safety},
            {"sample_budget", cfg.sample_budget},
            {"radii_grid_size", cfg.radii_grid_size},
            {"am_radii", cfg.am_radii},
            {"pair_budget", cfg.pair_budget},
            {"n_targets", cfg.n_targets},
            {"seed", cfg.seed},
            {"tolerances",
             {{"chord", cfg.chord_tol},
              {"sequence_ratio", cfg.ratio_tol},
              {"uniqueness", cfg.uniqueness_tol},
              {"max_iter", cfg.max_iter}}}};
  j["gamma"] = cfg.gamma ? json(*cfg.gamma) : json(nullptr);
  j["r0"] = cfg.r0 ? json(*cfg.r0) : json(nullptr);
  j["a_m"] = cfg.a_m ? json(*cfg.a_m) : json(nullptr);
  j["K"] = cfg.K ? json(*cfg.K) : json(nullptr);
  return j;
}

void validate(const RunConfig& cfg) {
  require(cfg.sigma > 0.0 && cfg.sigma < 1.0, "cli", "sigma must lie in (0, 1)");
  require(cfg.k_safety >= 1.0 && cfg.am_safety >= 1.0, "cli", "safety factors must be >= 1");
  require(cfg.sample_budget >= 1 && cfg.radii_grid_size >= 1, "cli", "budgets must be positive");
  require(cfg.pair_budget >= 1 && cfg.n_targets >= 1, "cli", "budgets must be positive");
  require(cfg.chord_tol > 0.0 && cfg.ratio_tol > 0.0 && cfg.uniqueness_tol > 0.0, "cli",
          "all tolerances must be positive");
  require(cfg.max_iter >= 1, "cli", "max_iter must be >= 1");
  require(cfg.threads >= 1, "cli", "threads must be >= 1");
  require(cfg.eta_scale > 0.0, "cli", "eta_scale must be positive");
  require(!cfg.K || *cfg.K > 0.0, "cli", "K must be positive");
  require(!cfg.a_m || *cfg.a_m >= 1.0, "cli", "a_m must be >= 1");
  require(!cfg.gamma || *cfg.gamma > 1.0, "cli", "gamma must exceed 1");
  require(!cfg.r0 || (*cfg.r0 > 0.0 && *cfg.r0 < 1.0), "cli", "r0 must lie in (0, 1)");
  for (double r : cfg.am_radii) require(r > 0.0 && r < 1.0, "cli", "am_radii must lie in (0, 1)");
}

// --- commands -------------------------------------------------------------

CommandResult cmd_estimate_k(const RunConfig& cfg) {
  validate(cfg);
  const HeatMap F = normalize(load_map(cfg));
  const KEstimate est = estimate_K(F, uniform_radii(cfg.radii_grid_size), sampling_of(cfg));

  CommandResult res;
  res.report = header("estimate-k");
  res.report["input"] = echo_config(cfg);
  res.report["K_estimate"] = est.K;
  res.report["K_with_safety"] = est.K * cfg.k_safety;
  json rows = json::array();
  CsvTable table{"per_radius", {"r", "M", "max_frob", "ratio"}, {}};
  for (const auto& p : est.per_radius) {
    rows.push_back({{"r", p.r}, {"M", p.M}, {"max_frob", p.max_frob}, {"ratio", p.ratio}});
    table.rows.push_back({p.r, p.M, p.max_frob, p.ratio});
  }
  res.report["per_radius"] = std::move(rows);
  res.tables.push_back(std::move(table));
  return res;
}

CommandResult cmd_certify(const RunConfig& cfg) {
  validate(cfg);
  require(cfg.gamma.has_value() != cfg.r0.has_value(), "cli", "give exactly one of gamma and r0");
  const HeatMap raw = load_map(cfg);
  const double norm_factor = normalization_factor(raw);
  const HeatMap F = normalize(raw);
  const int m = F.dim();
  const SamplingOptions opts = sampling_of(cfg);
  const double gamma = cfg.gamma ? *cfg.gamma : gamma_from_r0(*cfg.r0);

  CommandResult res;
  json& rep = res.report;
  rep = header("certify");
  rep["input"] = echo_config(cfg);
  rep["map"] = to_json(F);
  rep["normalization_factor"] = norm_factor;

  // K
  json k_doc;
  double K = 0.0;
  if (cfg.K) {
    K = *cfg.K;
    k_doc = {{"value", K}, {"source", "config"}};
  } else {
    const KEstimate est = estimate_K(F, uniform_radii(cfg.radii_grid_size), opts);
    K = est.K * cfg.k_safety;
    json rows = json::array();
    for (const auto& p : est.per_radius)
      rows.push_back({{"r", p.r}, {"M", p.M}, {"max_frob", p.max_frob}, {"ratio", p.ratio}});
    k_doc = {{"value", K}, {"source", "estimated"}, {"estimate", est.K}, {"safety_factor", cfg.k_safety},
             {"per_radius", std::move(rows)}};
  }
  rep["K"] = std::move(k_doc);

  // a_m
  double a_m = 0.0;
  if (cfg.a_m) {
    a_m = *cfg.a_m;
    rep["a_m"] = {{"value", a_m}, {"source", "config"}};
  } else {
    const double est = estimate_am(m, F.components(), cfg.am_radii, opts);
    a_m = est * cfg.am_safety;
    rep["a_m"] = {{"value", a_m}, {"source", "estimated"}, {"estimate", est}, {"safety_factor", cfg.am_safety}};
  }

  // radii sequence
  SequenceOptions seq_opts;
  seq_opts.ratio_tol = cfg.ratio_tol;
  const RadiiSequence seq = build_sequences(F, gamma, [&](double r) { return ball_max(F, r, opts); }, seq_opts);
  const SequenceCheck check = check_sequence(seq);
  {
    json records = json::array();
    for (const auto& r : seq.records) records.push_back(record_json(r));
    rep["sequence"] = {{"gamma", seq.gamma},
                       {"r_gamma", seq.r_gamma},
                       {"r", seq.r},
                       {"eps", seq.eps},
                       {"l", seq.l},
                       {"M_one", seq.M_one},
                       {"records", std::move(records)},
                       {"checks",
                        {{"product_error", check.product_error},
                         {"max_ratio_error", check.max_ratio_error},
                         {"final_ratio", check.final_ratio},
                         {"gamma4", check.gamma4},
                         {"eps_witness", check.eps_witness},
                         {"recurrence_ok", check.recurrence_ok},
                         {"ok", check.ok()}}}};
    CsvTable table{"sequence", {"j", "r", "eps", "M", "beta_norm"}, {}};
    for (std::size_t j = 0; j < seq.r.size(); ++j)
      table.rows.push_back({static_cast<double>(j), seq.r[j], seq.eps[j], seq.M(j), seq.records[j].beta.norm()});
    res.tables.push_back(std::move(table));
  }

  // Interior certificate: among indices with eps_n^4 M(r_n)^{1/(m+1)} >= M(r_gamma)^{1/(m+1)} / gamma^4,
  // the one with the largest certified radius.
  const double exponent = 1.0 / (m + 1);
  const double M_rgamma = seq.M(0);
  const double threshold = std::pow(M_rgamma, exponent) / std::pow(gamma, 4);
  std::optional<SchlichtCertificate> interior;
  json candidates = json::array();
  for (int n = 0; n <= seq.l; ++n) {
    const double lhs = std::pow(seq.eps[n], 4) * std::pow(seq.M(n), exponent);
    const bool admissible = lhs >= threshold * (1.0 - 1e-12);
    json cand = {{"n", n}, {"criterion_lhs", lhs}, {"criterion_rhs", threshold}, {"admissible", admissible}};
    if (admissible) {
      const double eta = eta_interior(seq.eps[n], seq.r[n], cfg.sigma, K, gamma, m, a_m);
      SchlichtCertificate c = make_certificate(F, "interior", n, seq.records[n].beta, cfg.sigma, eta);
      cand["rho"] = c.rho;
      if (!interior || c.rho > interior->rho) interior = std::move(c);
    }
    candidates.push_back(std::move(cand));
  }
  rep["interior_candidates"] = std::move(candidates);

  const Vector origin = Vector::Zero(F.size());
  const double lambda0 = spectral_summary(F.jacobian(origin)).lambda_min;
  const double eta0 = eta_origin(seq.r_gamma, cfg.sigma, K, m, a_m, M_rgamma, lambda0);
  const SchlichtCertificate origin_cert = make_certificate(F, "origin", 0, origin, cfg.sigma, eta0);

  rep["certificates"] = {{"interior", interior ? certificate_json(*interior) : json(nullptr)},
                         {"origin", certificate_json(origin_cert)}};
  rep["interior_degenerate"] = seq.l == 0;
  {
    CsvTable table{"certificates", {"branch", "n", "eta", "lambda_at_beta", "rho"}, {}};
    if (interior) table.rows.push_back({0.0, static_cast<double>(interior->n), interior->eta, interior->lambda_at_beta, interior->rho});
    table.rows.push_back({1.0, 0.0, origin_cert.eta, origin_cert.lambda_at_beta, origin_cert.rho});
    res.tables.push_back(std::move(table));
  }

  // Eigenvalue inequalities at every beta_n.
  json wu = json::array();
  for (std::size_t j = 0; j < seq.records.size(); ++j) {
    json w = wu_json(check_wu_inequalities(F, seq.records[j], K));
    w["n"] = j;
    wu.push_back(std::move(w));
  }
  rep["wu_inequalities"] = std::move(wu);

  rep["bounds"] = bounds_json(bloch_bound_report(m, K, a_m, gamma, cfg.sigma, seq.r_gamma, M_rgamma));
  return res;
}

CommandResult cmd_invert(const RunConfig& cfg, const Vector& w) {
  validate(cfg);
  const StoredCertificate stored = load_certificate(cfg);
  const SchlichtCertificate& c = stored.cert;
  require(w.size() == stored.map.size(), "cli", "target dimension does not match the map");
  const double offset = (w - c.center_image).norm();
  require(offset <= c.rho, "cli", "target lies outside the certified disk");
  ChordOptions opts;
  opts.tol = cfg.chord_tol;
  opts.max_iter = cfg.max_iter;
  const ChordResult sol = chord_solve(stored.map, c.beta, w, c.eta, opts);

  CommandResult res;
  res.report = header("invert");
  res.report["input"] = echo_config(cfg);
  res.report["certificate"] = certificate_json(c);
  res.report["w"] = to_json(w);
  res.report["z"] = to_json(sol.z);
  res.report["iterations"] = sol.iterations;
  res.report["residual"] = sol.residual;
  res.report["max_distance"] = sol.max_distance;
  res.report["worst_contraction_factor"] = sol.worst_contraction_factor;
  CsvTable table{"solution", {}, {{}}};
  for (Eigen::Index i = 0; i < sol.z.size(); ++i) {
    table.header.push_back("z" + std::to_string(i));
    table.rows[0].push_back(sol.z(i));
  }
  table.header.push_back("iterations");
  table.rows[0].push_back(sol.iterations);
  table.header.push_back("residual");
  table.rows[0].push_back(sol.residual);
  res.tables.push_back(std::move(table));
  return res;
}

CommandResult cmd_verify(const RunConfig& cfg) {
  validate(cfg);
  const StoredCertificate stored = load_certificate(cfg);
  const SchlichtCertificate& c = stored.cert;
  const ContractionReport contraction =
      verify_contraction(stored.map, c.beta, c.eta, c.sigma, cfg.pair_budget, cfg.seed, cfg.threads);
  SchlichtOptions sopts;
  sopts.chord.tol = cfg.chord_tol;
  sopts.chord.max_iter = cfg.max_iter;
  sopts.uniqueness_tol = cfg.uniqueness_tol;
  sopts.threads = cfg.threads;
  const SchlichtReport schlicht = verify_schlicht(stored.map, c, cfg.n_targets, cfg.seed, sopts);

  CommandResult res;
  json& rep = res.report;
  rep = header("verify");
  rep["input"] = echo_config(cfg);
  rep["eta_scale"] = cfg.eta_scale;
  rep["certificate"] = certificate_json(c);
  rep["contraction"] = {{"pairs", contraction.pairs},
                        {"worst_pair_ratio", contraction.worst_pair_ratio},
                        {"pair_bound", 1.0 - c.sigma},
                        {"witness_a", to_json(contraction.witness_a)},
                        {"witness_b", to_json(contraction.witness_b)},
                        {"worst_row_norm", contraction.worst_row_norm},
                        {"row_bound", contraction.row_bound},
                        {"row_witness", to_json(contraction.row_witness)},
                        {"passed", contraction.passed()}};
  json failures = json::array();
  CsvTable table{"targets", {"index", "converged", "iterations", "residual", "uniqueness_gap"}, {}};
  for (std::size_t i = 0; i < schlicht.targets.size(); ++i) {
    const TargetOutcome& t = schlicht.targets[i];
    if (!t.converged) failures.push_back({{"index", i}, {"w", to_json(t.w)}, {"error", t.failure}});
    table.rows.push_back({static_cast<double>(i), t.converged ? 1.0 : 0.0, static_cast<double>(t.iterations),
                          t.residual, t.uniqueness_gap});
  }
  res.tables.push_back(std::move(table));
  rep["schlicht"] = {{"targets", schlicht.targets.size()},
                     {"failures", std::move(failures)},
                     {"worst_residual", schlicht.worst_residual},
                     {"worst_uniqueness_gap", schlicht.worst_uniqueness_gap},
                     {"min_pair_separation", schlicht.min_pair_separation},
                     {"worst_iterations", schlicht.worst_iterations},
                     {"passed", schlicht.passed()}};
  const bool passed = contraction.passed() && schlicht.passed();
  rep["passed"] = passed;
  res.exit_code = passed ? kExitOk : kExitVerificationFailed;
  return res;
}

CommandResult cmd_constants() {
  const OptimalConstants opt = optimize_constants(1000);
  CommandResult res;
  json& rep = res.report;
  rep = header("constants");
  rep["sigma_star"] = opt.sigma_star;
  rep["gamma_star"] = opt.gamma_star;
  rep["c_star"] = opt.c_star;
  rep["c_star_reproduces_0_22"] = opt.c_star >= 0.22;
  rep["r_gamma_star"] = r_from_gamma(opt.gamma_star);
  rep["r_gamma_star_lower_bound"] = r_gamma_lower_bound(opt.gamma_star);
  json table = json::array();
  CsvTable csv{"theorem_bound", {"m", "K", "a_m", "bound", "bound_stated_denominator_m", "worst_case_at_optimum"}, {}};
  for (int m : {1, 2, 3}) {
    for (double K : {1.0, 2.0, 4.0}) {
      for (double a_m : {1.0, 2.0}) {
        const double tb = theorem_bound(m, K, a_m);
        const double stated = theorem_bound_stated(m, K, a_m);
        const double worst = worst_case_bound(m, K, opt.gamma_star, opt.sigma_star, a_m).with_lower_bound;
        table.push_back({{"m", m}, {"K", K}, {"a_m", a_m}, {"bound", tb}, {"bound_stated_denominator_m", stated},
                         {"worst_case_at_optimum", worst}});
        csv.rows.push_back({static_cast<double>(m), K, a_m, tb, stated, worst});
      }
    }
  }
  rep["theorem_bound_table"] = std::move(table);
  res.tables.push_back(std::move(csv));
  return res;
}

std::string render_json(const CommandResult& result) { return result.report.dump(2) + "\n"; }

std::string render_csv(const CommandResult& result) {
  std::ostringstream os;
  for (std::size_t t = 0; t < result.tables.size(); ++t) {
    const CsvTable& table = result.tables[t];
    if (t > 0) os << '\n';
    os << "# " << table.name << '\n';
    for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
    os << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace heatbloch
