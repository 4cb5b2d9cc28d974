// SPDX-License-Identifier: Apache-2.0
// Command-line front end: rigidify, glue, product, verify, dist, indep.
//
// Exit codes: 0 success or pass, 1 verification fail, 2 unresolved,
// 3 parse or usage error, 4 invariant or domain violation, 5 resource limit.

#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "srm/glue.hpp"
#include "srm/json_io.hpp"
#include "srm/rigidify.hpp"
#include "srm/verify.hpp"

namespace {

using srm::io::Json;

enum Exit : int { kOk = 0, kFail = 1, kUnresolved = 2, kParse = 3, kDomain = 4, kResource = 5 };

struct JobConfig {
  unsigned long seed = 0;
  unsigned max_precision = srm::kDefaultMaxPrecision;
  std::string format = "json";
  bool approx = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw srm::io::parse_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw srm::io::parse_error(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw srm::io::parse_error("cannot write '" + path + "'");
  out << text;
}

std::string render(const Json& j) { return j.dump(2) + "\n"; }

std::string render_metric(const srm::FiniteMetric& d, const JobConfig& cfg) {
  if (cfg.format == "csv") return srm::io::to_csv(d);
  return render(srm::io::to_json(d, cfg.approx));
}

srm::Rational parse_epsilon(const std::string& text) {
  srm::Rational eps;
  try {
    eps = srm::parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw srm::io::parse_error(std::string("--epsilon: ") + e.what());
  }
  if (eps <= 0) throw std::domain_error("epsilon must be positive");
  return eps;
}

int verdict_exit(srm::Verdict v) {
  switch (v) {
    case srm::Verdict::pass: return kOk;
    case srm::Verdict::unresolved: return kUnresolved;
    default: return kFail;
  }
}

struct RigidifyArgs {
  std::string input, epsilon, output, certificate;
  bool full = false;
};

int run_rigidify(const RigidifyArgs& a, const JobConfig& cfg) {
  const srm::FiniteMetric d = srm::io::metric_from_text(read_file(a.input));
  const srm::Rational eps = parse_epsilon(a.epsilon);
  if (!a.full) {
    write_text(a.output, render_metric(srm::perturb_strongly_rigid(d, eps, cfg.seed), cfg));
    return kOk;
  }
  const srm::PipelineResult out = srm::rigidify_full(d, eps, {cfg.seed, cfg.max_precision});
  const std::string cert = render(srm::io::to_json(out.certificate, cfg.approx));
  if (a.certificate.empty()) {
    write_text(a.output, cert);
  } else {
    write_text(a.output, render_metric(out.metric, cfg));
    write_text(a.certificate, cert);
  }
  return kOk;
}

struct GlueArgs {
  std::string hub, reference, epsilon, output;
  std::vector<std::string> blocks;
};

int run_glue(const GlueArgs& a, const JobConfig& cfg) {
  const srm::FiniteMetric hub = srm::io::metric_from_text(read_file(a.hub));
  std::vector<srm::FiniteMetric> blocks;
  for (const std::string& path : a.blocks) blocks.push_back(srm::io::metric_from_text(read_file(path)));
  srm::Partition p;
  for (const srm::FiniteMetric& b : blocks) {
    std::vector<std::size_t> idx;
    std::vector<std::size_t> hubs_here;
    for (const std::string& label : b.points()) {
      idx.push_back(p.points.size());
      for (const std::string& h : hub.points())
        if (h == label) hubs_here.push_back(p.points.size());
      p.points.push_back(label);
    }
    if (hubs_here.size() != 1) throw std::invalid_argument("each block must contain exactly one hub");
    p.blocks.push_back(std::move(idx));
    p.hubs.push_back(hubs_here.front());
  }
  const srm::FiniteMetric D = srm::amalgamate(p, blocks, hub, cfg.max_precision);
  if (a.reference.empty()) {
    write_text(a.output, render_metric(D, cfg));
    return kOk;
  }
  srm::FiniteMetric ref = srm::io::metric_from_text(read_file(a.reference));
  std::vector<std::size_t> order;
  for (const std::string& label : D.points()) order.push_back(ref.index_of(label));
  ref = ref.restrict(order);
  const srm::Report r = srm::sup_bound_check(ref, D, p, parse_epsilon(a.epsilon), cfg.max_precision);
  write_text(a.output,
             render(Json{{"metric", srm::io::to_json(D, cfg.approx)}, {"sup_bound", srm::io::to_json(r)}}));
  return verdict_exit(r.verdict);
}

struct ProductArgs {
  unsigned long alphabet = 2, k = 0, gauge = 1;
  std::size_t length = 1;
  std::string output;
};

int run_product(const ProductArgs& a, const JobConfig& cfg) {
  const srm::SemiMetricGauge g(a.gauge, cfg.seed);
  write_text(a.output,
             render_metric(srm::product_metric(g, srm::ExponentSchedule{a.k}, a.alphabet, a.length), cfg));
  return kOk;
}

struct VerifyArgs {
  std::string metric, check, xi;
  unsigned long m = 0;
  bool has_m = false;
};

int run_verify(const VerifyArgs& a, const JobConfig& cfg) {
  const srm::FiniteMetric d = srm::io::metric_from_text(read_file(a.metric));
  srm::Report r;
  if (a.check == "metric") {
    r = srm::is_metric(d, cfg.max_precision);
  } else if (a.check == "strict") {
    r = srm::is_strict_triangle(d, cfg.max_precision);
  } else if (a.check == "sr") {
    r = srm::is_strongly_rigid(d, cfg.max_precision);
  } else if (a.check == "rigid") {
    r = srm::is_rigid(d);
  } else if (a.check == "lnm") {
    r = a.has_m ? srm::lnm_membership(d, a.m, cfg.max_precision)
                : srm::strongly_rigid_by_lnm(d, cfg.max_precision);
  } else {
    if (a.xi.empty()) throw srm::io::parse_error("--check embed needs --xi");
    r = srm::distance_embedding_check(d, a.xi);
  }
  std::cout << render(srm::io::to_json(r));
  return verdict_exit(r.verdict);
}

int run_dist(const std::string& a, const std::string& b, const JobConfig& cfg) {
  const srm::FiniteMetric d = srm::io::metric_from_text(read_file(a));
  const srm::FiniteMetric e = srm::io::metric_from_text(read_file(b));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) pairs.emplace_back(i, j);
  srm::require_same_points(d, e);
  const srm::CodedReal sup = srm::detail::max_deviation(d, e, pairs, cfg.max_precision);
  if (sup.is_rational()) {
    std::cout << srm::to_string(sup.offset()) << "\n";
  } else {
    const srm::Enclosure enc = srm::sup_distance(d, e);
    std::cout << render(Json{{"value", srm::io::to_json(sup)},
                             {"lo", srm::to_string(enc.lo)},
                             {"hi", srm::to_string(enc.hi)}});
  }
  return kOk;
}

int run_indep(const std::string& path, const JobConfig& cfg) {
  const srm::Certificate c = srm::io::certificate_from_json(read_json(path));
  const srm::CheckOutcome o = srm::verify_certificate(c, cfg.max_precision);
  std::cout << render(Json{{"verdict", o.ok ? "pass" : "fail"},
                           {"entries", c.independence.size()},
                           {"detail", o.reason}});
  return o.ok ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strongly rigid metrics: perturbation, amalgamation and verification"};
  app.require_subcommand(1);
  JobConfig cfg;
  app.add_option("--seed", cfg.seed, "Seed for value streams")->capture_default_str();
  app.add_option("--max-precision", cfg.max_precision, "Event cap for exact comparisons")
      ->capture_default_str();
  app.add_option("--format", cfg.format, "Metric output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_flag("--approx", cfg.approx, "Add non-authoritative decimal renderings");

  RigidifyArgs rig;
  auto* rigidify = app.add_subcommand("rigidify", "Perturb a rational metric into a strongly rigid one");
  rigidify->fallthrough();
  rigidify->add_option("input", rig.input, "Input metric (JSON or CSV)")->required();
  rigidify->add_option("--epsilon", rig.epsilon, "Sup-distance budget p/q")->required();
  rigidify->add_flag("--full", rig.full, "Independence pipeline with certificate");
  rigidify->add_option("-o,--output", rig.output, "Metric output (default stdout)");
  rigidify->add_option("--certificate", rig.certificate, "Certificate output with --full");

  GlueArgs glue_args;
  auto* glue = app.add_subcommand("glue", "Amalgamate block metrics through a hub metric");
  glue->fallthrough();
  glue->add_option("--hub", glue_args.hub, "Hub metric")->required();
  glue->add_option("--block", glue_args.blocks, "Block metric (repeatable)")->required();
  glue->add_option("--reference", glue_args.reference, "Metric to bound the result against");
  glue->add_option("--epsilon", glue_args.epsilon, "Block diameter bound for --reference");
  glue->add_option("-o,--output", glue_args.output, "Output (default stdout)");

  ProductArgs prod;
  auto* product = app.add_subcommand("product", "Distance matrix of tau on all words");
  product->fallthrough();
  product->add_option("--alphabet", prod.alphabet, "Alphabet size")->required()->check(CLI::PositiveNumber);
  product->add_option("--length", prod.length, "Word length")->required()->check(CLI::PositiveNumber);
  product->add_option("--k", prod.k, "Exponent schedule offset")->required();
  product->add_option("--gauge", prod.gauge, "Gauge family id")->required();
  product->add_option("-o,--output", prod.output, "Output (default stdout)");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Run one oracle on a metric");
  verify->fallthrough();
  verify->add_option("--metric", ver.metric, "Metric file")->required();
  verify->add_option("--check", ver.check, "Oracle")
      ->required()
      ->check(CLI::IsMember({"metric", "strict", "sr", "rigid", "lnm", "embed"}));
  auto* m_opt = verify->add_option("--m", ver.m, "Level for --check lnm (all levels if omitted)");
  verify->add_option("--xi", ver.xi, "Base point for --check embed");

  std::string dist_a, dist_b;
  auto* dist = app.add_subcommand("dist", "Sup distance between two metrics");
  dist->fallthrough();
  dist->add_option("a", dist_a)->required();
  dist->add_option("b", dist_b)->required();

  std::string cert_path;
  auto* indep = app.add_subcommand("indep", "Re-check a certificate");
  indep->fallthrough();
  indep->add_option("certificate", cert_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }
  ver.has_m = m_opt->count() > 0;

  try {
    if (*rigidify) return run_rigidify(rig, cfg);
    if (*glue) return run_glue(glue_args, cfg);
    if (*product) return run_product(prod, cfg);
    if (*verify) return run_verify(ver, cfg);
    if (*dist) return run_dist(dist_a, dist_b, cfg);
    if (*indep) return run_indep(cert_path, cfg);
  } catch (const srm::io::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const srm::unresolved_error& e) {
    std::cerr << "unresolved: " << e.what() << "\n";
    return kUnresolved;
  } catch (const srm::resource_error& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kDomain;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kParse;
}
