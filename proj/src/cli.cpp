/**
 * Copyright 2026 The csrank Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "csrank/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <new>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "csrank/certify.hpp"
#include "csrank/decomp.hpp"
#include "csrank/io.hpp"
#include "csrank/multimode.hpp"
#include "csrank/parallel.hpp"
#include "csrank/permanent.hpp"

namespace csrank {

namespace {

using nlohmann::json;

std::string csv_number(Real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Inline JSON, or "@path" to read it from a file.
json parse_json_argument(const std::string& text, const char* what) {
  const std::string body = !text.empty() && text.front() == '@' ? read_file(text.substr(1)) : text;
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Where results go: a file if --out was given, otherwise the output stream.
class Sink {
 public:
  explicit Sink(std::ostream& out) : out_(out) {}

  void emit(const std::string& content, const std::string& path) {
    if (path.empty()) {
      out_ << content;
      return;
    }
    std::ofstream file(path);
    if (!file) throw InvalidArgument("cannot write " + path);
    file << content;
    if (!file) throw InvalidArgument("failed writing " + path);
    written_.push_back(path);
  }

  void emit(const json& j, const std::string& path) { emit(j.dump(2) + "\n", path); }

  const std::vector<std::string>& written() const noexcept { return written_; }

 private:
  std::ostream& out_;
  std::vector<std::string> written_;
};

struct SearchFlags {
  Index n_max = -1;
  std::vector<Real> b_grid;

  SearchConfig config() const {
    SearchConfig cfg;
    cfg.N_max = n_max;
    if (!b_grid.empty()) {
      if (b_grid.size() != 3 || !(b_grid[0] > 0.0) || !(b_grid[1] >= b_grid[0]) ||
          b_grid[2] < 1.0 || b_grid[2] != std::floor(b_grid[2]))
        throw InvalidArgument("--b-grid expects MIN,MAX,POINTS with 0 < MIN <= MAX");
      cfg.log10_b_min = std::log10(b_grid[0]);
      cfg.log10_b_max = std::log10(b_grid[1]);
      cfg.b_points = static_cast<Index>(b_grid[2]);
    }
    cfg.validate();
    return cfg;
  }
};

void add_search_flags(CLI::App* cmd, SearchFlags& f) {
  cmd->add_option("--n-max", f.n_max, "Largest Hankel order N (default min(20, cutoff/2))");
  cmd->add_option("--b-grid", f.b_grid, "Rescaling grid MIN,MAX,POINTS (default 1e-3,10,200)")
      ->expected(3)
      ->delimiter(',');
}

BoundCertificate make_bound(const json& resolved, Index r, BoundMethod method,
                            const SearchConfig& cfg) {
  if (r < 1) throw InvalidArgument("--r must be >= 1");
  const FockVector psi = state_from_json(resolved);
  BoundCertificate cert;
  cert.state_descriptor = resolved;
  cert.r = r;
  cert.method = method;
  cert.config = cfg;
  switch (method) {
    case BoundMethod::plain: {
      const Index hi = cfg.resolved_N_max(psi.cutoff());
      const Index lo = std::max(r, cfg.N_min);
      if (lo > hi)
        throw InvalidArgument("--r exceeds the largest Hankel order N_max = " + std::to_string(hi));
      cert.N = lo;
      cert.epsilon_threshold = -1.0;
      for (Index n = lo; n <= hi; ++n) {
        const Real v = plain_bound(psi, r, n);
        if (v > cert.epsilon_threshold) {
          cert.epsilon_threshold = v;
          cert.N = n;
        }
      }
      break;
    }
    case BoundMethod::optimized: {
      const OptimizedBound ob = optimized_bound(psi, r, cfg);
      cert.epsilon_threshold = ob.value;
      cert.N = ob.N_star;
      cert.b = ob.b_star;
      break;
    }
    case BoundMethod::analytic_fock: {
      if (resolved.at("type") != "fock")
        throw InvalidArgument("--method analytic requires a Fock state");
      const Index n = resolved.at("n").get<Index>();
      if (r > n) throw InvalidArgument("--method analytic requires r <= n");
      cert.epsilon_threshold = fock_analytic_threshold(n, r);
      cert.N = n;
      break;
    }
  }
  return cert;
}

int check_file(const std::string& path, Sink& sink, const std::string& out_path) {
  json j = parse_json_argument("@" + path, "certificate");
  if (j.is_object() && j.contains("certificate")) j = j.at("certificate");
  const BoundCertificate cert = certificate_from_json(j);
  const Real recomputed = recompute_threshold(cert);
  const bool valid = check_certificate(cert);
  sink.emit(json{{"valid", valid},
                 {"stored", cert.epsilon_threshold},
                 {"recomputed", recomputed},
                 {"method", to_string(cert.method)}},
            out_path);
  return valid ? kExitSuccess : kExitNumerical;
}

json fit_to_json(const FitResult& res) {
  return {{"superposition", to_json(res.superposition)},
          {"fidelity_achieved", res.fidelity_achieved},
          {"infidelity", 1.0 - res.fidelity_achieved},
          {"iterations", res.iterations},
          {"converged", res.converged},
          {"restarts_used", res.restarts_used},
          {"working_cutoff", res.working_cutoff},
          {"max_radius", res.max_radius}};
}

std::string figure_left() {
  constexpr int kPoints = 64;
  SearchConfig cfg;
  cfg.N_max = 1;
  const auto rows = parallel_map(kPoints, [&](std::size_t k) {
    const Real gamma = static_cast<Real>(k) / (kPoints - 1);
    VectorXc amps = VectorXc::Zero(3);
    amps(0) = std::sqrt(1.0 - gamma);
    amps(1) = std::sqrt(gamma);
    const FockVector psi(amps);
    return std::array<Real, 4>{gamma, best_single_coherent(psi).infidelity,
                               plain_bound(psi, 1, 1), optimized_bound(psi, 1, cfg).value};
  });
  std::string csv = "gamma,exact_infidelity,plain_bound,optimized_bound\n";
  for (const auto& r : rows)
    csv += csv_number(r[0]) + "," + csv_number(r[1]) + "," + csv_number(r[2]) + "," +
           csv_number(r[3]) + "\n";
  return csv;
}

std::string figure_right() {
  constexpr Index kMaxN = 12;
  const auto rows = parallel_map(kMaxN, [&](std::size_t k) {
    const Index n = static_cast<Index>(k) + 1;
    const FockVector psi = fock_state(n, 2 * n);
    SearchConfig cfg;
    cfg.N_min = n;
    cfg.N_max = n;
    return std::array<Real, 2>{plain_bound(psi, n, n), optimized_bound(psi, n, cfg).value};
  });
  std::string csv = "n,plain_bound,optimized_bound\n";
  for (std::size_t k = 0; k < rows.size(); ++k)
    csv += std::to_string(k + 1) + "," + csv_number(rows[k][0]) + "," + csv_number(rows[k][1]) +
           "\n";
  return csv;
}

json unitary_to_json(const UnitaryMatrix& u) {
  json rows = json::array();
  for (Index i = 0; i < u.dimension(); ++i) {
    json row = json::array();
    for (Index j = 0; j < u.dimension(); ++j) row.push_back(complex_to_json(u(i, j)));
    rows.push_back(row);
  }
  return rows;
}

/// Drops "--manifest FILE" / "--manifest=FILE" so the stored argv replays
/// the command without rewriting the manifest.
std::vector<std::string> strip_manifest(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--manifest") {
      ++i;
      continue;
    }
    if (args[i].rfind("--manifest=", 0) == 0) continue;
    out.push_back(args[i]);
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified lower bounds on the coherent state rank of bosonic states.", "csrank"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  std::string manifest_path;
  app.add_option("--manifest", manifest_path, "Write a JSON run manifest to this file");

  // bound
  struct {
    std::string state, method = "optimized", out, check;
    Index r = 0;
    std::optional<Real> eps;
    SearchFlags search;
  } bound;
  auto* cmd_bound = app.add_subcommand("bound", "Epsilon threshold below which kappa_eps > r");
  cmd_bound->add_option("state", bound.state, "State descriptor JSON (or @file)");
  cmd_bound->add_option("--r", bound.r, "Rank to exclude");
  cmd_bound->add_option("--eps", bound.eps, "Target epsilon (recorded and compared)");
  cmd_bound->add_option("--method", bound.method, "plain | optimized | analytic")
      ->check(CLI::IsMember({"plain", "optimized", "analytic", "analytic_fock"}));
  cmd_bound->add_option("--out", bound.out, "Certificate output file (default stdout)");
  cmd_bound->add_option("--check", bound.check, "Re-validate an existing certificate file");
  add_search_flags(cmd_bound, bound.search);

  // certify
  struct {
    std::string state, out, check;
    Real eps = 0.0;
    bool recurrence = false;
    SearchFlags search;
  } certify;
  auto* cmd_certify = app.add_subcommand("certify", "Largest r certified at a given epsilon");
  cmd_certify->add_option("state", certify.state, "State descriptor JSON (or @file)");
  cmd_certify->add_option("--eps", certify.eps, "Precision epsilon in (0, 1)");
  cmd_certify->add_flag("--recurrence", certify.recurrence, "Also report Hankel ranks by N");
  cmd_certify->add_option("--out", certify.out, "Output file (default stdout)");
  cmd_certify->add_option("--check", certify.check, "Re-validate an existing certificate file");
  add_search_flags(cmd_certify, certify.search);

  // fit
  struct {
    std::string state, out;
    Index r = 0;
    FitOptions opts;
  } fit;
  auto* cmd_fit = app.add_subcommand("fit", "Best r-term coherent superposition");
  cmd_fit->add_option("state", fit.state, "State descriptor JSON (or @file)")->required();
  cmd_fit->add_option("--r", fit.r, "Number of coherent terms")->required();
  cmd_fit->add_option("--seed", fit.opts.seed, "Random seed");
  cmd_fit->add_option("--restarts", fit.opts.restarts, "Multi-start count");
  cmd_fit->add_option("--max-iters", fit.opts.max_iters, "Iterations per local search");
  cmd_fit->add_option("--tol", fit.opts.tol, "Convergence tolerance on the infidelity");
  cmd_fit->add_option("--working-cutoff", fit.opts.working_cutoff, "Fock cutoff for overlaps");
  cmd_fit->add_option("--out", fit.out, "Output file (default stdout)");

  // decompose
  struct {
    std::string state, out;
    Real delta = 0.1;
  } decompose;
  auto* cmd_decompose =
      app.add_subcommand("decompose", "Exact circle decomposition of a core state");
  cmd_decompose->add_option("state", decompose.state, "Core or Fock descriptor JSON (or @file)")
      ->required();
  cmd_decompose->add_option("--delta", decompose.delta, "Circle radius");
  cmd_decompose->add_option("--out", decompose.out, "Output file (default stdout)");

  // figure
  struct {
    std::string panel, out;
  } figure;
  auto* cmd_figure = app.add_subcommand("figure", "Bound comparison data as CSV");
  cmd_figure->add_option("--panel", figure.panel, "left | right")
      ->required()
      ->check(CLI::IsMember({"left", "right"}));
  cmd_figure->add_option("--out", figure.out, "CSV output file (default stdout)");

  // permanent
  struct {
    int n = 4, trials = 100;
    Real delta = 0.2;
    std::uint64_t seed = 0;
    std::string out;
  } permanent;
  auto* cmd_permanent =
      app.add_subcommand("permanent", "Check the permanent approximation by cat products");
  cmd_permanent->add_option("--n", permanent.n, "Number of modes");
  cmd_permanent->add_option("--delta", permanent.delta, "Cat amplitude");
  cmd_permanent->add_option("--trials", permanent.trials, "Haar-random unitaries");
  cmd_permanent->add_option("--seed", permanent.seed, "Seed of the first trial");
  cmd_permanent->add_option("--out", permanent.out, "CSV output file (default stdout)");

  // multimode
  struct {
    std::string state, out;
    int trials = 64;
    std::uint64_t seed = 0;
  } multimode;
  auto* cmd_multimode =
      app.add_subcommand("multimode", "Rank lower bound of a multimode core state");
  cmd_multimode->add_option("state", multimode.state, "Multimode descriptor JSON (or @file)")
      ->required();
  cmd_multimode->add_option("--trials", multimode.trials, "Random bunching directions");
  cmd_multimode->add_option("--seed", multimode.seed, "Random seed");
  cmd_multimode->add_option("--out", multimode.out, "Output file (default stdout)");

  // replay
  std::string replay_path;
  auto* cmd_replay = app.add_subcommand("replay", "Re-run the command stored in a manifest");
  cmd_replay->add_option("manifest", replay_path, "Manifest file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitSuccess : kExitUsage;
  }

  const auto started = std::chrono::steady_clock::now();
  const std::string started_at = utc_timestamp();
  Sink sink(out);
  json inputs = json::array();
  std::optional<std::uint64_t> seed;
  CLI::App* active = app.get_subcommands().front();

  auto dispatch = [&]() -> int {
    if (active == cmd_bound) {
      if (!bound.check.empty()) return check_file(bound.check, sink, bound.out);
      if (bound.state.empty()) throw InvalidArgument("bound: missing state descriptor");
      inputs.push_back(bound.state);
      const json resolved = resolve_descriptor(parse_json_argument(bound.state, "state"));
      if (cmd_bound->count("--r") == 0) throw InvalidArgument("bound: --r is required");
      BoundCertificate cert = make_bound(resolved, bound.r,
                                         bound_method_from_string(bound.method),
                                         bound.search.config());
      if (bound.eps) {
        if (!(*bound.eps >= 0.0)) throw InvalidArgument("--eps must be non-negative");
        cert.epsilon = bound.eps;
      }
      sink.emit(to_json(cert), bound.out);
      return kExitSuccess;
    }
    if (active == cmd_certify) {
      if (!certify.check.empty()) return check_file(certify.check, sink, certify.out);
      if (certify.state.empty()) throw InvalidArgument("certify: missing state descriptor");
      if (cmd_certify->count("--eps") == 0) throw InvalidArgument("certify: --eps is required");
      inputs.push_back(certify.state);
      const json resolved = resolve_descriptor(parse_json_argument(certify.state, "state"));
      const FockVector psi = state_from_json(resolved);
      const SearchConfig cfg = certify.search.config();
      BoundCertificate cert = certify_rank(psi, certify.eps, cfg);
      cert.state_descriptor = resolved;
      if (!certify.recurrence) {
        sink.emit(to_json(cert), certify.out);
      } else {
        const RecurrenceReport rep =
            recurrence_order(psi, cfg.resolved_N_max(psi.cutoff()), cfg.rank_tol);
        sink.emit(json{{"certificate", to_json(cert)}, {"recurrence", to_json(rep)}},
                  certify.out);
      }
      return kExitSuccess;
    }
    if (active == cmd_fit) {
      inputs.push_back(fit.state);
      seed = fit.opts.seed;
      const json resolved = resolve_descriptor(parse_json_argument(fit.state, "state"));
      const FitResult res = fit_superposition(state_from_json(resolved), fit.r, fit.opts);
      json j = fit_to_json(res);
      j["state"] = resolved;
      j["r"] = fit.r;
      j["seed"] = fit.opts.seed;
      sink.emit(j, fit.out);
      return kExitSuccess;
    }
    if (active == cmd_decompose) {
      inputs.push_back(decompose.state);
      const json resolved = resolve_descriptor(parse_json_argument(decompose.state, "state"));
      const std::string type = resolved.at("type");
      if (type != "fock" && type != "core")
        throw InvalidArgument("decompose: needs a finite-support (fock or core) state");
      const FockVector psi = state_from_json(resolved);
      const CircleDecomposition dec = circle_decomposition(psi, decompose.delta);
      Index w = psi.cutoff();
      for (const auto& t : dec.superposition.terms()) w = std::max(w, coherent_cutoff(t.alpha));
      const Real fid = fidelity(psi.padded(w), superposition_to_fock(dec.superposition, w));
      sink.emit(json{{"state", resolved},
                     {"delta", decompose.delta},
                     {"superposition", to_json(dec.superposition)},
                     {"condition", dec.condition},
                     {"ill_conditioned", dec.ill_conditioned},
                     {"fidelity", fid}},
                decompose.out);
      if (dec.ill_conditioned) err << "warning: delta < 1e-3, coefficients are ill-conditioned\n";
      return kExitSuccess;
    }
    if (active == cmd_figure) {
      sink.emit(figure.panel == "left" ? figure_left() : figure_right(), figure.out);
      return kExitSuccess;
    }
    if (active == cmd_permanent) {
      seed = permanent.seed;
      if (permanent.n < 1) throw InvalidArgument("--n must be >= 1");
      if (!(permanent.delta > 0.0)) throw InvalidArgument("--delta must be positive");
      const PermanentBoundReport rep = verify_permanent_bound(
          ones_cat_decomposition(permanent.n, permanent.delta), permanent.trials,
          permanent.seed);
      std::string csv = "trial,seed,abs_permanent,abs_formula,error,bound\n";
      for (const auto& t : rep.trials)
        csv += std::to_string(t.trial) + "," + std::to_string(t.seed) + "," +
               csv_number(t.abs_permanent) + "," + csv_number(t.abs_formula) + "," +
               csv_number(t.error) + "," + csv_number(rep.bound) + "\n";
      sink.emit(csv, permanent.out);
      err << "n=" << rep.n << " delta_inf=" << csv_number(rep.delta_inf)
          << " bound=" << csv_number(rep.bound) << " max_error=" << csv_number(rep.max_error)
          << " tail_weight=" << csv_number(rep.tail_weight)
          << " formula_size=" << rep.formula_size << (rep.passed ? " PASS" : " FAIL") << "\n";
      return rep.passed ? kExitSuccess : kExitNumerical;
    }
    if (active == cmd_multimode) {
      inputs.push_back(multimode.state);
      seed = multimode.seed;
      const MultimodeFockState core =
          multimode_from_json(parse_json_argument(multimode.state, "state"));
      const MultimodeLowerBound lb = multimode_lower_bound(core, multimode.trials, multimode.seed);
      sink.emit(json{{"state", to_json(core)},
                     {"n", core.max_total()},
                     {"lower_bound", lb.lower_bound},
                     {"unitary", unitary_to_json(lb.unitary)},
                     {"bunched_amplitude", complex_to_json(lb.bunched_amplitude)},
                     {"bunched_probability", std::norm(lb.bunched_amplitude)},
                     {"reduced", fock_vector_to_json(lb.reduced)},
                     {"reduced_bound",
                      {{"epsilon_threshold", lb.reduced_bound.value},
                       {"N", lb.reduced_bound.N_star},
                       {"b", lb.reduced_bound.b_star}}}},
                multimode.out);
      return kExitSuccess;
    }
    // replay
    const json m = parse_json_argument("@" + replay_path, "manifest");
    if (!m.contains("argv") || !m.at("argv").is_array())
      throw InvalidArgument("replay: manifest has no argv");
    const auto argv = m.at("argv").get<std::vector<std::string>>();
    if (!argv.empty() && argv.front() == "replay")
      throw InvalidArgument("replay: refusing to replay a replay");
    return run_cli(argv, out, err);
  };

  int code = kExitSuccess;
  try {
    code = dispatch();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    code = kExitUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    code = kExitUsage;
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << "\n";
    code = kExitResource;
  } catch (const std::bad_alloc&) {
    err << "resource limit: out of memory\n";
    code = kExitResource;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    code = kExitNumerical;
  }

  if (!manifest_path.empty()) {
    json flags = json::object();
    for (const CLI::Option* opt : active->get_options()) {
      if (opt->count() == 0 || opt->get_name() == "--help") continue;
      const auto& res = opt->results();
      flags[opt->get_name()] = res.size() == 1 ? json(res.front()) : json(res);
    }
    const Real wall = std::chrono::duration<Real>(std::chrono::steady_clock::now() - started).count();
    json manifest{{"command", active->get_name()},
                  {"argv", strip_manifest(args)},
                  {"flags", flags},
                  {"inputs", inputs},
                  {"outputs", sink.written()},
                  {"seed", seed ? json(*seed) : json(nullptr)},
                  {"version", kVersion},
                  {"exit_code", code},
                  {"started_at", started_at},
                  {"wall_clock_seconds", wall}};
    std::ofstream file(manifest_path);
    if (!file) {
      err << "error: cannot write " << manifest_path << "\n";
      if (code == kExitSuccess) code = kExitUsage;
    } else {
      file << manifest.dump(2) << "\n";
    }
  }
  return code;
}

}  // namespace csrank
