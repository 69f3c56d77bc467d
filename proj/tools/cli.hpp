#pragma once

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rwges/assumptions.hpp"
#include "rwges/demos.hpp"
#include "rwges/edge_list.hpp"
#include "rwges/io.hpp"
#include "rwges/oracle.hpp"
#include "rwges/version.hpp"

namespace rwges::cli {

namespace fs = std::filesystem;

struct Run {
  std::string command;
  std::vector<std::string> args;
  std::string out_dir = ".";
  json config = json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::ostream* out = nullptr;

  std::string path(const std::string& name) const { return (fs::path(out_dir) / name).string(); }
  void emit(const std::string& name, const std::string& text) {
    write_file(path(name), text);
    outputs.push_back(name);
  }
  void emit_json(const std::string& name, const json& j) { emit(name, j.dump(2) + "\n"); }
  std::string input(const std::string& p) {
    inputs.push_back(p);
    return read_file(p);
  }
};

inline std::string timestamp() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

inline void write_manifest(const Run& r, int code, double seconds, const std::string& started) {
  json m;
  m["command"] = r.command;
  m["args"] = r.args;
  m["config"] = r.config;
  m["seed"] = r.seed;
  m["inputs"] = r.inputs;
  m["outputs"] = r.outputs;
  m["out_dir"] = r.out_dir;
  m["version"] = kVersion;
  m["exit_code"] = code;
  m["started_at"] = started;
  m["wall_clock_seconds"] = seconds;
  write_file(r.path(r.command + ".manifest.json"), m.dump(2) + "\n");
}

// ---- shared input helpers

inline std::shared_ptr<const Dataset> load_data(Run& r, const std::string& path) {
  try {
    return std::make_shared<Dataset>(parse_csv(r.input(path)));
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.detail());
  }
}

inline ScoreParams load_params(Run& r, const std::string& path, int p) {
  ScoreParams prm;
  if (!path.empty()) prm = params_from_json(parse_json(r.input(path), path), prm);
  prm.validate(p);
  return prm;
}

inline Pdag load_class(Run& r, const std::string& path, int p) {
  if (path.empty()) return Pdag(p);
  Pdag h = parse_edge_list(r.input(path), p);
  auto g = consistent_extension(h);
  if (!g) throw Error(Errc::parse_error, path + ": graph has no consistent extension");
  return dag_to_cpdag(*g);
}

inline Dag load_dag(Run& r, const std::string& path, int p) {
  if (path.empty()) return Dag(p);
  return parse_dag_edge_list(r.input(path), p);
}

inline Ordering parse_order(const std::string& s, int p) {
  if (s.empty()) return Ordering::identity(p);
  std::vector<int> o;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      o.push_back(std::stoi(tok) - 1);
    } catch (const std::logic_error&) {
      throw Error(Errc::parse_error, "ordering must be comma-separated node numbers");
    }
  }
  if (static_cast<int>(o.size()) != p) throw Error(Errc::dimension_mismatch, "ordering must list every node once");
  std::vector<int> sorted = o;
  std::sort(sorted.begin(), sorted.end());
  for (int k = 0; k < p; ++k)
    if (sorted[k] != k) throw Error(Errc::invalid_node, "ordering must list every node once");
  return Ordering(o);
}

inline json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json trace_json(const TraceRecord& t) {
  return {{"iter", t.iter},           {"kind", t.move},       {"accepted", t.accepted},
          {"log_score", num(t.log_score)}, {"n_edges", t.n_edges}, {"log_alpha", num(t.log_alpha)}};
}

inline json report_json(const AssumptionReport& a) {
  return {{"nu_lower", a.nu_lower},
          {"nu_upper", a.nu_upper},
          {"nu0", a.nu0},
          {"beta_min_sq", a.beta_min_sq},
          {"beta_min_threshold", a.beta_min_threshold},
          {"beta_min_threshold_iso", a.beta_min_threshold_iso},
          {"margin", a.margin()},
          {"margin_iso", a.margin_iso()},
          {"omega_min", a.omega_min},
          {"omega_max", a.omega_max},
          {"d_star", a.d_star},
          {"orderings_checked", a.orderings_checked},
          {"orderings_sampled", a.orderings_sampled},
          {"sample_size_ratio", a.sample_size_ratio},
          {"eigenvalue_bounds", a.a},
          {"prior_constants", a.c},
          {"degree", a.d},
          {"degree_iso", a.d_iso},
          {"beta_min", a.e},
          {"beta_min_iso", a.e_iso},
          {"omega_in_range", a.omega_in_range},
          {"literal_pass", a.literal_pass()}};
}

inline json demo_json(const DemoReport& d) {
  json j;
  j["example"] = to_string(d.kind);
  j["p"] = d.p;
  j["n"] = d.n;
  j["c2"] = d.c2;
  j["ratios"] = json::array();
  for (const auto& r : d.ratios)
    j["ratios"].push_back({{"name", r.name},
                           {"expected_log", r.expected_log},
                           {"computed_log", r.computed_log},
                           {"rel_error", r.rel_error},
                           {"pass", r.pass}});
  j["self_transition"] = d.self_transition;
  j["self_transition_bound"] = d.self_transition_bound;
  j["bottleneck"] = d.bottleneck;
  j["fitted_c"] = num(d.fitted_c);
  j["local_mode"] = d.local_mode;
  j["neighborhood_size"] = d.neighborhood_size;
  j["mixing"] = json::array();
  for (const auto& m : d.mixing)
    j["mixing"].push_back({{"n", m.n},
                           {"t_mix", m.t_mix},
                           {"capped", m.capped},
                           {"slope", m.slope},
                           {"self_transition", m.self_transition},
                           {"self_transition_bound", m.self_transition_bound}});
  j["notes"] = d.notes;
  j["ok"] = d.ok();
  return j;
}

inline json path_bound_json(const PathBoundReport& r) {
  return {{"t1", r.t1},
          {"t2", r.t2},
          {"t3", num(r.t3)},
          {"l_max", r.l_max},
          {"log_pi_min", r.log_pi_min},
          {"applicable", r.applicable},
          {"bound", num(r.bound)},
          {"log_rho", num(r.log_rho)},
          {"path_length", r.path_length},
          {"congestion_bound", num(r.congestion_bound)}};
}

// ---- subcommands

struct GenOpts {
  int p = 5, n = 100, d_in = 2, d_out = 2;
  double edge_prob = 0.5, w_lo = 0.5, w_hi = 1.5, om_lo = 0.5, om_hi = 1.5;
  std::uint64_t seed = 1;
  bool exact = false;
};

inline int run_gen(Run& r, const GenOpts& o) {
  r.seed = o.seed;
  if (o.n < 1) throw Error(Errc::dimension_mismatch, "n must be positive");
  Rng rng = make_stream(o.seed, 0);
  SemSpec spec{o.p, o.d_in, o.d_out, o.edge_prob, o.w_lo, o.w_hi, o.om_lo, o.om_hi};
  SemModel m = sample_sem(spec, rng);
  Dataset d = o.exact ? exact_design(m, o.n) : sample_data(m, o.n, rng);
  r.emit("data.csv", format_csv(d));
  r.emit_json("sem.json", sem_to_json(m));
  r.emit("truth.edges", format_edge_list(m.graph));
  *r.out << "wrote " << d.n() << " x " << d.p() << " data to " << r.path("data.csv") << "\n";
  return 0;
}

struct ScoreOpts {
  std::string data, graph, params;
};

inline int run_score(Run& r, const ScoreOpts& o) {
  auto d = load_data(r, o.data);
  ScoreParams prm = load_params(r, o.params, d->p());
  Scorer sc(d, prm);
  Pdag h = parse_edge_list(r.input(o.graph), d->p());
  json j;
  if (h.undirected_edges().empty()) {
    Dag g = parse_dag_edge_list(r.input(o.graph), d->p());
    j["kind"] = "dag";
    j["score"] = num(sc.dag_score(g));
    j["score_unrestricted"] = sc.dag_score_unrestricted(g);
    j["in_space"] = sc.caps().admits(g);
    j["local"] = json::array();
    for (int k = 0; k < g.p(); ++k) j["local"].push_back(sc.local(k, g.parents(k)));
  } else {
    auto g = consistent_extension(h);
    if (!g) throw Error(Errc::parse_error, o.graph + ": graph has no consistent extension");
    Pdag c = dag_to_cpdag(*g);
    j["kind"] = "class";
    j["score"] = num(sc.cpdag_score_or_neg_inf(c));
    j["score_unrestricted"] = sc.dag_score_unrestricted(*g);
    j["in_space"] = class_in_space(c, sc.caps());
  }
  j["params"] = params_to_json(prm);
  r.emit_json("score.json", j);
  *r.out << std::setprecision(17) << j["score"].dump() << "\n";
  return j["score"].is_null() ? 2 : 0;
}

struct GreedyOpts {
  std::string data, params, init, mode = "operator";
  std::size_t max_steps = 100000;
};

inline int run_greedy(Run& r, const GreedyOpts& o) {
  auto d = load_data(r, o.data);
  ScoreParams prm = load_params(r, o.params, d->p());
  Scorer sc(d, prm);
  Pdag init = load_class(r, o.init, d->p());
  auto path = greedy_search(sc, init, parse_proposal_mode(o.mode), o.max_steps);
  json j;
  j["steps"] = json::array();
  for (const auto& s : path)
    j["steps"].push_back({{"move", s.move}, {"log_score", s.log_score}, {"graph", format_edge_list(s.state)}});
  j["final_log_score"] = path.back().log_score;
  r.emit_json("greedy.json", j);
  r.emit("greedy.edges", format_edge_list(path.back().state));
  *r.out << "greedy: " << path.size() - 1 << " moves, log score " << path.back().log_score << "\n";
  return 0;
}

struct SampleOpts {
  std::string kind, data, params, init, order, mode = "operator";
  std::uint64_t iterations = 1000, seed = 1;
  int chains = 1;
  bool lazy = false;
  double q = 0.1;
};

inline int run_sample(Run& r, const SampleOpts& o) {
  r.seed = o.seed;
  auto d = load_data(r, o.data);
  ScoreParams prm = load_params(r, o.params, d->p());
  Scorer sc(d, prm);
  ChainConfig cfg;
  cfg.kind = parse_sampler_kind(o.kind);
  cfg.mode = parse_proposal_mode(o.mode);
  cfg.lazy = o.lazy;
  cfg.q = o.q;
  cfg.iterations = o.iterations;
  cfg.seed = o.seed;
  cfg.validate();
  if (o.chains < 1) throw Error(Errc::dimension_mismatch, "--chains must be at least 1");
  const int p = d->p();
  Pdag init_class = cfg.kind == SamplerKind::rwges ? load_class(r, o.init, p) : Pdag(p);
  Dag init_dag = cfg.kind == SamplerKind::rwges ? Dag(p) : load_dag(r, o.init, p);
  Ordering sigma = parse_order(o.order, p);

  struct Out {
    std::string trace, final_graph;
    std::uint64_t accepted = 0;
    double final_score = 0;
    std::string error;
    Errc code = Errc::parse_error;
  };
  std::vector<Out> res(o.chains);
  auto work = [&](int c) {
    ChainConfig cc = cfg;
    cc.stream = static_cast<std::uint64_t>(c);
    std::ostringstream trace;
    auto sink = [&](const TraceRecord& t) { trace << trace_json(t).dump() << "\n"; };
    try {
      if (cfg.kind == SamplerKind::rwges) {
        auto x = rwges_run(sc, cc, init_class, sink);
        res[c].accepted = x.accepted;
        res[c].final_graph = format_edge_list(x.final_state);
        res[c].final_score = sc.cpdag_score(x.final_state);
      } else if (cfg.kind == SamplerKind::ads) {
        auto x = ads_dag_run(sc, cc, sigma, init_dag, sink);
        res[c].accepted = x.accepted;
        res[c].final_graph = format_edge_list(x.final_state);
        res[c].final_score = sc.dag_score(x.final_state);
      } else {
        auto x = structure_mcmc_run(sc, cc, init_dag, sink);
        res[c].accepted = x.accepted;
        res[c].final_graph = format_edge_list(x.final_state);
        res[c].final_score = sc.dag_score(x.final_state);
      }
    } catch (const Error& e) {
      res[c].error = e.detail();
      res[c].code = e.code();
    }
    res[c].trace = trace.str();
  };
  std::vector<std::thread> pool;
  for (int c = 1; c < o.chains; ++c) pool.emplace_back(work, c);
  work(0);
  for (auto& t : pool) t.join();
  for (const auto& x : res)
    if (!x.error.empty()) throw Error(x.code, x.error);

  json summary;
  summary["sampler"] = o.kind;
  summary["chains"] = json::array();
  for (int c = 0; c < o.chains; ++c) {
    const std::string suffix = o.chains == 1 ? "" : "_" + std::to_string(c);
    r.emit("trace" + suffix + ".jsonl", res[c].trace);
    r.emit("final" + suffix + ".edges", res[c].final_graph);
    summary["chains"].push_back({{"chain", c},
                                 {"accepted", res[c].accepted},
                                 {"acceptance_rate", o.iterations ? double(res[c].accepted) / o.iterations : 0.0},
                                 {"final_log_score", res[c].final_score}});
  }
  r.emit_json("sample.json", summary);
  *r.out << "sampled " << o.chains << " chain(s) of " << o.iterations << " iterations\n";
  return 0;
}

struct EnumerateOpts {
  int p = 3;
  std::string kind = "cpdags", params, data, order;
  int d_in = 0, d_out = 0;
};

inline int run_enumerate(Run& r, const EnumerateOpts& o) {
  std::shared_ptr<const Dataset> d;
  if (!o.data.empty()) d = load_data(r, o.data);
  const int p = d ? d->p() : o.p;
  check_node_count(p);
  ScoreParams prm = load_params(r, o.params, p);
  if (o.d_in) prm.d_in = o.d_in;
  if (o.d_out) prm.d_out = o.d_out;
  if (o.params.empty() && !o.d_in && !o.d_out) prm.d_in = prm.d_out = p;
  prm.validate(p);
  std::optional<Scorer> sc;
  if (d) sc.emplace(d, prm);
  json j;
  j["kind"] = o.kind;
  j["p"] = p;
  j["caps"] = {{"d_in", prm.d_in}, {"d_out", prm.d_out}};
  j["states"] = json::array();
  std::vector<double> lw;
  auto add = [&](const std::string& edges, double score) {
    json s{{"graph", edges}};
    if (sc) {
      s["log_score"] = score;
      lw.push_back(score);
    }
    j["states"].push_back(s);
  };
  if (o.kind == "cpdags") {
    auto space = class_space(p, prm.caps());
    for (const auto& e : space.states) add(format_edge_list(e), sc ? sc->cpdag_score(e) : 0.0);
  } else if (o.kind == "dags" || o.kind == "ordered-dags") {
    std::optional<Ordering> sigma;
    if (o.kind == "ordered-dags") sigma = parse_order(o.order, p);
    auto space = dag_space(p, prm.caps(), sigma);
    for (const auto& g : space.states) add(format_edge_list(g), sc ? sc->dag_score(g) : 0.0);
  } else {
    throw Error(Errc::unsupported_kind, "unknown space kind '" + o.kind + "'");
  }
  if (sc) {
    auto post = normalize_log_weights(lw);
    for (std::size_t k = 0; k < post.prob.size(); ++k) j["states"][k]["posterior"] = post.prob[k];
  }
  j["count"] = j["states"].size();
  r.emit_json("enumerate.json", j);
  *r.out << j["count"].get<std::size_t>() << " states\n";
  return 0;
}

struct MixingOpts {
  std::string data, params, sampler = "rwges", mode = "exact", order, truth;
  bool lazy = false;
  double q = 0.1;
  int max_doublings = 62;
};

template <class Kernel, class Space>
json mixing_core(const Kernel& k, const Space& space, bool lazy, int max_doublings, Posterior& post, TransitionMatrix& tm) {
  post = exact_posterior(k, space);
  tm = build_transition_matrix(k, space);
  if (lazy) tm = tm.lazy();
  json j;
  j["states"] = space.size();
  j["row_sum_error"] = tm.max_row_sum_error();
  j["detailed_balance_residual"] = tm.detailed_balance_residual(post.prob);
  j["spectrum_min"] = tm.reversible_spectrum().minCoeff();
  auto m = exact_mixing_time(tm, post.prob, 0.25, max_doublings);
  j["t_mix"] = m.t;
  j["t_mix_capped"] = m.capped;
  j["tv_at_t_mix"] = m.tv;
  auto h = hitting_time(tm, post.mode);
  j["max_hitting_time_to_mode"] = *std::max_element(h.begin(), h.end());
  j["mode"] = format_edge_list(space.states[post.mode]);
  j["mode_probability"] = post.prob[post.mode];
  return j;
}

inline int run_mixing(Run& r, const MixingOpts& o) {
  auto d = load_data(r, o.data);
  ScoreParams prm = load_params(r, o.params, d->p());
  Scorer sc(d, prm);
  const int p = d->p();
  SamplerKind kind = parse_sampler_kind(o.sampler);
  Posterior post;
  TransitionMatrix tm;
  json j;
  j["sampler"] = o.sampler;
  j["lazy"] = o.lazy;
  if (kind == SamplerKind::rwges) {
    RwgesKernel k(sc, parse_proposal_mode(o.mode));
    auto space = class_space(p, prm.caps());
    j.update(mixing_core(k, space, o.lazy, o.max_doublings, post, tm));
    if (!o.truth.empty()) {
      CanonicalContext ctx(load_dag(r, o.truth, p), sc);
      auto g = canonical_transition_map(ctx, space);
      j["path_bound"] = path_bound_json(verify_path_bound(tm, post, g, space.at(ctx.star()), p));
    }
  } else if (kind == SamplerKind::ads) {
    Ordering sigma = parse_order(o.order, p);
    AdsKernel k(sc, sigma);
    j.update(mixing_core(k, dag_space(p, prm.caps(), sigma), o.lazy, o.max_doublings, post, tm));
  } else {
    if (!(o.q > 0 && o.q < 1)) throw Error(Errc::dimension_mismatch, "q must lie in (0, 1)");
    StructureKernel k(sc, o.q);
    j.update(mixing_core(k, dag_space(p, prm.caps()), o.lazy, o.max_doublings, post, tm));
  }
  r.emit_json("mixing.json", j);
  *r.out << "t_mix " << (j["t_mix_capped"].get<bool>() ? "> " : "") << j["t_mix"].get<std::uint64_t>() << "\n";
  return 0;
}

struct DemoOpts {
  std::string kind;
  DemoConfig cfg;
};

inline int run_demo(Run& r, DemoOpts o) {
  DemoReport rep = slow_mixing_demo(parse_demo_kind(o.kind), o.cfg);
  json j = demo_json(rep);
  r.emit_json("demo_" + o.kind + ".json", j);
  bool ratios = true;
  for (const auto& q : rep.ratios) {
    *r.out << (q.pass ? "PASS " : "FAIL ") << q.name << " rel_error=" << q.rel_error << "\n";
    ratios &= q.pass;
  }
  *r.out << "self-transition " << rep.self_transition << (rep.bottleneck ? " >= " : " < ") << rep.self_transition_bound
         << "\n";
  for (const auto& m : rep.mixing) *r.out << "n=" << m.n << " t_mix=" << (m.capped ? ">" : "") << m.t_mix << "\n";
  return ratios ? 0 : 2;
}

struct AssumeOpts {
  std::string sem, data, params;
  int n = 0;
  bool strict = false;
};

inline int run_check(Run& r, const AssumeOpts& o) {
  SemModel m = sem_from_json(parse_json(r.input(o.sem), o.sem));
  ScoreParams prm = load_params(r, o.params, m.p());
  Eigen::MatrixXd sigma = sigma_from_sem(m);
  AssumptionReport a;
  if (!o.data.empty()) {
    auto d = load_data(r, o.data);
    if (d->p() != m.p()) throw Error(Errc::dimension_mismatch, "data and SEM differ in p");
    a = check_assumptions(*d, sigma, prm);
  } else {
    if (o.n < 1) throw Error(Errc::dimension_mismatch, "give --data or a positive --n");
    a = check_assumptions(sigma, prm, o.n);
  }
  json j = report_json(a);
  r.emit_json("assumptions.json", j);
  *r.out << "literal " << (a.literal_pass() ? "pass" : "fail") << ", beta-min margin " << a.margin()
         << " (isotropic " << a.margin_iso() << ")\n";
  return o.strict && !a.literal_pass() ? 2 : 0;
}

int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err);

inline int run_replay(Run& r, const std::string& manifest_path, std::ostream& err) {
  json m = parse_json(read_file(manifest_path), manifest_path);
  std::vector<std::string> args;
  try {
    args = m.at("args").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, manifest_path + ": " + e.what());
  }
  const std::string orig = m.value("out_dir", ".");
  std::vector<std::string> replay;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--out" && k + 1 < args.size()) {
      ++k;
      continue;
    }
    replay.push_back(args[k]);
  }
  replay.push_back("--out");
  replay.push_back(r.out_dir);
  std::ostringstream sink;
  int code = dispatch(replay, sink, err);
  json j;
  j["replayed"] = manifest_path;
  j["exit_code"] = code;
  j["files"] = json::array();
  bool same = code == m.value("exit_code", 0);
  for (const auto& f : m.value("outputs", std::vector<std::string>{})) {
    bool eq = false;
    try {
      eq = read_file((fs::path(orig) / f).string()) == read_file(r.path(f));
    } catch (const Error&) {
    }
    j["files"].push_back({{"file", f}, {"identical", eq}});
    same &= eq;
  }
  j["identical"] = same;
  r.emit_json("replay.json", j);
  *r.out << (same ? "replay identical" : "replay differs") << "\n";
  return same ? 0 : 2;
}

inline int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian structure learning over sparse DAG equivalence classes", "rwges"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  std::string out_dir = ".";
  auto with_out = [&](CLI::App* s) { s->add_option("--out", out_dir, "output directory (created if missing)"); };

  GenOpts gen;
  auto* s_gen = app.add_subcommand("gen", "sample a random SEM and data");
  s_gen->add_option("--p", gen.p, "number of nodes");
  s_gen->add_option("--n", gen.n, "sample size");
  s_gen->add_option("--d-in", gen.d_in, "in-degree cap of the true graph");
  s_gen->add_option("--d-out", gen.d_out, "out-degree cap of the true graph");
  s_gen->add_option("--edge-prob", gen.edge_prob, "probability of each allowed edge");
  s_gen->add_option("--weight-low", gen.w_lo, "smallest |weight|");
  s_gen->add_option("--weight-high", gen.w_hi, "largest |weight|");
  s_gen->add_option("--omega-low", gen.om_lo, "smallest noise variance");
  s_gen->add_option("--omega-high", gen.om_hi, "largest noise variance");
  s_gen->add_option("--seed", gen.seed, "random seed");
  s_gen->add_flag("--exact", gen.exact, "orthogonal noise design instead of Gaussian draws");
  with_out(s_gen);

  ScoreOpts score;
  auto* s_score = app.add_subcommand("score", "score a DAG or class");
  s_score->add_option("--data", score.data, "CSV data")->required();
  s_score->add_option("--graph", score.graph, "edge-list file")->required();
  s_score->add_option("--params", score.params, "score parameters JSON");
  with_out(s_score);

  GreedyOpts greedy;
  auto* s_greedy = app.add_subcommand("greedy", "greedy search over classes");
  s_greedy->add_option("--data", greedy.data, "CSV data")->required();
  s_greedy->add_option("--params", greedy.params, "score parameters JSON");
  s_greedy->add_option("--init", greedy.init, "initial graph edge list (default empty)");
  s_greedy->add_option("--mode", greedy.mode, "operator | exact neighbourhood");
  s_greedy->add_option("--max-steps", greedy.max_steps, "step cap");
  with_out(s_greedy);

  SampleOpts sample;
  auto* s_sample = app.add_subcommand("sample", "run an MCMC sampler");
  s_sample->add_option("kind", sample.kind, "rwges | ads | structure")->required();
  s_sample->add_option("--data", sample.data, "CSV data")->required();
  s_sample->add_option("--params", sample.params, "score parameters JSON");
  s_sample->add_option("--init", sample.init, "initial graph edge list (default empty)");
  s_sample->add_option("--order", sample.order, "ordering for ads, e.g. 2,1,3");
  s_sample->add_option("--mode", sample.mode, "rwges proposal: operator | exact");
  s_sample->add_option("--iterations", sample.iterations, "iterations per chain");
  s_sample->add_option("--seed", sample.seed, "random seed");
  s_sample->add_option("--chains", sample.chains, "independent chains run concurrently");
  s_sample->add_option("--q", sample.q, "equivalence-jump probability (structure)");
  s_sample->add_flag("--lazy", sample.lazy, "hold with probability 1/2");
  with_out(s_sample);

  EnumerateOpts en;
  auto* s_en = app.add_subcommand("enumerate", "enumerate a model space (p <= 6)");
  s_en->add_option("--p", en.p, "number of nodes (ignored with --data)");
  s_en->add_option("--kind", en.kind, "cpdags | dags | ordered-dags");
  s_en->add_option("--order", en.order, "ordering for ordered-dags");
  s_en->add_option("--params", en.params, "score parameters JSON (degree caps)");
  s_en->add_option("--d-in", en.d_in, "in-degree cap");
  s_en->add_option("--d-out", en.d_out, "out-degree cap");
  s_en->add_option("--data", en.data, "CSV data; adds scores and posterior");
  with_out(s_en);

  MixingOpts mix;
  auto* s_mix = app.add_subcommand("mixing", "exact transition matrix diagnostics (p <= 6)");
  s_mix->add_option("--data", mix.data, "CSV data")->required();
  s_mix->add_option("--params", mix.params, "score parameters JSON");
  s_mix->add_option("--sampler", mix.sampler, "rwges | ads | structure");
  s_mix->add_option("--mode", mix.mode, "rwges proposal: operator | exact");
  s_mix->add_option("--order", mix.order, "ordering for ads");
  s_mix->add_option("--truth", mix.truth, "true DAG edge list; adds the canonical path bound");
  s_mix->add_option("--q", mix.q, "equivalence-jump probability (structure)");
  s_mix->add_option("--max-doublings", mix.max_doublings, "cap on log2 of the mixing time search");
  s_mix->add_flag("--lazy", mix.lazy, "use (P + I) / 2");
  with_out(s_mix);

  DemoOpts demo;
  auto* s_demo = app.add_subcommand("demo", "slow-mixing examples on exact designs");
  s_demo->add_option("kind", demo.kind, "ex1 | ex2 | ex3")->required();
  s_demo->add_option("--n", demo.cfg.n, "sample size");
  s_demo->add_option("--alpha", demo.cfg.alpha, "fractional exponent");
  s_demo->add_option("--a1", demo.cfg.a1, "ex2 weight of 1 -> 3");
  s_demo->add_option("--a2", demo.cfg.a2, "ex2 weight of 2 -> 3");
  s_demo->add_option("--w", demo.cfg.w, "ex3 edge weight");
  s_demo->add_option("--grid", demo.cfg.grid, "sample sizes for the mixing-time grid");
  with_out(s_demo);

  AssumeOpts as;
  auto* s_as = app.add_subcommand("check-assumptions", "check the high-dimensional conditions");
  s_as->add_option("--sem", as.sem, "true SEM JSON")->required();
  s_as->add_option("--data", as.data, "CSV data (eigenvalues from the Gram matrix)");
  s_as->add_option("--n", as.n, "sample size when no data is given");
  s_as->add_option("--params", as.params, "score parameters JSON");
  s_as->add_flag("--strict", as.strict, "exit 2 unless every literal condition holds");
  with_out(s_as);

  std::string manifest;
  auto* s_replay = app.add_subcommand("replay", "re-run a manifest and compare outputs");
  s_replay->add_option("manifest", manifest, "manifest JSON")->required();
  with_out(s_replay);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  Run run;
  run.command = sub->get_name();
  run.args = args;
  run.out_dir = out_dir;
  run.out = &out;
  auto started = std::chrono::steady_clock::now();
  const std::string stamp = timestamp();
  int code = 0;
  try {
    fs::create_directories(out_dir);
    for (const auto* opt : sub->get_options()) {
      if (opt->get_name().empty() || opt->get_name() == "--help") continue;
      auto res = opt->results();
      if (!res.empty()) run.config[opt->get_name()] = res.size() == 1 ? json(res[0]) : json(res);
    }
    if (sub == s_gen) code = run_gen(run, gen);
    else if (sub == s_score) code = run_score(run, score);
    else if (sub == s_greedy) code = run_greedy(run, greedy);
    else if (sub == s_sample) code = run_sample(run, sample);
    else if (sub == s_en) code = run_enumerate(run, en);
    else if (sub == s_mix) code = run_mixing(run, mix);
    else if (sub == s_demo) code = run_demo(run, demo);
    else if (sub == s_as) code = run_check(run, as);
    else if (sub == s_replay) code = run_replay(run, manifest, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    code = is_usage_error(e.code()) ? 1 : 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    code = 2;
  }
  if (code == 1) return code;
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  try {
    write_manifest(run, code, secs, stamp);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}

}  // namespace rwges::cli
