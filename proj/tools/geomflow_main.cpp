// geomflow: drives the flow runner, the inequality verifiers, and the
// eigenvalue machinery from shape/weight spec strings.
//
// Exit codes: 0 all checks pass, 1 a comparison came out violated or a
// monitored claim failed, 2 usage or configuration error, 3 numerical
// failure (convexity loss, corpus rejection, solver breakdown).

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "geomflow/flowlab.hpp"
#include "geomflow/inequalities.hpp"
#include "geomflow/shapes.hpp"
#include "geomflow/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace geomflow;

namespace {

struct RunConfig {
  std::string command;
  int K = 0;
  int dim = 0;  // 0 = infer from the shape name
  std::string shape = "circle:1";
  std::string weight = "monomial:1";
  std::string flow;
  std::string theorem;
  std::string suite;
  int k = 1;
  int l = 0;
  int samples = 0;  // 0 = per-command default
  double dt = 1e-3;
  long steps = 20000;
  double stop_tol = 1e-10;
  double stop_roundness = 1e-7;
  bool euler = false;
  int count = 0;  // eigen: values requested; sweep: corpus size
  int max_mode = 3;
  double amp = 0.1;
  std::uint64_t seed = 1;
  double base = 1.0;
  std::vector<std::string> monitors;  // extra, unclaimed unless known
  std::string out;
};

json config_json(const RunConfig& c) {
  return json{{"command", c.command}, {"K", c.K},
              {"dim", c.dim},         {"shape", c.shape},
              {"weight", c.weight},   {"flow", c.flow},
              {"theorem", c.theorem}, {"suite", c.suite},
              {"k", c.k},             {"l", c.l},
              {"samples", c.samples}, {"dt", c.dt},
              {"steps", c.steps},     {"stop_tol", c.stop_tol},
              {"stop_roundness", c.stop_roundness},
              {"euler", c.euler},     {"count", c.count},
              {"max_mode", c.max_mode}, {"amp", c.amp},
              {"seed", c.seed},       {"base", c.base},
              {"monitors", c.monitors}, {"out", c.out}};
}

// Config-file values fill in every option the command line left untouched,
// so `--config saved.json` with extra flags reproduces a run with overrides.
void overlay_config(const json& j, const CLI::App* cmd, RunConfig& c) {
  static const std::set<std::string> known = {
      "command", "K",        "dim",     "shape",   "weight",
      "flow",    "theorem",  "suite",   "k",       "l",
      "samples", "dt",       "steps",   "stop_tol", "stop_roundness",
      "euler",   "count",    "max_mode", "amp",    "seed",
      "base",    "monitors", "out"};
  for (const auto& [key, val] : j.items())
    if (!known.count(key))
      throw std::invalid_argument("config: unknown key '" + key + "'");
  if (j.contains("command") &&
      j.at("command").get<std::string>() != c.command)
    throw std::invalid_argument("config: command '" +
                                j.at("command").get<std::string>() +
                                "' does not match subcommand '" + c.command +
                                "'");
  auto absent = [&](const char* flag) {
    const auto* opt = cmd->get_option_no_throw(flag);
    return !opt || opt->count() == 0;  // unknown flags: config value stands
  };
  auto pick = [&](const char* key, const char* flag, auto& dst) {
    if (j.contains(key) && absent(flag))
      dst = j.at(key).get<std::decay_t<decltype(dst)>>();
  };
  pick("K", "--K", c.K);
  pick("dim", "--dim", c.dim);
  pick("shape", "--shape", c.shape);
  pick("weight", "--weight", c.weight);
  pick("flow", "--flow", c.flow);
  pick("theorem", "--theorem", c.theorem);
  pick("suite", "--suite", c.suite);
  pick("k", "--k", c.k);
  pick("l", "--l", c.l);
  pick("samples", "--samples", c.samples);
  pick("dt", "--dt", c.dt);
  pick("steps", "--steps", c.steps);
  pick("stop_tol", "--stop-tol", c.stop_tol);
  pick("stop_roundness", "--stop-roundness", c.stop_roundness);
  pick("euler", "--euler", c.euler);
  pick("count", "--count", c.count);
  pick("max_mode", "--max-mode", c.max_mode);
  pick("amp", "--amp", c.amp);
  pick("seed", "--seed", c.seed);
  pick("base", "--base", c.base);
  pick("monitors", "--monitor", c.monitors);
  pick("out", "--out", c.out);
}

void resolve_space(RunConfig& c, const std::string& space, bool k_passed,
                   bool dim_passed) {
  auto set_k = [&](int v) {
    if (k_passed && c.K != v)
      throw std::invalid_argument("--space and --K disagree");
    c.K = v;
  };
  auto set_dim = [&](int v) {
    if (dim_passed && c.dim != v)
      throw std::invalid_argument("--space and --dim disagree");
    c.dim = v;
  };
  if (space.empty()) return;
  if (space == "euclidean") set_k(0);
  else if (space == "hyperbolic") set_k(-1);
  else if (space == "sphere" || space == "spherical") set_k(1);
  else if (space == "m2") set_dim(2);
  else if (space == "m3") set_dim(3);
  else
    throw std::invalid_argument(
        "--space: euclidean|hyperbolic|sphere|m2|m3 (m2/m3 take K from --K)");
}

int infer_dim(const std::string& shape_spec) {
  const auto colon = shape_spec.find(':');
  const std::string name = shape_spec.substr(0, colon);
  if (name == "sphere" || name == "offset_sphere" || name == "ellipsoid" ||
      name == "legendre")
    return 3;
  return 2;  // circle, ellipse, offset_circle, fourier, random
}

int default_samples(int dim, bool flowing) {
  if (dim == 2) return flowing ? 256 : 512;
  return flowing ? 200 : 400;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Identifies the computation, not its destination: two runs that differ only
// in --out share a digest, so their artifacts can be diffed byte for byte.
std::string config_digest(const RunConfig& c) {
  json j = config_json(c);
  j.erase("out");
  const std::string s = j.dump();
  return hex64(fnv1a(s.data(), s.size()));
}

std::string num17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + p.string() + " for write");
  f << text;
}

// Writes nothing when --out was not given; the stdout summary is the report.
struct Sink {
  fs::path dir;
  bool enabled = false;
  explicit Sink(const RunConfig& c) {
    if (c.out.empty()) return;
    dir = c.out;
    fs::create_directories(dir);
    enabled = true;
  }
  void put(const std::string& name, const std::string& text) const {
    if (enabled) write_file(dir / name, text);
  }
  void put(const std::string& name, const json& j) const {
    if (enabled) write_file(dir / name, j.dump(2) + "\n");
  }
};

json report_json(const InequalityReport& r) {
  return json{{"theorem", r.theorem}, {"params", r.params},
              {"lhs", r.lhs},         {"rhs", r.rhs},
              {"margin", r.margin},   {"scale", r.scale},
              {"tol", r.tol},         {"verdict", r.verdict},
              {"note", r.note},       {"shape_digest", hex64(r.shape_digest)}};
}

void print_report(const InequalityReport& r) {
  std::printf("%-12s %-9s lhs=%.12g rhs=%.12g margin=%.3e scale=%.3e  [%s]\n",
              r.theorem.c_str(), r.verdict.c_str(), r.lhs, r.rhs, r.margin,
              r.scale, r.params.c_str());
  if (!r.note.empty()) std::printf("  note: %s\n", r.note.c_str());
}

int worker_count() {
  const char* env = std::getenv("GEOMFLOW_WORKERS");
  if (!env) return 1;
  return std::max(1, std::atoi(env));
}

// ---------------------------------------------------------------------------
// flow

FlowSpec flow_spec_from(const RunConfig& c) {
  FlowSpec spec;
  spec.flow = parse_flow(c.flow);
  spec.k = c.k;
  spec.dt = c.dt;
  spec.max_steps = c.steps;
  spec.stop_tol = c.stop_tol;
  spec.stop_roundness = c.stop_roundness;
  spec.midpoint = !c.euler;
  return spec;
}

std::vector<std::string> monitor_list(const RunConfig& c, FlowKind flow) {
  std::vector<std::string> names = default_monitors(flow, c.k);
  for (const auto& extra : c.monitors)
    if (std::find(names.begin(), names.end(), extra) == names.end())
      names.push_back(extra);
  return names;
}

std::string monitors_csv(const MonitorSeries& s) {
  std::string csv = "step,t,maxF";
  for (const auto& tr : s.tracks) csv += "," + tr.name;
  csv += "\n";
  for (size_t i = 0; i < s.t.size(); ++i) {
    csv += std::to_string(i) + "," + num17(s.t[i]) + "," + num17(s.maxF[i]);
    for (const auto& tr : s.tracks) csv += "," + num17(tr.values[i]);
    csv += "\n";
  }
  return csv;
}

json verdicts_json(const RunConfig& c, const MonitorSeries& s,
                   std::uint64_t shape_digest) {
  json tracks = json::array();
  for (const auto& tr : s.tracks)
    tracks.push_back(json{{"monitor", tr.name},
                          {"claim", claim_name(tr.claim)},
                          {"max_violation", tr.max_violation},
                          {"pass", tr.pass}});
  bool all = true;
  for (const auto& tr : s.tracks) all = all && tr.pass;
  return json{{"version", kVersion},
              {"config_digest", config_digest(c)},
              {"flow", c.flow},
              {"weight", c.weight},
              {"drift_tol", s.drift_tol},
              {"steps", s.steps},
              {"converged", s.converged},
              {"stop_reason", s.stop_reason},
              {"monitors", tracks},
              {"pass", all},
              {"shape_digest", hex64(shape_digest)}};
}

int report_flow(const RunConfig& c, const MonitorSeries& series,
                const SpaceForm& sf, int dim, const std::vector<double>& rho) {
  const Sink sink(c);
  sink.put("monitors.csv", monitors_csv(series));
  const json verdicts = verdicts_json(c, series, hash_doubles(rho));
  sink.put("verdicts.json", verdicts);
  sink.put("final_shape.json",
           json{{"K", sf.K}, {"dim", dim}, {"rho", rho}});
  sink.put("config.json", config_json(c));

  std::printf("flow %s: steps=%ld stop=%s converged=%s\n", c.flow.c_str(),
              series.steps, series.stop_reason.c_str(),
              series.converged ? "yes" : "no");
  bool all = true;
  for (const auto& tr : series.tracks) {
    std::printf("  %-16s claim=%-13s max_violation=%.3e %s\n", tr.name.c_str(),
                claim_name(tr.claim), tr.max_violation,
                tr.pass ? "pass" : "FAIL");
    all = all && tr.pass;
  }
  return all ? 0 : 1;
}

int cmd_flow(const RunConfig& c) {
  if (c.flow.empty()) throw std::invalid_argument("flow: --flow is required");
  const SpaceForm sf = make_space_form(c.K);
  const FlowSpec spec = flow_spec_from(c);
  check_flow_space(sf, c.dim, spec);
  const Weight w = parse_weight(c.weight);
  const auto names = monitor_list(c, spec.flow);
  if (c.dim == 2) {
    const auto run = run_curve_flow(parse_curve_spec(sf, c.shape, c.samples),
                                    spec, names, w);
    return report_flow(c, run.series, sf, 2, run.final_shape.rho);
  }
  const auto run = run_axisym_flow(
      parse_axisym_spec(sf, c.dim, c.shape, c.samples), spec, names, w);
  return report_flow(c, run.series, sf, c.dim, run.final_shape.rho);
}

// ---------------------------------------------------------------------------
// verify

std::vector<InequalityReport> run_verifier(const RunConfig& c,
                                           const SpaceForm& sf) {
  const Weight w = parse_weight(c.weight);
  std::vector<InequalityReport> reports;
  if (!c.suite.empty()) {
    if (c.suite != "weighted-iso")
      throw std::invalid_argument("unknown suite '" + c.suite + "'");
    if (c.dim != 2)
      throw std::invalid_argument("suite weighted-iso runs on curves");
    return weighted_iso_suite(
        curve_geometry(parse_curve_spec(sf, c.shape, c.samples)));
  }
  if (c.theorem.empty())
    throw std::invalid_argument("verify: --theorem or --suite is required");
  if (c.dim == 2) {
    const auto g = curve_geometry(parse_curve_spec(sf, c.shape, c.samples));
    if (c.theorem == "afw") reports.push_back(verify_afw(g, w, c.k, c.l));
    else if (c.theorem == "minkowski2d")
      reports.push_back(verify_minkowski2d(g, w));
    else if (c.theorem == "3term") reports.push_back(verify_3term(g));
    else if (c.theorem == "eigen-bound")
      reports.push_back(verify_eigen_bound(g));
    else
      throw std::invalid_argument("theorem '" + c.theorem +
                                  "' does not apply to curves");
    return reports;
  }
  const auto g =
      axisym_geometry(parse_axisym_spec(sf, c.dim, c.shape, c.samples));
  if (c.theorem == "afw") reports.push_back(verify_afw(g, w, c.k, c.l));
  else if (c.theorem == "minkowskiH")
    reports.push_back(verify_minkowskiH(g, w));
  else if (c.theorem == "minkowskiS")
    reports.push_back(verify_minkowskiS(g, w));
  else if (c.theorem == "3term") reports.push_back(verify_3term(g, c.k));
  else if (c.theorem == "eigen-bound")
    reports.push_back(verify_eigen_bound(g, c.k));
  else
    throw std::invalid_argument("theorem '" + c.theorem +
                                "' does not apply to axisym shapes");
  return reports;
}

int cmd_verify(const RunConfig& c) {
  const SpaceForm sf = make_space_form(c.K);
  const auto reports = run_verifier(c, sf);
  json arr = json::array();
  bool ok = true;
  for (const auto& r : reports) {
    print_report(r);
    arr.push_back(report_json(r));
    ok = ok && r.verdict != "violated";
  }
  const Sink sink(c);
  sink.put("reports.json", json{{"version", kVersion},
                                {"config_digest", config_digest(c)},
                                {"reports", arr}});
  sink.put("config.json", config_json(c));
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// eigen

std::string spectrum_csv(const SpectrumResult& s) {
  std::string csv = "index,mode,lambda,residual\n";
  for (size_t i = 0; i < s.eigenvalues.size(); ++i)
    csv += std::to_string(i) + "," + std::to_string(s.modes[i]) + "," +
           num17(s.eigenvalues[i]) + "," + num17(s.residuals[i]) + "\n";
  return csv;
}

int cmd_eigen(const RunConfig& c) {
  const SpaceForm sf = make_space_form(c.K);
  const Sink sink(c);
  json out = {{"version", kVersion},
              {"config_digest", config_digest(c)},
              {"tolerance", kEigenTol}};
  int rc = 0;
  if (c.dim == 2) {
    const auto g = curve_geometry(parse_curve_spec(sf, c.shape, c.samples));
    const auto s = curve_spectrum(g, c.count ? c.count : 4);
    sink.put("spectrum.csv", spectrum_csv(s));
    out["lambda1"] = lambda1(s);
    std::printf("lambda1=%.12g (size=%d)\n", lambda1(s), s.size);
    if (sf.K == 0) {
      const auto rep = verify_eigen_bound(g);
      print_report(rep);
      out["bound"] = rep.lhs;
      out["report"] = report_json(rep);
      rc = rep.verdict == "violated" ? 1 : 0;
    }
  } else if (c.dim == 3) {
    const auto g =
        axisym_geometry(parse_axisym_spec(sf, c.dim, c.shape, c.samples));
    const auto s = axisym_spectrum(g, c.k, c.max_mode, c.count ? c.count : 6);
    sink.put("spectrum.csv", spectrum_csv(s));
    out["lambda1"] = lambda1(s);
    std::printf("lambda1=%.12g (size=%d)\n", lambda1(s), s.size);
    if (sf.K == 0) {
      const auto rep = verify_eigen_bound(g, c.k);
      print_report(rep);
      out["bound"] = rep.lhs;
      out["report"] = report_json(rep);
      rc = rep.verdict == "violated" ? 1 : 0;
    }
  } else {
    // Eigen-solving covers curves and n=3 surfaces; the bound itself is
    // dimension-agnostic, so higher n still gets a value.
    const auto g =
        axisym_geometry(parse_axisym_spec(sf, c.dim, c.shape, c.samples));
    out["bound"] = eigen_bound(g, c.k);
    std::printf("bound=%.12g (eigen-solving is n<=3 only)\n",
                eigen_bound(g, c.k));
  }
  if (!out.contains("bound"))
    out["note"] = "comparison bound requires flat ambient space";
  sink.put("report.json", out);
  sink.put("config.json", config_json(c));
  return rc;
}

// ---------------------------------------------------------------------------
// sweep

struct JobRow {
  int job = 0;
  std::uint64_t seed = 0;
  std::string status;  // equality | holds | violated | pass | fail | error
  std::string detail;
  double lhs = 0.0, rhs = 0.0, margin = 0.0, scale = 0.0;
};

// Corpus class required by each verifier/flow: the convexity cone the
// hypotheses demand, plus h-convexity where the theorem asks for it.
std::pair<int, bool> corpus_class(const RunConfig& c) {
  const std::string& goal = c.flow.empty() ? c.theorem : c.flow;
  if (goal == "minkowskiH" || goal == "hyp-mean") return {1, true};
  if (goal == "minkowskiS" || goal == "sph-mean") return {2, false};
  if (goal == "afw" || goal == "3term" || goal == "eigen-bound" ||
      goal == "imcf-k")
    return {std::max(1, c.k), false};
  return {1, false};
}

JobRow sweep_job(const RunConfig& c, const SpaceForm& sf, int job) {
  JobRow row;
  row.job = job;
  row.seed = c.seed + static_cast<std::uint64_t>(job);
  const auto [cls, hconv] = corpus_class(c);
  if (!c.flow.empty()) {
    const FlowSpec spec = flow_spec_from(c);
    check_flow_space(sf, c.dim, spec);
    const Weight w = parse_weight(c.weight);
    const auto names = monitor_list(c, spec.flow);
    MonitorSeries series;
    if (c.dim == 2)
      series = run_curve_flow(
                   random_convex_curve(sf, c.samples, c.base, c.amp, row.seed),
                   spec, names, w)
                   .series;
    else
      series = run_axisym_flow(
                   random_convex_axisym(sf, c.dim, c.samples, cls, c.base,
                                        c.amp, row.seed, hconv),
                   spec, names, w)
                   .series;
    bool all = true;
    double worst = 0.0;
    std::string worst_name;
    for (const auto& tr : series.tracks) {
      all = all && tr.pass;
      if (tr.max_violation >= worst) {
        worst = tr.max_violation;
        worst_name = tr.name;
      }
    }
    row.status = all ? "pass" : "fail";
    row.detail = "steps=" + std::to_string(series.steps) + " stop=" +
                 series.stop_reason + " worst=" + worst_name;
    row.margin = worst;
    return row;
  }
  std::vector<InequalityReport> reports;
  {
    if (c.dim == 2) {
      const auto curve =
          random_convex_curve(sf, c.samples, c.base, c.amp, row.seed);
      const auto g = curve_geometry(curve);
      if (!c.suite.empty()) {
        reports = weighted_iso_suite(g);
      } else {
        const Weight w = parse_weight(c.weight);
        if (c.theorem == "afw") reports.push_back(verify_afw(g, w, c.k, c.l));
        else if (c.theorem == "minkowski2d")
          reports.push_back(verify_minkowski2d(g, w));
        else if (c.theorem == "3term") reports.push_back(verify_3term(g));
        else if (c.theorem == "eigen-bound")
          reports.push_back(verify_eigen_bound(g));
        else
          throw std::invalid_argument("theorem '" + c.theorem +
                                      "' does not apply to curves");
      }
    } else {
      const auto g = axisym_geometry(random_convex_axisym(
          sf, c.dim, c.samples, cls, c.base, c.amp, row.seed, hconv));
      const Weight w = parse_weight(c.weight);
      if (c.theorem == "afw") reports.push_back(verify_afw(g, w, c.k, c.l));
      else if (c.theorem == "minkowskiH")
        reports.push_back(verify_minkowskiH(g, w));
      else if (c.theorem == "minkowskiS")
        reports.push_back(verify_minkowskiS(g, w));
      else if (c.theorem == "3term") reports.push_back(verify_3term(g, c.k));
      else if (c.theorem == "eigen-bound")
        reports.push_back(verify_eigen_bound(g, c.k));
      else
        throw std::invalid_argument("theorem '" + c.theorem +
                                    "' does not apply to axisym shapes");
    }
  }
  // Worst report of the job decides the row.
  const InequalityReport* pick = &reports.front();
  for (const auto& r : reports) {
    auto rank = [](const std::string& v) {
      return v == "violated" ? 2 : v == "holds" ? 1 : 0;
    };
    if (rank(r.verdict) > rank(pick->verdict) ||
        (rank(r.verdict) == rank(pick->verdict) &&
         r.margin / std::max(r.scale, 1e-300) <
             pick->margin / std::max(pick->scale, 1e-300)))
      pick = &r;
  }
  row.status = pick->verdict;
  row.detail = pick->params;
  row.lhs = pick->lhs;
  row.rhs = pick->rhs;
  row.margin = pick->margin;
  row.scale = pick->scale;
  return row;
}

int cmd_sweep(const RunConfig& c) {
  if (c.flow.empty() && c.theorem.empty() && c.suite.empty())
    throw std::invalid_argument("sweep: --flow, --theorem, or --suite");
  const SpaceForm sf = make_space_form(c.K);
  const int count = c.count > 0 ? c.count : 10;
  std::vector<JobRow> rows(count);
  std::vector<std::string> errors(count);

  const int workers = std::min(worker_count(), count);
  std::atomic<int> next{0};
  auto body = [&] {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        rows[i] = sweep_job(c, sf, i);
      } catch (const std::exception& e) {
        rows[i].job = i;
        rows[i].seed = c.seed + static_cast<std::uint64_t>(i);
        rows[i].status = "error";
        rows[i].detail = e.what();
        errors[i] = e.what();
      }
    }
  };
  if (workers <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
  }

  std::string csv = "job,seed,status,lhs,rhs,margin,scale,detail\n";
  int passed = 0, violated = 0, failed = 0;
  for (const auto& r : rows) {
    csv += std::to_string(r.job) + "," + std::to_string(r.seed) + "," +
           r.status + "," + num17(r.lhs) + "," + num17(r.rhs) + "," +
           num17(r.margin) + "," + num17(r.scale) + ",\"" + r.detail + "\"\n";
    if (r.status == "violated" || r.status == "fail") ++violated;
    else if (r.status == "error") ++failed;
    else ++passed;
    std::printf("job %2d seed=%llu %-9s %s\n", r.job,
                static_cast<unsigned long long>(r.seed), r.status.c_str(),
                r.detail.c_str());
  }
  std::printf("sweep: %d/%d pass, %d violated, %d errors\n", passed, count,
              violated, failed);

  const Sink sink(c);
  sink.put("sweep.csv", csv);
  sink.put("summary.json", json{{"version", kVersion},
                                {"config_digest", config_digest(c)},
                                {"count", count},
                                {"pass", passed},
                                {"violated", violated},
                                {"errors", failed}});
  sink.put("config.json", config_json(c));
  if (failed > 0) return 3;
  return violated > 0 ? 1 : 0;
}

// ---------------------------------------------------------------------------

void add_common(CLI::App* cmd, RunConfig& c, std::string& space,
                std::string& config_file) {
  cmd->add_option("--space", space,
                  "euclidean|hyperbolic|sphere|m2|m3 (m2/m3 take --K)");
  cmd->add_option("--K", c.K, "curvature of the ambient space form (-1|0|1)");
  cmd->add_option("--dim", c.dim, "ambient dimension n (default: from shape)");
  cmd->add_option("--shape", c.shape,
                  "shape spec, e.g. circle:2, ellipse:2:1, fourier:1:a1:b1:..., "
                  "sphere:1, offset_sphere:1:0.3, legendre:1:c1:c2, random:seed");
  cmd->add_option("--weight", c.weight, "weight preset id (default monomial:1)");
  cmd->add_option("--samples", c.samples, "grid size N/M (0 = per-command default)");
  cmd->add_option("--out", c.out, "directory for CSV/JSON artifacts");
  cmd->add_option("--config", config_file, "JSON config; flags override")
      ->check(CLI::ExistingFile);
}

int dispatch(RunConfig& c, const CLI::App* cmd, const std::string& space,
             const std::string& config_file) {
  if (!config_file.empty()) {
    std::ifstream f(config_file);
    json j;
    try {
      f >> j;
    } catch (const json::exception& e) {
      throw std::invalid_argument(std::string("config: ") + e.what());
    }
    overlay_config(j, cmd, c);
  }
  resolve_space(c, space, cmd->count("--K") > 0, cmd->count("--dim") > 0);
  if (c.dim == 0) c.dim = infer_dim(c.shape);
  if (c.samples == 0)
    c.samples = default_samples(c.dim, c.command == "flow" ||
                                           (c.command == "sweep" &&
                                            !c.flow.empty()));
  if (c.command == "flow") return cmd_flow(c);
  if (c.command == "verify") return cmd_verify(c);
  if (c.command == "eigen") return cmd_eigen(c);
  return cmd_sweep(c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geomflow: geometric flows, weighted geometric inequalities, "
               "and first-eigenvalue bounds on space-form hypersurfaces"};
  app.set_version_flag("--version", std::string("geomflow ") + kVersion);
  app.require_subcommand(0, 1);

  RunConfig cfg;
  std::string space, config_file;

  auto* flow = app.add_subcommand("flow", "run a flow, record monitors");
  add_common(flow, cfg, space, config_file);
  flow->add_option("--flow", cfg.flow, "curve-lp|imcf-k|hyp-mean|sph-mean");
  flow->add_option("--k", cfg.k, "order parameter of imcf-k");
  flow->add_option("--dt", cfg.dt, "step cap (a parabolic bound may shrink it)");
  flow->add_option("--steps", cfg.steps, "maximum committed steps");
  flow->add_option("--stop-tol", cfg.stop_tol, "stationary threshold on max|F|");
  flow->add_option("--stop-roundness", cfg.stop_roundness,
                   "stop once max rho - min rho falls below this (0 = off)");
  flow->add_flag("--euler", cfg.euler, "first-order stepping (default midpoint)");
  flow->add_option("--monitor", cfg.monitors, "extra monitor id (repeatable)");

  auto* verify = app.add_subcommand("verify", "evaluate inequality verifiers");
  add_common(verify, cfg, space, config_file);
  verify->add_option("--theorem", cfg.theorem,
                     "afw|minkowski2d|minkowskiH|minkowskiS|3term|eigen-bound");
  verify->add_option("--suite", cfg.suite, "weighted-iso (curves only)");
  verify->add_option("--k", cfg.k, "curvature order");
  verify->add_option("--l", cfg.l, "comparison order (-1 <= l <= k-1)");

  auto* eigen = app.add_subcommand("eigen", "spectrum and eigenvalue bound");
  add_common(eigen, cfg, space, config_file);
  eigen->add_option("--k", cfg.k, "curvature order of the weighting");
  eigen->add_option("--count", cfg.count, "eigenvalues requested");
  eigen->add_option("--max-mode", cfg.max_mode, "largest Fourier index (axisym)");

  auto* sweep = app.add_subcommand("sweep", "random convex corpus battery");
  add_common(sweep, cfg, space, config_file);
  sweep->add_option("--theorem", cfg.theorem, "verifier to run per shape");
  sweep->add_option("--suite", cfg.suite, "weighted-iso (curves only)");
  sweep->add_option("--flow", cfg.flow, "flow battery instead of a verifier");
  sweep->add_option("--k", cfg.k, "curvature order");
  sweep->add_option("--l", cfg.l, "comparison order");
  sweep->add_option("--count", cfg.count, "corpus size (default 10)");
  sweep->add_option("--amp", cfg.amp, "perturbation amplitude");
  sweep->add_option("--seed", cfg.seed, "base seed; job i uses seed+i");
  sweep->add_option("--base", cfg.base, "base radius of corpus shapes");
  sweep->add_option("--dt", cfg.dt, "flow step cap");
  sweep->add_option("--steps", cfg.steps, "flow step limit");
  sweep->add_option("--stop-tol", cfg.stop_tol, "flow stationary threshold");
  sweep->add_option("--stop-roundness", cfg.stop_roundness,
                    "flow roundness stop (0 = off)");
  sweep->add_flag("--euler", cfg.euler, "first-order stepping");
  sweep->add_option("--monitor", cfg.monitors, "extra monitor id (repeatable)");

  CLI::App* chosen = nullptr;
  try {
    app.parse(argc, argv);
    for (auto* sub : {flow, verify, eigen, sweep})
      if (sub->parsed()) chosen = sub;
    if (!chosen) {
      std::fputs(app.help().c_str(), stderr);
      return 2;
    }
    cfg.command = chosen->get_name();
    return dispatch(cfg, chosen, space, config_file);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const FlowError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const CorpusFailure& e) {
    std::fprintf(stderr, "corpus failure: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
}
