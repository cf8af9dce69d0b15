// command line front end; everything numerical goes through the C API
#include <CLI11.hpp>
#include <json.hpp>
#include <maslov/maslov.h>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

// exit code contract (see README): 0 success, 1 parse/usage/IO trouble,
// 2 standing hypotheses fail, 3 a numerical cross-check fails,
// 4 spectrally-unstable verdict
int exit_for(int status) {
  switch (status) {
    case MASLOV_OK:
      return 0;
    case MASLOV_ERR_PARSE:
    case MASLOV_ERR_IO:
    case MASLOV_ERR_INVALID_ARGUMENT:
      return 1;
    case MASLOV_ERR_HYPOTHESIS_VIOLATION:
    case MASLOV_ERR_NOT_HYPERBOLIC:
    case MASLOV_ERR_NOT_EQUILIBRIUM:
    case MASLOV_ERR_SINGULAR_P:
    case MASLOV_ERR_TANGENTIAL_ZERO:
      return 2;
    default:
      return 3;
  }
}

[[noreturn]] void die(int status) {
  std::fprintf(stderr, "error: %s\n", maslov_last_error());
  std::exit(exit_for(status));
}

std::string read_file_or_die(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) {
    std::fprintf(stderr, "error: cannot open %s\n", path.c_str());
    std::exit(1);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fnv1a_digest(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string take_string(char* s) {
  std::string out = s == nullptr ? "" : s;
  maslov_string_free(s);
  return out;
}

void write_file_or_die(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out.good()) {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    std::exit(1);
  }
}

struct Manifest {
  std::string command;
  std::string input;
  std::string input_digest;
  json config = json::object();
  std::vector<std::string> outputs;
  std::string path;  // explicit --manifest, else derived from first output
  bool suppress = false;

  void write() const {
    if (suppress || (outputs.empty() && path.empty())) return;
    const std::string dest = path.empty() ? outputs.front() + ".manifest.json" : path;
    json m{{"command", command},
           {"input", input},
           {"input_digest", input_digest},
           {"config", config},
           {"tool_version", maslov_version()},
           {"outputs", outputs}};
    write_file_or_die(dest, m.dump(2) + "\n");
  }
};

Manifest make_manifest(std::string command, const std::string& input,
                       const std::string& digest) {
  Manifest m;
  m.command = std::move(command);
  m.input = input;
  m.input_digest = digest;
  return m;
}

void print_machine_block(const std::string& body) {
  std::printf("--- result json ---\n%s\n", body.c_str());
}

// options assembled as: struct defaults, then --config file fields, then
// explicit command line flags
json load_config_base(const std::string& path) {
  if (path.empty()) return json::object();
  json j = json::parse(read_file_or_die(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    std::fprintf(stderr, "error: config %s is not a JSON object\n", path.c_str());
    std::exit(1);
  }
  return j;
}

void set_if(CLI::App* cmd, const std::string& flag, json& obj, const char* key, double v) {
  if (cmd->count(flag) > 0) obj[key] = v;
}
void set_if(CLI::App* cmd, const std::string& flag, json& obj, const char* key, int v) {
  if (cmd->count(flag) > 0) obj[key] = v;
}

maslov_problem* load_problem_or_die(const std::string& path) {
  maslov_problem* p = nullptr;
  const int st = maslov_problem_from_file(path.c_str(), &p);
  if (st != MASLOV_OK) die(st);
  return p;
}

// ---- validate -------------------------------------------------------

struct ValidateArgs {
  std::string problem;
  std::string json_out, manifest;
  bool no_manifest = false;
};

int run_validate(const ValidateArgs& a) {
  const std::string text = read_file_or_die(a.problem);
  maslov_problem* p = load_problem_or_die(a.problem);
  char* rep = nullptr;
  const int st = maslov_validate(p, &rep);
  maslov_problem_free(p);
  if (st != MASLOV_OK) die(st);
  const std::string body = take_string(rep);
  const json j = json::parse(body);

  const bool ok = j["hypotheses_ok"].get<bool>();
  std::printf("problem: %s\n", a.problem.c_str());
  std::printf("coefficient regularity: c1 %.3e, c2 %.3e, c3 %.3e\n", j["c1"].get<double>(),
              j["c2"].get<double>(), j["c3"].get<double>());
  std::printf("limit positivity: left %s, right %s\n", j["l2_minus_ok"] ? "ok" : "FAIL",
              j["l2_plus_ok"] ? "ok" : "FAIL");
  std::printf("hyperbolic limits: left %s, right %s, gap %.3e\n",
              j["hyperbolic_minus"] ? "ok" : "FAIL", j["hyperbolic_plus"] ? "ok" : "FAIL",
              j["spectral_gap"].get<double>());
  for (const auto& w : j["warnings"]) std::printf("warning: %s\n", w.get<std::string>().c_str());
  std::printf("hypotheses: %s\n", ok ? "PASS" : "FAIL");
  print_machine_block(body);

  Manifest man = make_manifest("validate", a.problem, fnv1a_digest(text));
  man.path = a.manifest;
  man.suppress = a.no_manifest;
  if (!a.json_out.empty()) {
    write_file_or_die(a.json_out, body + "\n");
    man.outputs.push_back(a.json_out);
  }
  man.write();
  return ok ? 0 : 2;
}

// ---- morse ----------------------------------------------------------

struct MorseArgs {
  std::string problem, config;
  std::string diag_csv, frames_csv, json_out, manifest;
  bool no_manifest = false;
  bool oracle = false;
  bool no_plateau = false, no_crosscheck = false;
  double rel_tol = 0, abs_tol = 0, trunc_eps = 0, t_min = 0, t_max = 0, sample_dt = 0;
  int reortho_every = 0;
  double sigma_threshold = 0, dip_threshold = 0, width_rel = 0;
  std::vector<double> window;
  std::int64_t gauge_seed = 0;
  double oracle_t_o = 0, deflate_below = 0;
  int oracle_n = 0, oracle_levels = 0;
  int inject_offset = 0;
};

json morse_options(CLI::App* cmd, const MorseArgs& a) {
  json o = load_config_base(a.config);
  json prop = o.value("propagation", json::object());
  set_if(cmd, "--rel-tol", prop, "rel_tol", a.rel_tol);
  set_if(cmd, "--abs-tol", prop, "abs_tol", a.abs_tol);
  set_if(cmd, "--trunc-eps", prop, "trunc_eps", a.trunc_eps);
  set_if(cmd, "--t-min", prop, "t_min", a.t_min);
  set_if(cmd, "--t-max", prop, "t_max", a.t_max);
  set_if(cmd, "--sample-dt", prop, "sample_dt", a.sample_dt);
  set_if(cmd, "--reortho-every", prop, "reortho_every", a.reortho_every);
  if (!prop.empty()) o["propagation"] = prop;
  json det = o.value("detect", json::object());
  set_if(cmd, "--sigma-threshold", det, "sigma_threshold", a.sigma_threshold);
  set_if(cmd, "--dip-threshold", det, "dip_threshold", a.dip_threshold);
  set_if(cmd, "--width-rel", det, "width_rel", a.width_rel);
  if (!det.empty()) o["detect"] = det;
  if (a.no_plateau) o["plateau"] = false;
  if (a.no_crosscheck) o["crosscheck"] = false;
  if (cmd->count("--gauge-seed") > 0) o["gauge_seed"] = a.gauge_seed;
  if (cmd->count("--window") > 0) o["window"] = a.window;
  if (a.oracle || o.contains("oracle")) {
    json oj = o.value("oracle", json::object());
    set_if(cmd, "--oracle-t-o", oj, "t_o", a.oracle_t_o);
    set_if(cmd, "--oracle-n-interior", oj, "n_interior", a.oracle_n);
    set_if(cmd, "--oracle-levels", oj, "richardson_levels", a.oracle_levels);
    set_if(cmd, "--deflate-below", oj, "deflate_below", a.deflate_below);
    o["oracle"] = oj;
  }
  if (!a.diag_csv.empty()) o["diagnostics_csv"] = a.diag_csv;
  if (!a.frames_csv.empty()) o["frames_csv"] = a.frames_csv;
  if (a.inject_offset != 0) o["inject_index_offset"] = a.inject_offset;
  return o;
}

int run_morse(CLI::App* cmd, const MorseArgs& a) {
  const std::string text = read_file_or_die(a.problem);
  const json opts = morse_options(cmd, a);
  maslov_problem* p = load_problem_or_die(a.problem);
  char* out = nullptr;
  const int st = maslov_morse(p, opts.dump().c_str(), &out);
  maslov_problem_free(p);
  if (st != MASLOV_OK) die(st);
  const std::string body = take_string(out);
  const json j = json::parse(body);

  std::printf("problem: %s\n", a.problem.c_str());
  std::printf("index: %d\n", j["index"].get<int>());
  if (j["crossings"].empty()) {
    std::printf("crossings: none\n");
  } else {
    std::printf("crossings:\n");
    for (const auto& c : j["crossings"])
      std::printf("  tau = %+.6f  multiplicity %d  bracket width %.1e\n",
                  c["tau"].get<double>(), c["multiplicity"].get<int>(),
                  c["width"].get<double>());
  }
  if (j["maslov_crosscheck"].is_null())
    std::printf("arc-count crosscheck: skipped\n");
  else
    std::printf("arc-count crosscheck: %d (agrees)\n", j["maslov_crosscheck"].get<int>());
  if (j["oracle_crosscheck"].is_null())
    std::printf("finite element crosscheck: not run\n");
  else
    std::printf("finite element crosscheck: %d (agrees)\n", j["oracle_crosscheck"].get<int>());
  std::printf("window: [%.3f, %.3f], plateau %s\n", j["truncation"][0].get<double>(),
              j["truncation"][1].get<double>(),
              j["plateau_verified"].get<bool>()    ? "verified"
              : j["plateau_attempted"].get<bool>() ? "FAILED"
                                                   : "skipped");
  if (j["degenerate_tail"].get<bool>())
    std::printf("note: bundle hugs the decaying space at the right end\n");
  for (const auto& w : j["warnings"]) std::printf("warning: %s\n", w.get<std::string>().c_str());
  print_machine_block(body);

  Manifest man = make_manifest("morse", a.problem, fnv1a_digest(text));
  man.config = opts;
  man.path = a.manifest;
  man.suppress = a.no_manifest;
  if (!a.diag_csv.empty()) man.outputs.push_back(a.diag_csv);
  if (!a.frames_csv.empty()) man.outputs.push_back(a.frames_csv);
  if (!a.json_out.empty()) {
    write_file_or_die(a.json_out, body + "\n");
    man.outputs.push_back(a.json_out);
  }
  man.write();
  return 0;
}

// ---- oracle ---------------------------------------------------------

struct OracleArgs {
  std::string problem, config;
  std::string eigs_csv, json_out, manifest;
  bool no_manifest = false;
  double t_o = 0, deflate_below = 0, zero_sentinel = 0;
  int n_interior = 0, levels = 0, k = 0;
};

int run_oracle(CLI::App* cmd, const OracleArgs& a) {
  const std::string text = read_file_or_die(a.problem);
  json o = load_config_base(a.config);
  set_if(cmd, "--t-o", o, "t_o", a.t_o);
  set_if(cmd, "--n-interior", o, "n_interior", a.n_interior);
  set_if(cmd, "--levels", o, "richardson_levels", a.levels);
  set_if(cmd, "--zero-sentinel", o, "zero_sentinel", a.zero_sentinel);
  set_if(cmd, "--deflate-below", o, "deflate_below", a.deflate_below);
  set_if(cmd, "-k", o, "k", a.k);
  if (!a.eigs_csv.empty()) o["eigenvalues_csv"] = a.eigs_csv;

  maslov_problem* p = load_problem_or_die(a.problem);
  char* out = nullptr;
  const int st = maslov_oracle(p, o.dump().c_str(), &out);
  maslov_problem_free(p);
  if (st != MASLOV_OK) die(st);
  const std::string body = take_string(out);
  const json j = json::parse(body);

  std::printf("problem: %s\n", a.problem.c_str());
  std::printf("negative eigenvalue count: %d\n", j["count"].get<int>());
  std::printf("per-level counts:");
  for (size_t i = 0; i < j["level_counts"].size(); ++i)
    std::printf(" %d (N=%d)", j["level_counts"][i].get<int>(), j["level_points"][i].get<int>());
  std::printf("\n");
  if (j.contains("eigenvalues")) {
    std::printf("smallest eigenvalues:");
    for (const auto& v : j["eigenvalues"]) std::printf(" %.6g", v.get<double>());
    std::printf("\n");
  }
  print_machine_block(body);

  Manifest man = make_manifest("oracle", a.problem, fnv1a_digest(text));
  man.config = o;
  man.path = a.manifest;
  man.suppress = a.no_manifest;
  if (!a.eigs_csv.empty()) man.outputs.push_back(a.eigs_csv);
  if (!a.json_out.empty()) {
    write_file_or_die(a.json_out, body + "\n");
    man.outputs.push_back(a.json_out);
  }
  man.write();
  return 0;
}

// ---- indices --------------------------------------------------------

struct IndicesArgs {
  std::string frames, which;
  std::string json_out, manifest;
  bool no_manifest = false;
};

int run_indices(const IndicesArgs& a) {
  const std::string text = read_file_or_die(a.frames);
  char* out = nullptr;
  const int st = maslov_indices(text.c_str(), a.which.c_str(), &out);
  if (st != MASLOV_OK) die(st);
  const std::string body = take_string(out);
  const json j = json::parse(body);

  std::printf("frames: %s\n", a.frames.c_str());
  if (a.which == "maslov") {
    std::printf("path index: %d\n", j["index"].get<int>());
    for (const auto& c : j["crossings"])
      std::printf("  crossing at tau = %+.6f  multiplicity %d  signature %+d%s\n",
                  c["tau"].get<double>(), c["multiplicity"].get<int>(),
                  c["positive"].get<int>() - c["negative"].get<int>(),
                  c["at_left_end"].get<bool>()    ? "  (left end)"
                  : c["at_right_end"].get<bool>() ? "  (right end)"
                                                  : "");
  } else {
    std::printf("%s index: %d\n", a.which.c_str(), j["value"].get<int>());
    std::printf("routes agree: %s\n", j["routes_agree"].get<bool>() ? "yes" : "NO");
  }
  print_machine_block(body);

  Manifest man = make_manifest("indices " + a.which, a.frames, fnv1a_digest(text));
  man.path = a.manifest;
  man.suppress = a.no_manifest;
  if (!a.json_out.empty()) {
    write_file_or_die(a.json_out, body + "\n");
    man.outputs.push_back(a.json_out);
  }
  man.write();
  return 0;
}

// ---- wave -----------------------------------------------------------

struct WaveArgs {
  std::string system, config;
  std::string profile_csv, diag_csv, json_out, manifest;
  bool no_manifest = false;
  bool no_morse = false;
  double crit_tol = 0;
  double rel_tol = 0, abs_tol = 0, trunc_eps = 0, t_min = 0, t_max = 0, sample_dt = 0;
};

int run_wave(CLI::App* cmd, const WaveArgs& a, bool analyze) {
  const std::string text = read_file_or_die(a.system);
  maslov_wave* w = nullptr;
  int st = maslov_wave_solve(text.c_str(), &w);
  if (st != MASLOV_OK) die(st);

  char* info_raw = nullptr;
  st = maslov_wave_info(w, &info_raw);
  if (st != MASLOV_OK) die(st);
  const json info = json::parse(take_string(info_raw));
  std::printf("system: %s\n", a.system.c_str());
  std::printf("%s with speed c = %.12g, discrete residual %.2e, %d points on [%.6g, %.6g]\n",
              info["kind"].get<std::string>().c_str(), info["c"].get<double>(),
              info["residual_sup"].get<double>(), info["points"].get<int>(),
              -info["half_width"].get<double>(), info["half_width"].get<double>());

  Manifest man =
      make_manifest(analyze ? "wave analyze" : "wave front", a.system, fnv1a_digest(text));
  man.path = a.manifest;
  man.suppress = a.no_manifest;
  if (!a.profile_csv.empty()) {
    st = maslov_wave_profile_csv(w, a.profile_csv.c_str());
    if (st != MASLOV_OK) die(st);
    man.outputs.push_back(a.profile_csv);
  }

  int code = 0;
  std::string body = info.dump(2);
  if (analyze) {
    json o = load_config_base(a.config);
    set_if(cmd, "--crit-tol", o, "crit_tol", a.crit_tol);
    if (a.no_morse) o["compute_morse"] = false;
    json prop = o.value("propagation", json::object());
    set_if(cmd, "--rel-tol", prop, "rel_tol", a.rel_tol);
    set_if(cmd, "--abs-tol", prop, "abs_tol", a.abs_tol);
    set_if(cmd, "--trunc-eps", prop, "trunc_eps", a.trunc_eps);
    set_if(cmd, "--t-min", prop, "t_min", a.t_min);
    set_if(cmd, "--t-max", prop, "t_max", a.t_max);
    set_if(cmd, "--sample-dt", prop, "sample_dt", a.sample_dt);
    if (!prop.empty()) o["propagation"] = prop;
    man.config = o;

    char* out = nullptr;
    st = maslov_wave_analyze(w, o.dump().c_str(), &out);
    if (st != MASLOV_OK) {
      maslov_wave_free(w);
      die(st);
    }
    body = take_string(out);
    const json j = json::parse(body);
    if (j["critical_points"].empty()) {
      std::printf("critical points of the tangential derivative: none\n");
    } else {
      std::printf("critical points of the tangential derivative:\n");
      for (const auto& t : j["critical_points"])
        std::printf("  xi = %+.8f\n", t.get<double>());
    }
    std::printf("index lower bound from critical points: %d\n",
                j["morse_lower_bound"].get<int>());
    if (!j["morse"].is_null()) {
      std::printf("weighted operator index: %d\n", j["morse"]["index"].get<int>());
      if (!a.diag_csv.empty()) {
        // re-derive the weighted problem so the detection table can be dumped
        maslov_problem* wp = nullptr;
        st = maslov_wave_weighted_problem(w, &wp);
        if (st != MASLOV_OK) die(st);
        json mo = o.value("morse", json::object());
        if (o.contains("propagation")) mo["propagation"] = o["propagation"];
        mo["diagnostics_csv"] = a.diag_csv;
        char* mraw = nullptr;
        st = maslov_morse(wp, mo.dump().c_str(), &mraw);
        maslov_problem_free(wp);
        if (st != MASLOV_OK) die(st);
        maslov_string_free(mraw);
        man.outputs.push_back(a.diag_csv);
      }
    }
    for (const auto& msg : j["warnings"])
      std::printf("warning: %s\n", msg.get<std::string>().c_str());
    const std::string verdict = j["verdict"].get<std::string>();
    std::printf("verdict: %s\n", verdict.c_str());
    if (verdict == "spectrally-unstable") code = 4;
  }
  maslov_wave_free(w);

  print_machine_block(body);
  if (!a.json_out.empty()) {
    write_file_or_die(a.json_out, body + "\n");
    man.outputs.push_back(a.json_out);
  }
  man.write();
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Morse index of Sturm-Liouville operators by conjugate point counting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(maslov_version()));

  ValidateArgs va;
  CLI::App* validate = app.add_subcommand("validate", "check the standing hypotheses");
  validate->add_option("problem", va.problem, "problem JSON file")->required();
  validate->add_option("--json", va.json_out, "write the report JSON here");
  validate->add_option("--manifest", va.manifest, "run manifest path");
  validate->add_flag("--no-manifest", va.no_manifest, "skip the run manifest");

  MorseArgs ma;
  CLI::App* morse = app.add_subcommand("morse", "count conjugate points");
  morse->add_option("problem", ma.problem, "problem JSON file")->required();
  morse->add_option("--config", ma.config, "JSON config, overridden field-by-field by flags");
  morse->add_flag("--oracle", ma.oracle, "cross-check against the finite element count");
  morse->add_flag("--no-plateau", ma.no_plateau, "skip the doubled-window recomputation");
  morse->add_flag("--no-crosscheck", ma.no_crosscheck, "skip the arc-count route");
  morse->add_option("--rel-tol", ma.rel_tol, "integrator relative tolerance");
  morse->add_option("--abs-tol", ma.abs_tol, "integrator absolute tolerance");
  morse->add_option("--trunc-eps", ma.trunc_eps, "coefficient settle tolerance");
  morse->add_option("--t-min", ma.t_min, "smallest half-width of the window");
  morse->add_option("--t-max", ma.t_max, "largest half-width of the window");
  morse->add_option("--sample-dt", ma.sample_dt, "output sample spacing");
  morse->add_option("--reortho-every", ma.reortho_every, "steps between re-orthonormalizations");
  morse->add_option("--sigma-threshold", ma.sigma_threshold, "crossing acceptance threshold");
  morse->add_option("--dip-threshold", ma.dip_threshold, "candidate gate for local minima");
  morse->add_option("--width-rel", ma.width_rel, "refinement width relative to the span");
  morse->add_option("--window", ma.window, "force the truncation window")->expected(2);
  morse->add_option("--gauge-seed", ma.gauge_seed, "random gauge seed for the initial frame");
  morse->add_option("--oracle-t-o", ma.oracle_t_o, "oracle box half-width");
  morse->add_option("--oracle-n-interior", ma.oracle_n, "oracle interior points");
  morse->add_option("--oracle-levels", ma.oracle_levels, "oracle refinement levels");
  morse->add_option("--deflate-below", ma.deflate_below,
                    "count oracle eigenvalues below this instead of 0");
  morse->add_option("--csv", ma.diag_csv, "write the detection table CSV here");
  morse->add_option("--frames-csv", ma.frames_csv, "write the propagated frames CSV here");
  morse->add_option("--json", ma.json_out, "write the result JSON here");
  morse->add_option("--manifest", ma.manifest, "run manifest path");
  morse->add_flag("--no-manifest", ma.no_manifest, "skip the run manifest");
  morse->add_option("--inject-index-offset", ma.inject_offset)->group("");

  OracleArgs oa;
  CLI::App* oracle = app.add_subcommand("oracle", "finite element negative eigenvalue count");
  oracle->add_option("problem", oa.problem, "problem JSON file")->required();
  oracle->add_option("--config", oa.config, "JSON config, overridden field-by-field by flags");
  oracle->add_option("--t-o", oa.t_o, "box half-width");
  oracle->add_option("--n-interior", oa.n_interior, "interior points at the coarsest level");
  oracle->add_option("--levels", oa.levels, "refinement levels that must agree");
  oracle->add_option("--zero-sentinel", oa.zero_sentinel, "reject eigenvalues this close to 0");
  oracle->add_option("--deflate-below", oa.deflate_below,
                     "count eigenvalues below this instead of 0");
  oracle->add_option("-k", oa.k, "also report the k smallest eigenvalues");
  oracle->add_option("--eigenvalues-csv", oa.eigs_csv, "write the eigenvalues CSV here");
  oracle->add_option("--json", oa.json_out, "write the result JSON here");
  oracle->add_option("--manifest", oa.manifest, "run manifest path");
  oracle->add_flag("--no-manifest", oa.no_manifest, "skip the run manifest");

  IndicesArgs ia;
  CLI::App* indices = app.add_subcommand("indices", "pointwise indices of explicit frames");
  indices->add_option("frames", ia.frames, "frames JSON file")->required();
  indices->add_option("--which", ia.which, "triple, hormander or maslov")
      ->required()
      ->check(CLI::IsMember({"triple", "hormander", "maslov"}));
  indices->add_option("--json", ia.json_out, "write the result JSON here");
  indices->add_option("--manifest", ia.manifest, "run manifest path");
  indices->add_flag("--no-manifest", ia.no_manifest, "skip the run manifest");

  WaveArgs wa;
  CLI::App* wave = app.add_subcommand("wave", "traveling wave profiles and stability");
  wave->require_subcommand(1);
  CLI::App* front = wave->add_subcommand("front", "solve the profile equation only");
  CLI::App* analyze = wave->add_subcommand("analyze", "solve, then run the instability test");
  for (CLI::App* sub : {front, analyze}) {
    sub->add_option("system", wa.system, "wave job JSON file")->required();
    sub->add_option("--profile-csv", wa.profile_csv, "write profile samples here");
    sub->add_option("--json", wa.json_out, "write the result JSON here");
    sub->add_option("--manifest", wa.manifest, "run manifest path");
    sub->add_flag("--no-manifest", wa.no_manifest, "skip the run manifest");
  }
  analyze->add_option("--config", wa.config, "JSON config, overridden field-by-field by flags");
  analyze->add_flag("--no-morse", wa.no_morse, "critical points only, skip the index");
  analyze->add_option("--crit-tol", wa.crit_tol, "relative threshold for tangential zeros");
  analyze->add_option("--rel-tol", wa.rel_tol, "integrator relative tolerance");
  analyze->add_option("--abs-tol", wa.abs_tol, "integrator absolute tolerance");
  analyze->add_option("--trunc-eps", wa.trunc_eps, "coefficient settle tolerance");
  analyze->add_option("--t-min", wa.t_min, "smallest half-width of the window");
  analyze->add_option("--t-max", wa.t_max, "largest half-width of the window");
  analyze->add_option("--sample-dt", wa.sample_dt, "output sample spacing");
  analyze->add_option("--csv", wa.diag_csv, "write the weighted detection table CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // usage problems are exit 1 regardless of the CLI11 code
  }

  if (*validate) return run_validate(va);
  if (*morse) return run_morse(morse, ma);
  if (*oracle) return run_oracle(oracle, oa);
  if (*indices) return run_indices(ia);
  if (*front) return run_wave(front, wa, false);
  if (*analyze) return run_wave(analyze, wa, true);
  return 1;
}
