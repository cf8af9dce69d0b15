#include "maslov/maslov.h"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "core/csv.hpp"
#include "core/indices.hpp"
#include "core/linalg.hpp"
#include "core/morse.hpp"
#include "core/oracle.hpp"
#include "core/problem_json.hpp"
#include "core/waves.hpp"

using nlohmann::json;

struct maslov_problem {
  maslov::SturmLiouvilleProblem prob;
};

struct maslov_wave {
  maslov::ReactionSystem sys;
  maslov::WaveProfile prof;
  bool default_morse = true;
};

namespace {

using maslov::ErrorCode;
using maslov::fail;
using maslov::require;

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int status_of(ErrorCode c) { return static_cast<int>(c) + 1; }

template <typename F>
int guarded(F&& f) {
  try {
    f();
    return MASLOV_OK;
  } catch (const maslov::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MASLOV_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unrecognized failure";
    return MASLOV_ERR_INTERNAL;
  }
}

json parse_object(const char* text, const char* what) {
  if (text == nullptr || *text == '\0') return json::object();
  json j = json::parse(text, nullptr, false);
  require(!j.is_discarded() && j.is_object(), ErrorCode::ParseError,
          std::string(what) + " must be a JSON object");
  return j;
}

double num_or(const json& j, const char* key, double dflt) {
  if (!j.contains(key)) return dflt;
  require(j[key].is_number(), ErrorCode::ParseError, std::string(key) + " must be a number");
  return j[key].get<double>();
}

int int_or(const json& j, const char* key, int dflt) {
  if (!j.contains(key)) return dflt;
  require(j[key].is_number_integer(), ErrorCode::ParseError,
          std::string(key) + " must be an integer");
  return j[key].get<int>();
}

bool bool_or(const json& j, const char* key, bool dflt) {
  if (!j.contains(key)) return dflt;
  require(j[key].is_boolean(), ErrorCode::ParseError, std::string(key) + " must be a boolean");
  return j[key].get<bool>();
}

std::string str_field(const json& j, const char* key) {
  require(j.contains(key) && j[key].is_string(), ErrorCode::ParseError,
          std::string(key) + " must be a string");
  return j[key].get<std::string>();
}

json sub_object(const json& j, const char* key) {
  if (!j.contains(key)) return json::object();
  require(j[key].is_object(), ErrorCode::ParseError, std::string(key) + " must be an object");
  return j[key];
}

maslov::PropagationConfig propagation_from(const json& j) {
  maslov::PropagationConfig c;
  c.rel_tol = num_or(j, "rel_tol", c.rel_tol);
  c.abs_tol = num_or(j, "abs_tol", c.abs_tol);
  c.reortho_every = int_or(j, "reortho_every", c.reortho_every);
  c.trunc_eps = num_or(j, "trunc_eps", c.trunc_eps);
  c.t_min = num_or(j, "t_min", c.t_min);
  c.t_max = num_or(j, "t_max", c.t_max);
  c.sample_dt = num_or(j, "sample_dt", c.sample_dt);
  return c;
}

maslov::MorseOptions morse_options_from(const json& j) {
  maslov::MorseOptions o;
  const json d = sub_object(j, "detect");
  o.detect.sigma_threshold = num_or(d, "sigma_threshold", o.detect.sigma_threshold);
  o.detect.dip_threshold = num_or(d, "dip_threshold", o.detect.dip_threshold);
  o.detect.width_rel = num_or(d, "width_rel", o.detect.width_rel);
  o.run_plateau = bool_or(j, "plateau", o.run_plateau);
  o.run_crosscheck = bool_or(j, "crosscheck", o.run_crosscheck);
  if (j.contains("gauge_seed")) {
    require(j["gauge_seed"].is_number_integer(), ErrorCode::ParseError,
            "gauge_seed must be an integer");
    o.gauge_seed = j["gauge_seed"].get<uint64_t>();
  }
  if (j.contains("window")) {
    const json& w = j["window"];
    require(w.is_array() && w.size() == 2 && w[0].is_number() && w[1].is_number(),
            ErrorCode::ParseError, "window must be [a, b]");
    o.window = std::make_pair(w[0].get<double>(), w[1].get<double>());
  }
  return o;
}

maslov::DiscretizationConfig discretization_from(const json& j) {
  maslov::DiscretizationConfig c;
  c.t_o = num_or(j, "t_o", c.t_o);
  c.n_interior = int_or(j, "n_interior", c.n_interior);
  c.richardson_levels = int_or(j, "richardson_levels", c.richardson_levels);
  c.zero_sentinel = num_or(j, "zero_sentinel", c.zero_sentinel);
  return c;
}

maslov::OracleCount run_oracle(const maslov::SturmLiouvilleProblem& p, const json& j) {
  const maslov::DiscretizationConfig dc = discretization_from(j);
  if (j.contains("deflate_below")) {
    require(j["deflate_below"].is_number(), ErrorCode::ParseError,
            "deflate_below must be a number");
    return maslov::negative_count_deflated(p, dc, j["deflate_below"].get<double>());
  }
  return maslov::negative_count(p, dc);
}

maslov::Mat mat_from(const json& a, int rows, int cols, const char* what) {
  require(a.is_array() && static_cast<int>(a.size()) == rows, ErrorCode::ParseError,
          std::string(what) + " must be a " + std::to_string(rows) + " row array");
  maslov::Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = a[r];
    require(row.is_array() && static_cast<int>(row.size()) == cols, ErrorCode::ParseError,
            std::string(what) + " rows need " + std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c) {
      require(row[c].is_number(), ErrorCode::ParseError,
              std::string(what) + " entries must be numbers");
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

maslov::LagrangianFrame frame_field(const json& j, const char* key, int n) {
  require(j.contains(key), ErrorCode::ParseError, std::string("missing frame ") + key);
  return maslov::LagrangianFrame::from_columns(mat_from(j[key], 2 * n, n, key));
}

json indices_triple(const json& j, int n) {
  const maslov::LagrangianFrame alpha = frame_field(j, "alpha", n);
  const maslov::LagrangianFrame beta = frame_field(j, "beta", n);
  const maslov::LagrangianFrame kappa = frame_field(j, "kappa", n);
  std::mt19937_64 rng(0x1d2c3b4a5ull);
  json out;
  out["which"] = "triple";
  out["value"] = maslov::triple_index_checked(alpha, beta, kappa, rng);
  out["routes_agree"] = true;
  return out;
}

json indices_hormander(const json& j, int n) {
  const maslov::LagrangianFrame l1 = frame_field(j, "l1", n);
  const maslov::LagrangianFrame l2 = frame_field(j, "l2", n);
  const maslov::LagrangianFrame k1 = frame_field(j, "k1", n);
  const maslov::LagrangianFrame k2 = frame_field(j, "k2", n);
  json out;
  out["which"] = "hormander";
  out["value"] = maslov::hormander_index(l1, l2, k1, k2);
  out["routes_agree"] = true;
  return out;
}

json indices_maslov(const json& j, int n) {
  const maslov::LagrangianFrame ref = frame_field(j, "reference", n);
  require(j.contains("taus") && j["taus"].is_array(), ErrorCode::ParseError,
          "taus must be an array");
  require(j.contains("path") && j["path"].is_array(), ErrorCode::ParseError,
          "path must be an array of frames");
  const std::size_t m = j["taus"].size();
  require(m >= 4 && j["path"].size() == m, ErrorCode::ParseError,
          "need >= 4 samples with one frame per tau");
  std::vector<double> taus(m);
  std::vector<maslov::Mat> raw(m);
  std::vector<maslov::LagrangianFrame> frames;
  frames.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    require(j["taus"][k].is_number(), ErrorCode::ParseError, "taus entries must be numbers");
    taus[k] = j["taus"][k].get<double>();
    if (k > 0)
      require(taus[k] > taus[k - 1], ErrorCode::ParseError, "taus must be increasing");
    raw[k] = mat_from(j["path"][k], 2 * n, n, "path frame");
    frames.push_back(maslov::LagrangianFrame::from_columns(raw[k]));
  }

  // entrywise splines through the raw samples stand in for the exact path
  // when a dip needs refining between samples
  maslov::Vec tv = Eigen::Map<const maslov::Vec>(taus.data(), static_cast<long>(m));
  std::vector<maslov::CubicSpline> entry;
  entry.reserve(static_cast<std::size_t>(2 * n * n));
  for (int r = 0; r < 2 * n; ++r)
    for (int c = 0; c < n; ++c) {
      maslov::Vec y(static_cast<long>(m));
      for (std::size_t k = 0; k < m; ++k) y(static_cast<long>(k)) = raw[k](r, c);
      entry.emplace_back(tv, y);
    }
  auto refiner = [n, entry](double t) {
    maslov::Mat f(2 * n, n);
    std::size_t idx = 0;
    for (int r = 0; r < 2 * n; ++r)
      for (int c = 0; c < n; ++c) f(r, c) = entry[idx++].eval(t);
    // interpolation error can exceed the strict isotropy tolerance, relax it
    return maslov::LagrangianFrame::from_columns(f, maslov::LagrangianFrame::kRankTol, 1e-6);
  };

  maslov::MaslovOptions opts;
  opts.refiner = refiner;
  const maslov::MaslovResult res =
      maslov::maslov_index(taus, frames, ref, maslov::fd_form_provider(refiner), opts);
  json out;
  out["which"] = "maslov";
  out["index"] = res.index;
  json table = json::array();
  for (const auto& c : res.crossings) {
    json row;
    row["tau"] = c.tau;
    row["multiplicity"] = c.multiplicity;
    row["positive"] = c.inertia.positive;
    row["negative"] = c.inertia.negative;
    row["at_left_end"] = c.at_left_end;
    row["at_right_end"] = c.at_right_end;
    table.push_back(row);
  }
  out["crossings"] = table;
  return out;
}

maslov::AnalysisConfig analysis_from(const json& j, bool default_morse) {
  maslov::AnalysisConfig cfg;
  cfg.crit_tol = num_or(j, "crit_tol", cfg.crit_tol);
  cfg.compute_morse = bool_or(j, "compute_morse", default_morse);
  cfg.prop = propagation_from(sub_object(j, "propagation"));
  cfg.morse_opts = morse_options_from(sub_object(j, "morse"));
  return cfg;
}

}  // namespace

extern "C" {

const char* maslov_version(void) { return "0.1.0"; }

const char* maslov_last_error(void) { return g_last_error.c_str(); }

void maslov_string_free(char* s) { std::free(s); }

int maslov_problem_from_json(const char* text, maslov_problem** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, ErrorCode::InvalidArgument, "null argument");
    *out = new maslov_problem{maslov::problem_from_json(text)};
  });
}

int maslov_problem_from_file(const char* path, maslov_problem** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, ErrorCode::InvalidArgument, "null argument");
    *out = new maslov_problem{maslov::problem_from_json(maslov::read_text_file(path))};
  });
}

void maslov_problem_free(maslov_problem* p) { delete p; }

int maslov_problem_dim(const maslov_problem* p) { return p == nullptr ? -1 : p->prob.n(); }

int maslov_validate(const maslov_problem* p, char** out_json) {
  return guarded([&] {
    require(p != nullptr && out_json != nullptr, ErrorCode::InvalidArgument, "null argument");
    *out_json = dup_string(maslov::to_json(maslov::validate(p->prob)));
  });
}

int maslov_morse(const maslov_problem* p, const char* options_json, char** out_json) {
  return guarded([&] {
    require(p != nullptr && out_json != nullptr, ErrorCode::InvalidArgument, "null argument");
    const json o = parse_object(options_json, "options");
    const maslov::PropagationConfig cfg = propagation_from(sub_object(o, "propagation"));
    const maslov::MorseOptions mo = morse_options_from(o);
    maslov::MorseResult res = maslov::morse_index(p->prob, cfg, mo);
    const int offset = int_or(o, "inject_index_offset", 0);
    if (offset != 0) {
      res.index += offset;
      res.warnings.push_back("index shifted by fault injection, result is not meaningful");
    }
    if (o.contains("oracle")) {
      const maslov::OracleCount oc = run_oracle(p->prob, sub_object(o, "oracle"));
      res.oracle_crosscheck = oc.count;
      require(res.index == oc.count, ErrorCode::PlateauFailure,
              "conjugate point count " + std::to_string(res.index) +
                  " does not match the finite element count " + std::to_string(oc.count));
    }
    if (o.contains("diagnostics_csv"))
      maslov::write_morse_diagnostics_csv(str_field(o, "diagnostics_csv"), res.diagnostics);
    if (o.contains("frames_csv")) {
      const maslov::FramePath path =
          maslov::unstable_path(p->prob, cfg, mo.gauge_seed, res.truncation);
      maslov::write_frame_path_csv(str_field(o, "frames_csv"), path);
    }
    *out_json = dup_string(maslov::to_json(res));
  });
}

int maslov_oracle(const maslov_problem* p, const char* options_json, char** out_json) {
  return guarded([&] {
    require(p != nullptr && out_json != nullptr, ErrorCode::InvalidArgument, "null argument");
    const json o = parse_object(options_json, "options");
    const maslov::OracleCount oc = run_oracle(p->prob, o);
    json out;
    out["count"] = oc.count;
    out["level_counts"] = oc.level_counts;
    out["level_points"] = oc.level_points;
    const int k = int_or(o, "k", 0);
    if (k > 0) {
      const maslov::Vec ev = maslov::rough_spectrum(p->prob, discretization_from(o), k);
      std::vector<double> vals(ev.data(), ev.data() + ev.size());
      out["eigenvalues"] = vals;
      if (o.contains("eigenvalues_csv"))
        maslov::write_eigenvalues_csv(str_field(o, "eigenvalues_csv"), ev);
    }
    *out_json = dup_string(out.dump(2));
  });
}

int maslov_wave_solve(const char* job_json, maslov_wave** out) {
  return guarded([&] {
    require(job_json != nullptr && out != nullptr, ErrorCode::InvalidArgument, "null argument");
    maslov::WaveJob job = maslov::wave_job_from_json(job_json);
    maslov::WaveProfile prof =
        maslov::solve_front(job.system, job.c_guess, job.u_minus, job.u_plus, job.bvp);
    *out = new maslov_wave{std::move(job.system), std::move(prof), job.compute_morse};
  });
}

void maslov_wave_free(maslov_wave* w) { delete w; }

int maslov_wave_info(const maslov_wave* w, char** out_json) {
  return guarded([&] {
    require(w != nullptr && out_json != nullptr, ErrorCode::InvalidArgument, "null argument");
    json out;
    out["c"] = w->prof.c;
    out["kind"] = w->prof.kind;
    out["residual_sup"] = w->prof.residual_sup;
    out["half_width"] = w->prof.grid(w->prof.grid.size() - 1);
    out["points"] = static_cast<int>(w->prof.grid.size());
    out["n"] = w->sys.n;
    *out_json = dup_string(out.dump(2));
  });
}

int maslov_wave_profile_csv(const maslov_wave* w, const char* path) {
  return guarded([&] {
    require(w != nullptr && path != nullptr, ErrorCode::InvalidArgument, "null argument");
    maslov::write_profile_csv(path, w->prof);
  });
}

int maslov_wave_analyze(const maslov_wave* w, const char* options_json, char** out_json) {
  return guarded([&] {
    require(w != nullptr && out_json != nullptr, ErrorCode::InvalidArgument, "null argument");
    const json o = parse_object(options_json, "options");
    const maslov::AnalysisConfig cfg = analysis_from(o, w->default_morse);
    const maslov::WaveAnalysis res = maslov::instability_verdict(w->sys, w->prof, cfg);
    *out_json = dup_string(maslov::to_json(res));
  });
}

int maslov_wave_weighted_problem(const maslov_wave* w, maslov_problem** out) {
  return guarded([&] {
    require(w != nullptr && out != nullptr, ErrorCode::InvalidArgument, "null argument");
    *out = new maslov_problem{maslov::weighted_problem(w->sys, w->prof)};
  });
}

int maslov_indices(const char* frames_json, const char* which, char** out_json) {
  return guarded([&] {
    require(frames_json != nullptr && which != nullptr && out_json != nullptr,
            ErrorCode::InvalidArgument, "null argument");
    const json j = parse_object(frames_json, "frames document");
    const int n = int_or(j, "n", 0);
    require(n >= 1, ErrorCode::ParseError, "frames document needs a positive n");
    const std::string w = which;
    json out;
    if (w == "triple")
      out = indices_triple(j, n);
    else if (w == "hormander")
      out = indices_hormander(j, n);
    else if (w == "maslov")
      out = indices_maslov(j, n);
    else
      fail(ErrorCode::InvalidArgument, "which must be triple, hormander or maslov");
    *out_json = dup_string(out.dump(2));
  });
}

}  // extern "C"
