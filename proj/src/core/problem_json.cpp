#include "core/problem_json.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace maslov {

namespace {

using nlohmann::json;

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  require(it != j.end(), ErrorCode::ParseError, std::string("missing field \"") + name + "\"");
  return *it;
}

double number_field(const json& j, const char* name) {
  const json& v = field(j, name);
  require(v.is_number(), ErrorCode::ParseError, std::string("field \"") + name + "\" must be a number");
  return v.get<double>();
}

Vec vector_of(const json& j, const char* what) {
  require(j.is_array() && !j.empty(), ErrorCode::ParseError,
          std::string(what) + " must be a nonempty array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    require(j[i].is_number(), ErrorCode::ParseError, std::string(what) + " must hold numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

// a bare number is shorthand for a 1x1 matrix
Mat matrix_of(const json& j, const char* what) {
  if (j.is_number()) return Mat::Constant(1, 1, j.get<double>());
  require(j.is_array() && !j.empty(), ErrorCode::ParseError,
          std::string(what) + " must be a number or nested array");
  const std::size_t rows = j.size();
  require(j[0].is_array() && !j[0].empty(), ErrorCode::ParseError,
          std::string(what) + " must be row-major nested arrays");
  const std::size_t cols = j[0].size();
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    require(j[r].is_array() && j[r].size() == cols, ErrorCode::ParseError,
            std::string(what) + " rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      require(j[r][c].is_number(), ErrorCode::ParseError, std::string(what) + " must hold numbers");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

CoefficientPath path_from_spec(const json& j, const char* coeff) {
  require(j.is_object(), ErrorCode::ParseError,
          std::string("coefficient ") + coeff + " must be an object");
  const json& kj = field(j, "kind");
  require(kj.is_string(), ErrorCode::ParseError, "\"kind\" must be a string");
  const std::string kind = kj.get<std::string>();

  if (kind == "constant") return CoefficientPath::constant(matrix_of(field(j, "value"), coeff));

  if (kind == "sech2_well" || kind == "tanh_step" || kind == "gauss_bump") {
    const Vec p = vector_of(field(j, "params"), "\"params\"");
    return CoefficientPath::scalar_preset(kind, std::vector<double>(p.data(), p.data() + p.size()));
  }

  if (kind == "tabulated") {
    const Vec g = vector_of(field(j, "grid"), "\"grid\"");
    const json& vj = field(j, "values");
    require(vj.is_array() && vj.size() == static_cast<std::size_t>(g.size()),
            ErrorCode::ParseError, "\"values\" must match the grid length");
    std::vector<Mat> vals;
    vals.reserve(vj.size());
    for (const json& e : vj) vals.push_back(matrix_of(e, "table entry"));
    return CoefficientPath::tabulated(std::vector<double>(g.data(), g.data() + g.size()), vals,
                                      matrix_of(field(j, "limit_minus"), "\"limit_minus\""),
                                      matrix_of(field(j, "limit_plus"), "\"limit_plus\""));
  }

  if (kind == "direct_sum") {
    const json& pj = field(j, "parts");
    require(pj.is_array() && !pj.empty(), ErrorCode::ParseError,
            "\"parts\" must be a nonempty array");
    std::vector<CoefficientPath> parts;
    parts.reserve(pj.size());
    for (const json& e : pj) parts.push_back(path_from_spec(e, coeff));
    return CoefficientPath::direct_sum(parts);
  }

  fail(ErrorCode::ParseError, "unknown coefficient kind \"" + kind + "\"");
}

json inertia_json(const Inertia& in) {
  return json{{"positive", in.positive}, {"zero", in.zero}, {"negative", in.negative}};
}

json morse_json(const MorseResult& res) {
  json crossings = json::array();
  for (const auto& c : res.crossings) {
    crossings.push_back(json{{"tau", c.tau},
                             {"multiplicity", c.multiplicity},
                             {"width", c.width},
                             {"form_inertia", inertia_json(c.form_inertia)}});
  }
  json out{{"index", res.index},
           {"crossings", crossings},
           {"truncation", json::array({res.truncation.first, res.truncation.second})},
           {"plateau_attempted", res.plateau_attempted},
           {"plateau_verified", res.plateau_verified},
           {"degenerate_tail", res.degenerate_tail},
           {"warnings", res.warnings}};
  out["maslov_crosscheck"] =
      res.maslov_crosscheck ? json(*res.maslov_crosscheck) : json(nullptr);
  out["oracle_crosscheck"] =
      res.oracle_crosscheck ? json(*res.oracle_crosscheck) : json(nullptr);
  return out;
}

}  // namespace

SturmLiouvilleProblem problem_from_json(const std::string& text) {
  const json j = parse_text(text);
  require(j.is_object(), ErrorCode::ParseError, "problem file must be a JSON object");
  const json& nj = field(j, "n");
  require(nj.is_number_integer() && nj.get<int>() >= 1, ErrorCode::ParseError,
          "\"n\" must be a positive integer");
  const int n = nj.get<int>();

  CoefficientPath p = path_from_spec(field(j, "P"), "P");
  CoefficientPath q = path_from_spec(field(j, "Q"), "Q");
  CoefficientPath r = path_from_spec(field(j, "R"), "R");
  for (const CoefficientPath* c : {&p, &q, &r})
    require(c->dim() == n, ErrorCode::DimensionMismatch,
            "coefficient dimension does not match \"n\"");
  return SturmLiouvilleProblem(std::move(p), std::move(q), std::move(r));
}

WaveJob wave_job_from_json(const std::string& text) {
  const json j = parse_text(text);
  require(j.is_object(), ErrorCode::ParseError, "system file must be a JSON object");
  const json& sj = field(j, "system");
  require(sj.is_string(), ErrorCode::ParseError, "\"system\" must be a string");
  const std::string name = sj.get<std::string>();

  WaveJob job;
  if (name == "nagumo") {
    const Vec p = vector_of(field(j, "params"), "\"params\"");
    require(p.size() == 1, ErrorCode::ParseError, "nagumo takes one parameter");
    job.system = ReactionSystem::nagumo(p(0));
  } else if (name == "kdv_pulse") {
    job.system = ReactionSystem::kdv_pulse();
  } else if (name == "tabulated") {
    job.system = ReactionSystem::scalar_tabulated(vector_of(field(j, "u_grid"), "\"u_grid\""),
                                                  vector_of(field(j, "grad_values"), "\"grad_values\""));
  } else {
    fail(ErrorCode::ParseError, "unknown system \"" + name + "\"");
  }

  job.c_guess = number_field(j, "c_guess");
  job.u_minus = vector_of(field(j, "u_minus"), "\"u_minus\"");
  job.u_plus = vector_of(field(j, "u_plus"), "\"u_plus\"");
  if (auto it = j.find("fix_c"); it != j.end()) {
    require(it->is_boolean(), ErrorCode::ParseError, "\"fix_c\" must be a boolean");
    job.bvp.fix_c = it->get<bool>();
  }
  if (auto it = j.find("compute_morse"); it != j.end()) {
    require(it->is_boolean(), ErrorCode::ParseError, "\"compute_morse\" must be a boolean");
    job.compute_morse = it->get<bool>();
  }
  if (auto it = j.find("bvp"); it != j.end()) {
    const json& b = *it;
    require(b.is_object(), ErrorCode::ParseError, "\"bvp\" must be an object");
    if (b.contains("half_width")) job.bvp.half_width = number_field(b, "half_width");
    if (b.contains("h")) job.bvp.h = number_field(b, "h");
    if (b.contains("newton_tol")) job.bvp.newton_tol = number_field(b, "newton_tol");
    if (b.contains("template_width")) job.bvp.template_width = number_field(b, "template_width");
    if (b.contains("template_amp")) job.bvp.template_amp = number_field(b, "template_amp");
    if (b.contains("max_newton"))
      job.bvp.max_newton = static_cast<int>(number_field(b, "max_newton"));
  }
  return job;
}

std::string to_json(const ValidationReport& rep) {
  auto graph = [](const GraphDiagnostic& g) {
    return json{{"has_graph_form", g.has_graph_form},
                {"inertia", inertia_json(g.inertia)},
                {"symmetry_residual", g.symmetry_residual}};
  };
  json out{{"c1", rep.c1},
           {"c2", rep.c2},
           {"c3", rep.c3},
           {"l2_minus_ok", rep.l2_minus_ok},
           {"l2_plus_ok", rep.l2_plus_ok},
           {"hypotheses_ok", rep.hypotheses_ok()},
           {"hyperbolic_minus", rep.hyperbolic_minus},
           {"hyperbolic_plus", rep.hyperbolic_plus},
           {"spectral_gap", rep.spectral_gap},
           {"transversal_dirichlet_minus", rep.transversal_dirichlet_minus},
           {"transversal_dirichlet_plus", rep.transversal_dirichlet_plus},
           {"graph_unstable_minus", graph(rep.graph_unstable_minus)},
           {"graph_stable_minus", graph(rep.graph_stable_minus)},
           {"graph_unstable_plus", graph(rep.graph_unstable_plus)},
           {"graph_stable_plus", graph(rep.graph_stable_plus)},
           {"warnings", rep.warnings}};
  return out.dump(2);
}

std::string to_json(const MorseResult& res) { return morse_json(res).dump(2); }

std::string to_json(const WaveAnalysis& an) {
  json out{{"verdict", an.verdict},
           {"h_check", an.h_check},
           {"critical_points", an.critical_points},
           {"morse_lower_bound", an.morse_lower_bound},
           {"warnings", an.warnings}};
  out["morse"] = an.morse ? morse_json(*an.morse) : json(nullptr);
  return out.dump(2);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  require(!in.bad(), ErrorCode::IoError, "read failure on " + path);
  return ss.str();
}

}  // namespace maslov
