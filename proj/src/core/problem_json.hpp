#pragma once

#include <string>

#include "core/morse.hpp"
#include "core/sturm.hpp"
#include "core/waves.hpp"

namespace maslov {

// Problem files: {"n": int, "P": spec, "Q": spec, "R": spec} where a
// coefficient spec is one of
//   {"kind": "constant", "value": number | [[...]]}
//   {"kind": "sech2_well" | "tanh_step" | "gauss_bump", "params": [a, b, c]}
//   {"kind": "tabulated", "grid": [...], "values": [[[...]], ...],
//    "limit_minus": [[...]], "limit_plus": [[...]]}
//   {"kind": "direct_sum", "parts": [spec, ...]}
// Matrices are row-major nested arrays; preset kinds are scalar.
SturmLiouvilleProblem problem_from_json(const std::string& text);

struct WaveJob {
  ReactionSystem system;
  double c_guess = 0.0;
  Vec u_minus, u_plus;
  BvpConfig bvp;
  bool compute_morse = true;
};

// System files: {"system": "nagumo" | "kdv_pulse" | "tabulated",
// "params": [...] for presets, "u_grid"/"grad_values" for tabulated,
// "c_guess": number, "u_minus": [...], "u_plus": [...], "fix_c": bool,
// optional "bvp": {"half_width", "h", "max_newton", "newton_tol",
// "template_width", "template_amp"}}
WaveJob wave_job_from_json(const std::string& text);

std::string to_json(const ValidationReport& rep);
std::string to_json(const MorseResult& res);
std::string to_json(const WaveAnalysis& an);

std::string read_text_file(const std::string& path);

}  // namespace maslov
