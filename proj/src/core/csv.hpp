#pragma once

#include <string>

#include "core/flows.hpp"
#include "core/morse.hpp"
#include "core/waves.hpp"

namespace maslov {

// Every writer emits one header row and then %.17g fields, so values survive a
// text round trip exactly. Failures to open or write raise IoError.

// columns: tau, frame entries row-major, sigma_min of the bottom block
void write_frame_path_csv(const std::string& path, const FramePath& fp);

// columns: tau, sigma_min, det_w, crossing_flag
void write_morse_diagnostics_csv(const std::string& path, const DetectDiagnostics& d);

// columns: xi, w components, w' components
void write_profile_csv(const std::string& path, const WaveProfile& prof);

// columns: k, lambda
void write_eigenvalues_csv(const std::string& path, const Vec& values);

}  // namespace maslov
