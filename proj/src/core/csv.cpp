#include "core/csv.hpp"

#include <cstdio>
#include <fstream>

namespace maslov {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::IoError, "cannot open " + path + " for writing");
  return out;
}

void put(std::ofstream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  require(out.good(), ErrorCode::IoError, "write failure on " + path);
}

}  // namespace

void write_frame_path_csv(const std::string& path, const FramePath& fp) {
  require(fp.grid.size() == fp.frames.size(), ErrorCode::DimensionMismatch,
          "frame path arrays disagree");
  std::ofstream out = open_out(path);
  const int n = fp.n;
  out << "tau";
  for (int r = 0; r < 2 * n; ++r)
    for (int c = 0; c < n; ++c) out << ",f" << r << "_" << c;
  out << ",sigma_min\n";
  for (std::size_t k = 0; k < fp.grid.size(); ++k) {
    put(out, fp.grid[k]);
    const Mat& f = fp.frames[k];
    for (int r = 0; r < 2 * n; ++r)
      for (int c = 0; c < n; ++c) {
        out << ',';
        put(out, f(r, c));
      }
    out << ',';
    Eigen::JacobiSVD<Mat> svd(f.bottomRows(n));
    put(out, svd.singularValues().minCoeff());
    out << '\n';
  }
  finish(out, path);
}

void write_morse_diagnostics_csv(const std::string& path, const DetectDiagnostics& d) {
  require(d.taus.size() == d.sigma_min.size() && d.taus.size() == d.det_w.size() &&
              d.taus.size() == d.crossing_flag.size(),
          ErrorCode::DimensionMismatch, "diagnostics arrays disagree");
  std::ofstream out = open_out(path);
  out << "tau,sigma_min,det_w,crossing_flag\n";
  for (std::size_t k = 0; k < d.taus.size(); ++k) {
    put(out, d.taus[k]);
    out << ',';
    put(out, d.sigma_min[k]);
    out << ',';
    put(out, d.det_w[k]);
    out << ',' << d.crossing_flag[k] << '\n';
  }
  finish(out, path);
}

void write_profile_csv(const std::string& path, const WaveProfile& prof) {
  const int n = static_cast<int>(prof.w.rows());
  const Eigen::Index m = prof.grid.size();
  require(prof.w.cols() == m && prof.w_prime.cols() == m && prof.w_prime.rows() == n,
          ErrorCode::DimensionMismatch, "profile arrays disagree");
  std::ofstream out = open_out(path);
  out << "xi";
  for (int c = 0; c < n; ++c) out << ",w" << c;
  for (int c = 0; c < n; ++c) out << ",w" << c << "_prime";
  out << '\n';
  for (Eigen::Index j = 0; j < m; ++j) {
    put(out, prof.grid(j));
    for (int c = 0; c < n; ++c) {
      out << ',';
      put(out, prof.w(c, j));
    }
    for (int c = 0; c < n; ++c) {
      out << ',';
      put(out, prof.w_prime(c, j));
    }
    out << '\n';
  }
  finish(out, path);
}

void write_eigenvalues_csv(const std::string& path, const Vec& values) {
  std::ofstream out = open_out(path);
  out << "k,lambda\n";
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    out << k << ',';
    put(out, values(k));
    out << '\n';
  }
  finish(out, path);
}

}  // namespace maslov
