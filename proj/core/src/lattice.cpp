#include "cgabor/lattice.hpp"

#include <cmath>
#include <random>

#include "cgabor/error.hpp"

namespace cgabor {

std::string_view variant_name(LatticeVariant v) {
  return v == LatticeVariant::reeb ? "reeb" : "dual-basis";
}

Mat LatticeFrame::generator_matrix() const {
  const int n = dim();
  Mat G = Mat::Zero(2 * n, 2 * n);
  G.topLeftCorner(n, n) = translations;
  G.bottomRightCorner(n, n) = modulations;
  return G;
}

LatticeFrame build_lattice_frame(const ContactFrame& frame, const LatticeSpec& spec) {
  const int n = static_cast<int>(frame.covectors.size());
  if (spec.translation_scales.size() != n || spec.modulation_scales.size() != n)
    throw Error(ErrorCode::shape_mismatch, "lattice scales must have one entry per dimension");
  if (!spec.translation_scales.allFinite() || !spec.modulation_scales.allFinite() ||
      (spec.translation_scales.array() == 0).any() || (spec.modulation_scales.array() == 0).any())
    throw Error(ErrorCode::invalid_argument, "lattice scales must be finite and nonzero");
  if (spec.K < 0) throw Error(ErrorCode::invalid_argument, "truncation K must be >= 0");

  LatticeFrame lf;
  lf.source = frame;
  Mat F(n, n);
  for (int i = 0; i < n; ++i) F.col(i) = frame.covectors[i];
  lf.modulations = F * spec.modulation_scales.asDiagonal();
  lf.translations = Mat::Zero(n, n);
  if (spec.variant == LatticeVariant::reeb) {
    for (int i = 0; i < n; ++i) lf.translations.col(i) = spec.translation_scales(i) * frame.reeb[i];
  } else {
    // Dual basis: <F_j, V_i> = delta_ij, i.e. F^T V = Id.
    if (std::abs(F.determinant()) <= kDegenerateDet) {
      lf.degenerate = true;
      return lf;
    }
    lf.translations = F.transpose().partialPivLu().solve(Mat::Identity(n, n)) *
                      spec.translation_scales.asDiagonal();
  }
  lf.degenerate = std::abs(lf.generator_matrix().determinant()) <= kDegenerateDet;
  return lf;
}

double lattice_point_count(int n, int K) { return std::pow(2.0 * K + 1.0, 2.0 * n); }

std::vector<LatticePoint> enumerate_lattice_points(const LatticeFrame& lf, int K, double budget) {
  if (lf.degenerate) throw Error(ErrorCode::invalid_argument, "lattice frame is degenerate");
  if (K < 0) throw Error(ErrorCode::invalid_argument, "truncation K must be >= 0");
  const int n = lf.dim();
  const double count = lattice_point_count(n, K);
  if (count > budget)
    throw Error(ErrorCode::budget_exceeded,
                "lattice enumeration needs " + std::to_string(count) + " points");
  std::vector<LatticePoint> out;
  out.reserve(static_cast<size_t>(count));
  std::vector<int> idx(2 * n, -K);
  const Vec zero = Vec::Zero(n);
  while (true) {
    LatticePoint pt{zero, zero, idx};
    for (int i = 0; i < n; ++i) {
      pt.W += idx[i] * lf.translations.col(i);
      pt.xi += idx[n + i] * lf.modulations.col(i);
    }
    out.push_back(std::move(pt));
    int pos = 2 * n - 1;
    while (pos >= 0 && idx[pos] == K) idx[pos--] = -K;
    if (pos < 0) break;
    ++idx[pos];
  }
  return out;
}

double degenerate_locus_probe(const RiemannianChart& chart, const ContactStructure& s,
                              const LatticeSpec& spec, int samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::invalid_argument, "sample count must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  int bad = 0;
  for (int k = 0; k < samples; ++k) {
    Vec b(chart.n);
    for (int i = 0; i < chart.n; ++i) {
      std::uniform_real_distribution<double> u(chart.lower(i), chart.upper(i));
      b(i) = u(rng);
    }
    Vec dir(chart.n);
    for (int i = 0; i < chart.n; ++i) dir(i) = normal(rng);
    const ManifoldPoint bp = reduce(chart, b);
    const Mat L = metric_at(chart, bp).llt().matrixL().toDenseMatrix();
    const CospherePoint m = make_cosphere_point(chart, bp, L * dir);
    bool degenerate = false;
    try {
      degenerate = build_lattice_frame(build_contact_frame(chart, m, s), spec).degenerate;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::reeb_degenerate) throw;
      degenerate = true;
    }
    bad += degenerate ? 1 : 0;
  }
  return static_cast<double>(bad) / samples;
}

}  // namespace cgabor
