#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "cgabor/contact.hpp"
#include "cgabor/error.hpp"

namespace cgabor {

enum class LatticeVariant { reeb, dual_basis };
std::string_view variant_name(LatticeVariant v);

struct LatticeSpec {
  LatticeVariant variant = LatticeVariant::reeb;
  Vec translation_scales;  // b_i
  Vec modulation_scales;   // c_i
  int K = 0;
};

struct LatticeFrame {
  Mat translations;  // column i = i-th translation generator (fiber vector)
  Mat modulations;   // column i = i-th modulation generator (fiber covector)
  ContactFrame source;
  bool degenerate = false;

  int dim() const { return static_cast<int>(translations.rows()); }
  // Block-diagonal 2n x 2n generator matrix.
  Mat generator_matrix() const;
};

inline constexpr double kDegenerateDet = 1e-12;

LatticeFrame build_lattice_frame(const ContactFrame& frame, const LatticeSpec& spec);

struct LatticePoint {
  Vec W;   // translation
  Vec xi;  // modulation
  std::vector<int> index;  // (k_1..k_n, m_1..m_n)
};

// Lexicographic order over [-K, K]^{2n}, first index slowest.
std::vector<LatticePoint> enumerate_lattice_points(const LatticeFrame& lf, int K,
                                                   double budget = kDefaultBudget);

double lattice_point_count(int n, int K);

// Fraction of uniformly sampled cosphere points whose lattice frame is degenerate.
double degenerate_locus_probe(const RiemannianChart& chart, const ContactStructure& s,
                              const LatticeSpec& spec, int samples, std::uint64_t seed);

}  // namespace cgabor
