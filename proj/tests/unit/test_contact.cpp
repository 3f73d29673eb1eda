#include <gtest/gtest.h>

#include <random>

#include "cgabor/contact.hpp"
#include "frame_checks.hpp"
#include "oracles.hpp"

using namespace cgabor;
using oracle::pi;

namespace {

CospherePoint random_point(const RiemannianChart& chart, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 2 * pi);
  Vec b(chart.n);
  for (int i = 0; i < chart.n; ++i) b(i) = u(rng);
  return make_cosphere_point(chart, {b}, oracle::random_unit(chart.n, rng));
}

}  // namespace

TEST(Completion, PlanarRotationByQuarterTurn) {
  const auto u1 = orthonormal_completion_hat(Eigen::Vector2d(1, 0));
  ASSERT_EQ(u1.size(), 1u);
  EXPECT_NEAR((u1[0] - Eigen::Vector2d(0, 1)).norm(), 0, 1e-15);
  const auto u2 = orthonormal_completion_hat(Eigen::Vector2d(0, 1));
  EXPECT_NEAR((u2[0] - Eigen::Vector2d(-1, 0)).norm(), 0, 1e-15);
}

TEST(Completion, ThreeDimensionalIsPositivelyOrientedOrthonormal) {
  std::mt19937_64 rng(5);
  std::vector<Vec> ps{Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(0, 0, -1)};
  for (int k = 0; k < 50; ++k) ps.push_back(oracle::random_unit(3, rng));
  for (const Vec& p : ps) {
    const auto u = orthonormal_completion_hat(p);
    ASSERT_EQ(u.size(), 2u);
    Mat F(3, 3);
    F << p, u[0], u[1];
    EXPECT_NEAR((F.transpose() * F - Mat::Identity(3, 3)).cwiseAbs().maxCoeff(), 0, 1e-12);
    EXPECT_NEAR(F.determinant(), 1.0, 1e-12);
  }
}

TEST(Completion, OrthonormalInInverseMetric) {
  std::mt19937_64 rng(6);
  for (int n : {2, 3, 4}) {
    const Mat G = oracle::random_spd(n, rng);
    Vec p = oracle::random_unit(n, rng);
    p /= std::sqrt(p.dot(G.inverse() * p));
    const auto u = orthonormal_completion(p, G);
    Mat F(n, n);
    F.col(0) = p;
    for (int i = 1; i < n; ++i) F.col(i) = u[i - 1];
    EXPECT_NEAR((F.transpose() * G.inverse() * F - Mat::Identity(n, n)).cwiseAbs().maxCoeff(), 0,
                1e-12);
  }
}

TEST(ContactCovectors, FlatPlaneRotation) {
  const auto chart = RiemannianChart::flat_torus(Vec::Ones(2));
  const double phi = 0.83;
  const auto m = make_cosphere_point(chart, {Eigen::Vector2d(1, 2)},
                                     Eigen::Vector2d(std::cos(phi), std::sin(phi)));
  const auto F = contact_covectors(chart, m, RotationStructure{});
  EXPECT_NEAR((F[0] - Eigen::Vector2d(std::cos(phi), std::sin(phi))).norm(), 0, 1e-15);
  EXPECT_NEAR((F[1] - Eigen::Vector2d(-std::sin(phi), std::cos(phi))).norm(), 0, 1e-15);
}

TEST(Hypercomplex, QuaternionIdentitiesExact) {
  const auto h = HypercomplexStructure::builtin();
  const Eigen::Matrix4d Id = Eigen::Matrix4d::Identity();
  EXPECT_EQ(h.I * h.I, -Id);
  EXPECT_EQ(h.J * h.J, -Id);
  EXPECT_EQ(h.K * h.K, -Id);
  EXPECT_EQ(h.I * h.J, h.K);
  EXPECT_EQ(h.J * h.I, -h.K);
  Eigen::Matrix4d I, J;
  I << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
  J << 0, 0, -1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, -1, 0, 0;
  EXPECT_EQ(h.I, I);
  EXPECT_EQ(h.J, J);
}

TEST(Hypercomplex, CovectorsAtE1AreTransposedImages) {
  const auto chart = RiemannianChart::flat_torus(Vec::Ones(4));
  const auto h = HypercomplexStructure::builtin();
  const Vec e1 = Eigen::Vector4d(1, 0, 0, 0);
  const auto F = contact_covectors(chart, make_cosphere_point(chart, {Vec::Zero(4)}, e1),
                                   HypercomplexContact{});
  ASSERT_EQ(F.size(), 4u);
  EXPECT_EQ(F[0], e1);
  EXPECT_EQ(F[1], Vec(h.I.transpose() * e1));
  EXPECT_EQ(F[2], Vec(h.J.transpose() * e1));
  EXPECT_EQ(F[3], Vec(h.K.transpose() * e1));
}

TEST(Hypercomplex, QuadrupleOrthonormalForEveryUnitP) {
  const auto chart = RiemannianChart::flat_torus(Vec::Ones(4));
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    const auto F = contact_covectors(chart, random_point(chart, rng), HypercomplexContact{});
    Mat M(4, 4);
    for (int i = 0; i < 4; ++i) M.col(i) = F[i];
    EXPECT_LT((M.transpose() * M - Mat::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ContactCovectors, LegendrianFibers) {
  // Every structure form has zero dq components at m.
  const auto chart = RiemannianChart::flat_torus(Vec::Ones(3));
  std::mt19937_64 rng(8);
  const auto m = random_point(chart, rng);
  for (int i = 0; i < 3; ++i) {
    const Vec a = structure_form(chart, m, RotationStructure{}, i)(local_origin(m));
    ASSERT_EQ(a.size(), 5);
    EXPECT_EQ(a.tail(2), Vec::Zero(2));
  }
}

TEST(SO_n, PlanarFrameIsEquivariant) {
  const auto chart = RiemannianChart::flat_torus(Vec::Ones(2));
  std::mt19937_64 rng(9);
  for (int k = 0; k < 100; ++k) {
    const auto m = random_point(chart, rng);
    const Mat A = oracle::random_rotation(2, rng);
    const auto F = contact_covectors(chart, m, RotationStructure{});
    const auto G = contact_covectors(chart, {m.b, A.transpose() * m.p}, RotationStructure{});
    for (int i = 0; i < 2; ++i) EXPECT_LT((G[i] - A.transpose() * F[i]).norm(), 1e-9);
  }
}

TEST(SO_n, HigherDimensionalFrameRotatesFirstFormAndSpan) {
  // For n >= 3 the completion is a per-point choice; F_0 and the span of the rest rotate.
  const auto chart = RiemannianChart::flat_torus(Vec::Ones(3));
  std::mt19937_64 rng(10);
  for (int k = 0; k < 100; ++k) {
    const auto m = random_point(chart, rng);
    const Mat A = oracle::random_rotation(3, rng);
    const auto F = contact_covectors(chart, m, RotationStructure{});
    const auto G = contact_covectors(chart, {m.b, A.transpose() * m.p}, RotationStructure{});
    EXPECT_LT((G[0] - A.transpose() * F[0]).norm(), 1e-9);
    Mat U(3, 2);
    U << A.transpose() * F[1], A.transpose() * F[2];
    const Mat P = U * U.transpose();
    for (int i = 1; i < 3; ++i) EXPECT_LT((P * G[i] - G[i]).norm(), 1e-9);
  }
}

TEST(Reeb, FlatNumericMatchesMetricDual) {
  const auto chart = RiemannianChart::flat_torus(Vec::Ones(2));
  const double phi = 1.1;
  const auto m = make_cosphere_point(chart, {Eigen::Vector2d(2, 3)},
                                     Eigen::Vector2d(std::cos(phi), std::sin(phi)));
  const auto numeric = build_contact_frame(chart, m, RotationStructure{}, ReebMethod::numeric);
  const auto analytic = build_contact_frame(chart, m, RotationStructure{}, ReebMethod::analytic);
  EXPECT_LT((numeric.reeb[0] - Eigen::Vector2d(std::cos(phi), std::sin(phi))).norm(), 1e-9);
  for (int i = 0; i < 2; ++i) {
    EXPECT_LT((numeric.reeb[i] - analytic.reeb[i]).norm(), 1e-9);
    for (int j = 0; j < 2; ++j)
      EXPECT_NEAR(numeric.covectors[j].dot(numeric.reeb[i]), i == j ? 1.0 : 0.0, 1e-9);
  }
}

TEST(Reeb, UnitPairingAtE1) {
  const auto chart = RiemannianChart::flat_torus(Vec::Ones(2));
  const auto f = build_contact_frame(
      chart, make_cosphere_point(chart, {Vec::Zero(2)}, Eigen::Vector2d(1, 0)), RotationStructure{});
  EXPECT_NEAR(f.covectors[0].dot(f.reeb[0]), 1.0, 1e-15);
}

TEST(Reeb, HypercomplexNumericIsHorizontal) {
  const auto chart = RiemannianChart::flat_torus(Vec::Ones(4));
  std::mt19937_64 rng(11);
  for (int k = 0; k < 10; ++k) {
    const auto f = build_contact_frame(chart, random_point(chart, rng), HypercomplexContact{},
                                       ReebMethod::numeric);
    EXPECT_EQ(f.provenance, FrameProvenance::hypercomplex);
    const auto c = oracle::check_frame(chart, f);
    EXPECT_TRUE(c.pass()) << c.describe();
  }
}

TEST(Reeb, GenericMetricSolvesDefiningEquations) {
  const auto chart = RiemannianChart::generic(
      Vec::Zero(2), Vec::Constant(2, 2 * pi), {true, true},
      [](const Vec& x) {
        Mat g(2, 2);
        g << 2 + std::sin(x(0)), 0.3 * std::cos(x(1)), 0.3 * std::cos(x(1)), 1.5;
        return g;
      },
      1.0);
  const auto m = make_cosphere_point(chart, {Eigen::Vector2d(0.4, 1.9)}, Eigen::Vector2d(0.6, 0.8));
  for (int i = 0; i < 2; ++i) {
    const OneFormField a = structure_form(chart, m, RotationStructure{}, i);
    const Vec x0 = local_origin(m);
    const Vec R = reeb_vector(chart, a, x0);
    EXPECT_NEAR(a(x0).dot(R), 1.0, 1e-9);
    EXPECT_LT((exterior_derivative(chart, a, x0) * R).cwiseAbs().maxCoeff(), 1e-6);
  }
  const auto f = build_contact_frame(chart, m, RotationStructure{});
  EXPECT_EQ(f.provenance, FrameProvenance::numeric_generic);
}

TEST(ContactCondition, StandardFormIsContactExactFormIsNot) {
  const auto chart = RiemannianChart::flat_torus(Vec::Ones(2));
  const auto m = make_cosphere_point(chart, {Eigen::Vector2d(1, 1)}, Eigen::Vector2d(0.6, 0.8));
  const Vec x0 = local_origin(m);
  EXPECT_GE(contact_condition_check(chart, structure_form(chart, m, RotationStructure{}, 0), x0, 2),
            1e-3);
  const OneFormField db1 = [](const Vec& x) {
    Vec a = Vec::Zero(x.size());
    a(0) = 1;
    return a;
  };
  EXPECT_LT(contact_condition_check(chart, db1, x0, 2), 1e-9);
}

TEST(ContactCondition, HypercomplexFormsAreContact) {
  const auto chart = RiemannianChart::flat_torus(Vec::Ones(4));
  std::mt19937_64 rng(12);
  const auto m = random_point(chart, rng);
  for (int i = 0; i < 4; ++i)
    EXPECT_GE(contact_condition_check(chart, structure_form(chart, m, HypercomplexContact{}, i),
                                      local_origin(m), 4),
              1e-3);
}

TEST(ContactFrame, InvariantsOnFlatTorus) {
  const auto chart = RiemannianChart::flat_torus(Vec::Ones(2));
  std::mt19937_64 rng(13);
  for (int k = 0; k < 100; ++k) {
    const auto f = build_contact_frame(chart, random_point(chart, rng), RotationStructure{},
                                       ReebMethod::numeric);
    const auto c = oracle::check_frame(chart, f);
    EXPECT_TRUE(c.pass()) << c.describe();
  }
}
