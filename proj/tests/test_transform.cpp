#include <gtest/gtest.h>

#include <cmath>

#include "opball/identities.hpp"
#include "opball/transform.hpp"
#include "oracle.hpp"

using namespace opball;

namespace {

OperatorHK scalar_op(cplx t) { return OperatorHK(CMat{{t}}); }

// (I + T*T)^{-1/2} T* exactly as written, through the oracle.
CMat transform_oracle(const CMat& t) {
  return oracle::inv_sqrtm(CMat::identity(t.cols()) + t.adjoint() * t) * t.adjoint();
}

}  // namespace

TEST(OperatorHK, ShapeAndValidation) {
  const OperatorHK t(CMat::zeros(2, 5));
  EXPECT_EQ(t.dim_h(), 5u);
  EXPECT_EQ(t.dim_k(), 2u);
  EXPECT_THROW(OperatorHK{CMat()}, Error);
}

TEST(BoundedTransform, Examples) {
  EXPECT_EQ(op_norm(bounded_transform(OperatorHK::zero(3, 2)).mat()), 0.0);
  EXPECT_NEAR(bounded_transform(scalar_op(1.0)).mat()(0, 0).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(bounded_transform(scalar_op(1.0)).mat()(0, 0).real(), 0.7071, 5e-5);
  const double n3 = bounded_transform(scalar_op(3.0)).norm();
  EXPECT_NEAR(n3 * n3, 0.9, 1e-15);
  const cplx t(0.3, -2.0);
  EXPECT_LE(std::abs(bounded_transform(scalar_op(t)).mat()(0, 0) -
                     std::conj(t) / std::sqrt(1.0 + std::norm(t))),
            1e-15);
}

TEST(BoundedTransform, MatchesLiteralFormula) {
  Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    const OperatorHK t = random_operator(rng, 1 + i % 12, 1 + i % 4, 1e-2, 1e1);
    const BallPoint a = bounded_transform(t);
    EXPECT_EQ(a.dim_h(), t.dim_h());
    EXPECT_EQ(a.dim_k(), t.dim_k());
    EXPECT_LE(oracle::dist(a.mat(), transform_oracle(t.mat())), 1e-13);
  }
}

TEST(BoundedTransform, NormIdentity) {
  Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    const OperatorHK t = random_operator(rng, 1 + i % 12, 1 + i % 4, 1e-2, 1e3);
    const double g = oracle::spectral_norm(t.mat() * t.adjoint());
    const double n = bounded_transform(t).norm();
    EXPECT_LE(std::abs(n * n - g / (1.0 + g)), 1e-10 * (1.0 + g));
  }
}

TEST(InverseBoundedTransform, Examples) {
  EXPECT_EQ(op_norm(inverse_bounded_transform(BallPoint::origin(3, 2)).mat()), 0.0);
  const OperatorHK one = inverse_bounded_transform(BallPoint(CMat{{1.0 / std::sqrt(2.0)}}));
  EXPECT_NEAR(one.mat()(0, 0).real(), 1.0, 1e-15);
  EXPECT_FALSE(one.near_boundary());
  EXPECT_TRUE(inverse_bounded_transform(BallPoint(CMat{{1.0 - 1e-9}})).near_boundary());
}

TEST(InverseBoundedTransform, RoundTrips) {
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    const std::size_t h = 1 + i % 12;
    const std::size_t k = 1 + i % 4;
    const OperatorHK t = random_operator_with_norm(rng, h, k, 1e-2, 1e3);
    const OperatorHK back = inverse_bounded_transform(bounded_transform(t));
    EXPECT_LE(op_norm(back.mat() - t.mat()), 1e-8 * (1.0 + op_norm(t.mat())));

    const BallPoint a = random_ball_point(rng, h, k, 1e-3);
    EXPECT_LE(op_norm(bounded_transform(inverse_bounded_transform(a)).mat() - a.mat()), 1e-8);
  }
}

TEST(InverseBoundedTransform, MembershipViolation) {
  // A BallPoint cannot be built outside the ball, so force the floor instead.
  Tolerances tol;
  tol.defect_floor = 0.5;
  try {
    inverse_bounded_transform(BallPoint(CMat{{0.9}}), tol);
    FAIL() << "expected EigenvalueBelowFloor";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EigenvalueBelowFloor);
  }
}

TEST(DefectMaps, Examples) {
  Rng rng(24);
  const OperatorHK x = random_operator(rng, 4, 2, 1.0, 1.0);
  const OperatorHK t = random_operator(rng, 4, 2, 1.0, 1.0);
  const OperatorHK zero = OperatorHK::zero(4, 2);
  EXPECT_LE(op_norm(l_op(zero, x) - x.adjoint()), 1e-14);
  EXPECT_LE(op_norm(l_op(t, t)), 1e-13);
  EXPECT_NEAR(l_op(scalar_op(0.0), scalar_op(1.0))(0, 0).real(), 1.0, 1e-15);
  EXPECT_EQ(l_op(t, x).rows(), 4u);
  EXPECT_EQ(l_op(t, x).cols(), 2u);

  EXPECT_LE(op_norm(r_op(t, t) - CMat::identity(2)), 1e-13);
  EXPECT_LE(op_norm(r_op(x, zero) - oracle::sqrtm(CMat::identity(2) + x.mat() * x.adjoint())),
            1e-13);
  EXPECT_NEAR(r_op(scalar_op(1.0), scalar_op(1.0))(0, 0).real(), 1.0, 1e-15);
  EXPECT_THROW(l_op(t, OperatorHK::zero(2, 4)), Error);
  EXPECT_THROW(r_op(t, OperatorHK::zero(3, 2)), Error);
}

TEST(RInvClosed, Examples) {
  Rng rng(25);
  const OperatorHK s = random_operator(rng, 3, 2, 1.0, 1.0);
  const OperatorHK t = random_operator(rng, 3, 2, 1.0, 1.0);
  const CMat zero_case = r_inv_closed(s, OperatorHK::zero(3, 2));
  EXPECT_LE(oracle::dist(zero_case, oracle::inv_sqrtm(CMat::identity(2) + s.mat() * s.adjoint())),
            1e-13);
  const CMat direct = oracle::inverse(r_op(s, t));
  EXPECT_LE(oracle::dist(r_inv_closed(s, t), direct), 1e-8 * oracle::spectral_norm(direct));
  EXPECT_NEAR(r_inv_closed(scalar_op(1.0), scalar_op(1.0))(0, 0).real(), 1.0, 1e-14);
}

TEST(RInvClosed, AgreesWithDirectInversion) {
  Rng rng(26);
  for (int i = 0; i < 200; ++i) {
    const std::size_t h = 1 + i % 12;
    const std::size_t k = 1 + i % 4;
    const OperatorHK s = random_operator_with_norm(rng, h, k, 1e-2, 1e3);
    const OperatorHK t = random_operator_with_norm(rng, h, k, 1e-2, 1e3);
    const CMat direct = oracle::inverse(r_op(s, t));
    EXPECT_LE(oracle::dist(r_inv_closed(s, t), direct), 1e-8 * oracle::spectral_norm(direct));
  }
}

TEST(MetricD, Examples) {
  Rng rng(27);
  const OperatorHK t = random_operator(rng, 3, 2, 1.0, 1.0);
  EXPECT_LE(metric_d(t, t), 1e-12);
  EXPECT_NEAR(metric_d(scalar_op(0.0), scalar_op(1.0)), std::asinh(1.0), 1e-15);
  EXPECT_NEAR(metric_d(scalar_op(0.0), scalar_op(1.0)), 0.8814, 5e-5);
  for (double s : {0.01, 0.5, 7.0, 300.0}) {
    EXPECT_NEAR(metric_d(scalar_op(0.0), scalar_op(cplx(0.0, s))), std::asinh(s),
                1e-13 * (1.0 + std::asinh(s)));
  }
  const OperatorHK s = random_operator(rng, 3, 2, 1.0, 1.0);
  EXPECT_NEAR(metric_d(OperatorHK::zero(3, 2), s), std::atanh(bounded_transform(s).norm()), 1e-12);
  EXPECT_NEAR(metric_d(OperatorHK::zero(3, 2), s),
              ball_dist(BallPoint::origin(3, 2), bounded_transform(s)), 1e-12);
}

// M = L_T(S) R_S(T)⁻¹ is the ψ map of the transforms, up to the unitary ambiguity
// that leaves norms alone; check the norm and the identity I − M*M = (RR*)⁻¹.
TEST(MetricD, DefectQuotientStructure) {
  Rng rng(28);
  for (int i = 0; i < 100; ++i) {
    const OperatorHK t = random_operator(rng, 6, 3, 1e-1, 1e1);
    const OperatorHK s = random_operator(rng, 6, 3, 1e-1, 1e1);
    const CMat r = r_op(s, t);
    const CMat m = l_op(t, s) * oracle::inverse(r);
    const CMat lhs = CMat::identity(3) - m.adjoint() * m;
    const CMat rhs = oracle::inverse(r * r.adjoint());
    EXPECT_LE(oracle::dist(lhs, rhs), 1e-12 + 1e-10 * oracle::spectral_norm(rhs));
    const double psi_norm =
        oracle::spectral_norm(psi(bounded_transform(t), bounded_transform(s)).mat());
    EXPECT_NEAR(oracle::spectral_norm(m), psi_norm, 1e-10);
  }
}

TEST(MetricD, TwoRoutesAgree) {
  Rng rng(29);
  for (int i = 0; i < 200; ++i) {
    const std::size_t h = 1 + i % 12;
    const std::size_t k = 1 + i % 4;
    const OperatorHK t = random_operator_with_norm(rng, h, k, 1e-2, 1e3);
    const OperatorHK s = random_operator_with_norm(rng, h, k, 1e-2, 1e3);
    EXPECT_NEAR(metric_d(t, s), metric_d_ball_route(t, s), 1e-8);
  }
}

TEST(MetricD, Axioms) {
  Rng rng(30);
  for (int i = 0; i < 200; ++i) {
    const OperatorHK t = random_operator(rng, 5, 3, 1e-2, 1e2);
    const OperatorHK s = random_operator(rng, 5, 3, 1e-2, 1e2);
    const OperatorHK u = random_operator(rng, 5, 3, 1e-2, 1e2);
    const double dts = metric_d(t, s);
    EXPECT_NEAR(dts, metric_d(s, t), 1e-10);
    EXPECT_LE(dts, metric_d(t, u) + metric_d(u, s) + 1e-9);
    EXPECT_LE(metric_d(t, t), 1e-10);
  }
}

// Distance zero forces equality: whenever d is at roundoff level the operators
// agree to 1e-7, over perturbations spanning fourteen decades.
TEST(MetricD, ZeroDistanceMeansEqual) {
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    const OperatorHK t = random_operator(rng, 4, 2, 1e-1, 1e1);
    const OperatorHK s(t.mat() + random_gaussian(rng, 2, 4, log_uniform(rng, 1e-16, 1e-2)));
    const double d = metric_d(t, s);
    if (d <= 1e-10) {
      EXPECT_LE(op_norm(t.mat() - s.mat()), 1e-7);
    }
    if (op_norm(t.mat() - s.mat()) > 1e-7) {
      EXPECT_GT(d, 0.0);
    }
  }
}

TEST(MetricD, ShapeMismatch) {
  try {
    metric_d(OperatorHK::zero(3, 2), OperatorHK::zero(2, 3));
    FAIL() << "expected ShapeMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ShapeMismatch);
  }
}

TEST(MetricD, LargeNormsStayFinite) {
  Rng rng(32);
  for (int i = 0; i < 50; ++i) {
    const OperatorHK t = random_operator(rng, 12, 4, 1e2, 1e3);
    const OperatorHK s = random_operator(rng, 12, 4, 1e2, 1e3);
    const double d = metric_d(t, s);
    EXPECT_TRUE(std::isfinite(d));
    EXPECT_GT(d, 0.0);
  }
}
