#include <gtest/gtest.h>

#include "oracle.hpp"
#include "vfatt/so3.hpp"

using namespace vfatt;

namespace {

void expect_vec(const Vec3& a, const Vec3& b, double tol = 1e-12) {
    EXPECT_NEAR(a.x, b.x, tol);
    EXPECT_NEAR(a.y, b.y, tol);
    EXPECT_NEAR(a.z, b.z, tol);
}

void expect_quat(const UnitQuaternion& a, double s, const Vec3& v, double tol = 1e-12) {
    EXPECT_NEAR(a.scalar(), s, tol);
    expect_vec(a.vec(), v, tol);
}

const UnitQuaternion kZ(0.8, {0.0, 0.0, 0.6});

} // namespace

TEST(Skew, ZeroVector) { EXPECT_EQ(skew({0, 0, 0}), Mat3::zero()); }

TEST(Skew, HandExpanded) {
    const Mat3 expect{{0.0, -0.6, 0.0, 0.6, 0.0, 0.0, 0.0, 0.0, 0.0}};
    EXPECT_EQ(skew({0, 0, 0.6}), expect);
}

TEST(Skew, AnnihilatesItsArgumentAndMatchesCross) {
    std::mt19937_64 gen(1);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 x = oracle::random_vec(gen, 3.0);
        const Vec3 y = oracle::random_vec(gen, 3.0);
        expect_vec(skew(x) * x, {}, 1e-14);
        expect_vec(skew(x) * y, cross(x, y), 1e-14);
        EXPECT_EQ(skew(x).transpose(), -1.0 * skew(x));
    }
}

TEST(QuatMul, IdentityElement) {
    const UnitQuaternion p(0.3, {0.1, -0.5, 0.7});
    EXPECT_EQ(quat_mul(p, UnitQuaternion::identity()), p);
    EXPECT_EQ(quat_mul(UnitQuaternion::identity(), p), p);
}

TEST(QuatMul, InverseGivesIdentity) {
    std::mt19937_64 gen(2);
    for (int i = 0; i < 100; ++i) {
        const UnitQuaternion q = oracle::random_quaternion(gen);
        expect_quat(quat_mul(q, quat_inv(q)), 1.0, {}, 1e-15);
    }
}

TEST(QuatMul, HandEvaluatedSquare) { expect_quat(quat_mul(kZ, kZ), 0.28, {0, 0, 0.96}); }

TEST(QuatMul, MatchesMatrixFormOracle) {
    std::mt19937_64 gen(3);
    for (int i = 0; i < 1000; ++i) {
        const UnitQuaternion p = oracle::random_quaternion(gen);
        const UnitQuaternion q = oracle::random_quaternion(gen);
        const auto o = oracle::qmul(oracle::arr(p), oracle::arr(q));
        expect_quat(quat_mul(p, q), o[0], {o[1], o[2], o[3]}, 1e-14);
    }
}

TEST(QuatInv, Examples) {
    EXPECT_EQ(quat_inv(UnitQuaternion::identity()), UnitQuaternion::identity());
    expect_quat(quat_inv(kZ), 0.8, {0, 0, -0.6}, 0.0);
    std::mt19937_64 gen(4);
    for (int i = 0; i < 100; ++i) {
        const UnitQuaternion q = oracle::random_quaternion(gen);
        EXPECT_EQ(quat_inv(quat_inv(q)), q);
    }
}

TEST(QuatToRot, Identity) { EXPECT_EQ(quat_to_rot(UnitQuaternion::identity()).matrix(), Mat3::identity()); }

TEST(QuatToRot, HandEvaluated) {
    const Mat3 expect{{0.28, -0.96, 0.0, 0.96, 0.28, 0.0, 0.0, 0.0, 1.0}};
    const Mat3 r = quat_to_rot(kZ).matrix();
    EXPECT_LE(max_abs(r - expect), 1e-15);
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(norm(r.col(c)), 1.0, 1e-15);
    EXPECT_LE(max_abs(quat_to_rot(-kZ).matrix() - expect), 1e-15);
}

TEST(QuatToRot, MatchesElementwiseDcmAndIsProperRotation) {
    std::mt19937_64 gen(5);
    for (int i = 0; i < 1000; ++i) {
        const UnitQuaternion q = oracle::random_quaternion(gen);
        const Mat3 r = quat_to_rot(q).matrix();
        EXPECT_LE(oracle::max_abs(r, oracle::dcm(q)), 1e-14);
        EXPECT_LE(max_abs(r.transpose() * r - Mat3::identity()), 1e-14);
        EXPECT_NEAR(r.determinant(), 1.0, 1e-14);
    }
}

TEST(QuatToRot, Homomorphism) {
    std::mt19937_64 gen(6);
    for (int i = 0; i < 1000; ++i) {
        const UnitQuaternion p = oracle::random_quaternion(gen);
        const UnitQuaternion q = oracle::random_quaternion(gen);
        EXPECT_LE(max_abs(quat_to_rot(quat_mul(p, q)).matrix() - quat_to_rot(p).matrix() * quat_to_rot(q).matrix()), 1e-14);
    }
}

TEST(RotateToBody, Examples) {
    expect_vec(rotate_to_body(UnitQuaternion::identity(), {1, 2, 3}), {1, 2, 3}, 0.0);
    expect_vec(rotate_to_body(kZ, {1, 0, 1}), {0.28, -0.96, 1.0}, 1e-15);
}

TEST(RotateToBody, EqualsQuaternionSandwich) {
    std::mt19937_64 gen(7);
    for (int i = 0; i < 1000; ++i) {
        const UnitQuaternion q = oracle::random_quaternion(gen);
        const Vec3 x = oracle::random_vec(gen, 2.0);
        // Q^-1 ⊙ (0, x) ⊙ Q
        const auto qi = oracle::arr(quat_inv(q));
        const auto o = oracle::qmul(oracle::qmul(qi, {0.0, x.x, x.y, x.z}), oracle::arr(q));
        EXPECT_NEAR(o[0], 0.0, 1e-14);
        expect_vec(rotate_to_body(q, x), {o[1], o[2], o[3]}, 1e-14);
    }
}

TEST(QuatError, Examples) {
    expect_quat(quat_error(kZ, kZ), 1.0, {}, 1e-15);
    expect_quat(quat_error(kZ, UnitQuaternion::identity()), 0.8, {0, 0, 0.6}, 0.0);
}

TEST(QuatRenormalize, Examples) {
    EXPECT_EQ(quat_renormalize(Quat4{1.0, {}}), UnitQuaternion::identity());
    EXPECT_EQ(quat_renormalize(Quat4{2.0, {}}), UnitQuaternion::identity());
    const UnitQuaternion q = quat_renormalize(Quat4{0.8 + 1e-8, {0, 0, 0.6}});
    EXPECT_NEAR(norm(q.raw()), 1.0, 1e-15);
    EXPECT_NEAR(q.vec().z / q.scalar(), 0.6 / (0.8 + 1e-8), 1e-15);
}

TEST(UnitQuaternionContract, NearZeroNormThrows) {
    try {
        (void)UnitQuaternion::normalized({1e-7, {}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NearZeroNorm);
    }
    EXPECT_THROW(UnitQuaternion(0.0, {0, 0, 0}), Error);
}

TEST(UnitQuaternionContract, ConstructorNormalizes) {
    const UnitQuaternion q(3.0, {0, 4.0, 0});
    expect_quat(q, 0.6, {0, 0.8, 0}, 1e-15);
}

TEST(RotationMatrixContract, RejectsImproperMatrices) {
    EXPECT_THROW(RotationMatrix::from_matrix(Mat3::diag(1, 1, -1)), Error);
    EXPECT_THROW(RotationMatrix::from_matrix(Mat3::diag(2, 1, 1)), Error);
    EXPECT_NO_THROW(RotationMatrix::from_matrix(quat_to_rot(kZ).matrix()));
}

TEST(Mat3Ops, InverseRoundTrip) {
    const Mat3 a{{4, 1, 0, 1, 3, 1, 0, 1, 2}};
    EXPECT_LE(max_abs(inverse(a) * a - Mat3::identity()), 1e-15);
}
