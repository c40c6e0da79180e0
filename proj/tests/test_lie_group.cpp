#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

#include "helpers.hpp"

using namespace eqobs;
using th::dist;
using th::vec;

TEST_CASE("registered groups have the documented basis order") {
  const auto se2 = make_se2();
  CHECK(se2->n() == 3);
  CHECK(se2->dim() == 3);
  Matrix rot = Matrix::Zero(3, 3);
  rot(0, 1) = -1.0;
  rot(1, 0) = 1.0;
  Matrix ex = Matrix::Zero(3, 3);
  ex(0, 2) = 1.0;
  Matrix ey = Matrix::Zero(3, 3);
  ey(1, 2) = 1.0;
  CHECK(se2->basis(0) == rot);
  CHECK(se2->basis(1) == ex);
  CHECK(se2->basis(2) == ey);

  const auto so3 = make_so3();
  CHECK(so3->basis(0) == th::skew(1, 0, 0));
  CHECK(so3->basis(1) == th::skew(0, 1, 0));
  CHECK(so3->basis(2) == th::skew(0, 0, 1));

  const auto se3 = make_se3();
  CHECK(se3->n() == 4);
  CHECK(se3->dim() == 6);
  CHECK(se3->basis(2).topLeftCorner(3, 3) == th::skew(0, 0, 1));
  CHECK(se3->basis(4)(1, 3) == 1.0);

  CHECK(make_group("so3") == so3);
  CHECK_THROWS_AS(make_group("so4"), Error);
}

TEST_CASE("descriptor gram matrix is symmetric positive definite") {
  for (const auto& name : registered_groups()) {
    const auto g = make_group(name);
    const Matrix& gram = g->gram();
    CHECK(dist(gram, gram.transpose()) == 0.0);
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(gram).eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("descriptor rejects dependent or non-closed bases") {
  Matrix e12 = Matrix::Zero(2, 2);
  e12(0, 1) = 1.0;
  Matrix e21 = e12.transpose();
  CHECK_THROWS_AS(GroupDescriptor("dep", 2, {e12, 2.0 * e12}, Constraint::kNone), AlgebraError);
  // [E12, E21] = diag(1, -1) leaves span{E12, E21}
  CHECK_THROWS_AS(GroupDescriptor("open", 2, {e12, e21}, Constraint::kNone), AlgebraError);
  CHECK_THROWS_AS(GroupDescriptor("shape", 2, {Matrix::Zero(3, 3)}, Constraint::kNone),
                  AlgebraError);
  CHECK_NOTHROW(GroupDescriptor("nilpotent", 2, {e12}, Constraint::kNone));
}

TEST_CASE("compose") {
  const auto g = th::pose(0.7, 1.0, -2.0);
  const auto id = GroupElement::identity(make_se2());
  CHECK(dist(compose(id, g).mat(), g.mat()) == 0.0);
  CHECK(dist(compose(g, inverse(g)).mat(), id.mat()) <= 1e-15);

  // rot(0.3)·trans(1, 0)·rot(-0.3) = trans(cos 0.3, sin 0.3)
  const auto a = compose(th::pose(0.3), th::pose(0.0, 1.0, 0.0));
  const auto r = compose(a, th::pose(-0.3));
  Matrix expected = Matrix::Identity(3, 3);
  expected(0, 2) = std::cos(0.3);
  expected(1, 2) = std::sin(0.3);
  CHECK(dist(r.mat(), expected) <= 1e-15);

  const auto so3_id = GroupElement::identity(make_so3());
  CHECK_THROWS_AS(compose(g, so3_id), DescriptorMismatch);
}

TEST_CASE("group elements enforce the manifold tolerance") {
  const auto se2 = make_se2();
  Matrix m = Matrix::Identity(3, 3);
  m(0, 0) += 1e-3;
  CHECK_THROWS_AS(GroupElement(se2, m), ManifoldError);

  const auto before = manifold_warning_count();
  m = Matrix::Identity(3, 3);
  m(0, 0) += 1e-7;
  CHECK_NOTHROW(GroupElement(se2, m));
  CHECK(manifold_warning_count() == before + 1);

  m = Matrix::Identity(3, 3);
  m(0, 0) += 1e-3;
  const auto loose = with_tolerance(se2, {1e-9, 1e-2});
  CHECK_NOTHROW(GroupElement(loose, m));
  CHECK_THROWS_AS(GroupElement(se2, Matrix::Identity(2, 2)), ManifoldError);

  Matrix e11 = Matrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  const auto scalings = std::make_shared<const GroupDescriptor>("diag", 2, std::vector<Matrix>{e11},
                                                                Constraint::kNone);
  CHECK_THROWS_AS(GroupElement(scalings, Matrix::Zero(2, 2)), ManifoldError);
}

TEST_CASE("inverse") {
  const auto id = GroupElement::identity(make_se2());
  CHECK(dist(inverse(id).mat(), id.mat()) == 0.0);

  const auto g = th::pose(1.1, 0.4, -0.9);
  CHECK(dist(inverse(inverse(g)).mat(), g.mat()) <= 1e-15);

  // rotation -theta, translation -R(-theta) p
  const double theta = 1.1;
  const Vector p = vec({0.4, -0.9});
  const Matrix r_neg = th::se2_matrix(-theta, 0, 0).topLeftCorner(2, 2);
  const Vector q = -r_neg * p;
  CHECK(dist(inverse(g).mat(), th::se2_matrix(-theta, q[0], q[1])) <= 1e-15);
}

TEST_CASE("exp") {
  const auto so3 = make_so3();
  CHECK(dist(exp(AlgebraElement::zero(so3)).mat(), Matrix::Identity(3, 3)) == 0.0);

  const double h = std::numbers::pi / 2;
  Matrix rx(3, 3);
  rx << 1, 0, 0, 0, 0, -1, 0, 1, 0;
  CHECK(dist(exp(AlgebraElement(so3, th::skew(h, 0, 0))).mat(), rx) <= 1e-15);

  th::Sampler s(so3, 11);
  for (int i = 0; i < 50; ++i) {
    const auto w = 2.0 * s.algebra();
    const Vector c = w.coords();
    CHECK(dist(exp(w).mat(), th::rodrigues(c)) <= 1e-14);
    CHECK(dist(compose(exp(w), exp(-w)).mat(), Matrix::Identity(3, 3)) <= 1e-14);
  }

  // large argument goes through squaring
  const Matrix big = expm(th::skew(0.0, 0.0, 40.0));
  CHECK(dist(big, th::rodrigues(vec({0, 0, 40.0}))) <= 1e-11);
}

TEST_CASE("adjoint") {
  th::Sampler s(make_se2(), 5);
  const auto w = s.algebra();
  const auto id = GroupElement::identity(make_se2());
  CHECK(dist(adjoint(id, w), w) <= 1e-15);
  const auto a = s.group();
  CHECK(dist(adjoint(a, adjoint(inverse(a), w)), w) <= 1e-14);

  // Ad_{rot(pi/2)} e_x = e_y
  const auto r = adjoint(th::pose(std::numbers::pi / 2), th::se2(0, 1, 0));
  CHECK(dist(r, th::se2(0, 0, 1)) <= 1e-15);

  // span{E11} is a subalgebra but not Ad-invariant under shears
  Matrix e11 = Matrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  const auto g = std::make_shared<const GroupDescriptor>("diag", 2, std::vector<Matrix>{e11},
                                                         Constraint::kNone);
  Matrix shear = Matrix::Identity(2, 2);
  shear(0, 1) = 1.0;
  CHECK_THROWS_AS(adjoint(GroupElement(g, shear), AlgebraElement(g, e11)), AlgebraError);
}

TEST_CASE("bracket") {
  th::Sampler s(make_se3(), 9);
  const auto w1 = s.algebra();
  const auto w2 = s.algebra();
  CHECK(bracket(w1, w1).norm() == 0.0);
  CHECK(dist(bracket(w1, w2), -bracket(w2, w1)) == 0.0);

  const auto so3 = make_so3();
  const auto z = bracket(AlgebraElement(so3, th::skew(1, 0, 0)), AlgebraElement(so3, th::skew(0, 1, 0)));
  CHECK(dist(z.mat(), th::skew(0, 0, 1)) <= 1e-15);
  CHECK_THROWS_AS(bracket(w1, AlgebraElement::zero(so3)), DescriptorMismatch);
}

TEST_CASE("project_to_algebra") {
  const auto so3 = make_so3();
  th::Sampler s(so3, 21);
  const auto gamma = s.algebra();
  CHECK(dist(project_to_algebra(so3, gamma.mat()), gamma) <= 1e-15);
  CHECK(project_to_algebra(so3, Matrix::Zero(3, 3)).norm() == 0.0);

  for (int i = 0; i < 100; ++i) {
    const Matrix m = s.matrix();
    CHECK(dist(project_to_algebra(so3, m).mat(), 0.5 * (m - m.transpose())) <= 1e-12);
  }

  for (const auto& name : registered_groups()) {
    th::Sampler t(make_group(name), 4);
    const Matrix m = t.matrix();
    const Matrix residual = m - project_to_algebra(t.g, m).mat();
    for (const auto& b : t.g->basis()) CHECK(std::abs(trace_inner(b, residual)) <= 1e-10);
  }

  // se(2): the translation column is kept, the rotation block is skewed
  Matrix m(3, 3);
  m << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  CHECK(dist(project_to_algebra(make_se2(), m), th::se2(1.0, 3.0, 6.0)) <= 1e-15);
}

TEST_CASE("constraint_residual") {
  const auto se2 = make_se2();
  CHECK(constraint_residual(se2, Matrix::Identity(3, 3)) == 0.0);

  th::Sampler s(se2, 8);
  for (int i = 0; i < 20; ++i) {
    CHECK(constraint_residual(se2, exp(0.01 * s.algebra()).mat()) <= 1e-12);
  }

  Matrix m = Matrix::Identity(3, 3);
  m(0, 0) += 1e-3;
  const double r = constraint_residual(se2, m);
  CHECK(r >= 1e-4);
  CHECK(r <= 1e-2);
  CHECK(r == doctest::Approx(1e-3).epsilon(1e-9));

  // reflections are far from SO(2)
  Matrix flip = Matrix::Identity(3, 3);
  flip(0, 0) = -1.0;
  CHECK(constraint_residual(se2, flip) >= 2.0);

  // wrong bottom row
  m = Matrix::Identity(3, 3);
  m(2, 0) = 1e-3;
  CHECK(constraint_residual(se2, m) == doctest::Approx(1e-3));
  CHECK(std::isinf(constraint_residual(se2, Matrix::Identity(2, 2))));
}

TEST_CASE("coordinates") {
  const auto se2 = make_se2();
  CHECK(coords_to_matrix(se2, Vector::Zero(3)).norm() == 0.0);
  th::Sampler s(se2, 3);
  for (int i = 0; i < 20; ++i) {
    const Vector c = s.algebra().coords() * 3.0;
    CHECK((matrix_to_coords(coords_to_matrix(se2, c)) - c).norm() <= 1e-12);
  }

  Matrix u2 = Matrix::Zero(3, 3);
  u2(0, 2) = 2.0;
  u2(1, 2) = -1.0;
  CHECK(coords_to_matrix(se2, vec({0, 2, -1})).mat() == u2);
  CHECK_THROWS_AS(coords_to_matrix(se2, vec({1, 2})), AlgebraError);
}

TEST_CASE("algebra elements check membership") {
  Matrix m = Matrix::Zero(3, 3);
  m(2, 0) = 1.0;
  CHECK_THROWS_AS(AlgebraElement(make_se2(), m), AlgebraError);
  CHECK_NOTHROW(AlgebraElement(make_se2(), th::se2(1, 2, 3).mat()));
}

TEST_CASE("random sampling is seeded") {
  std::mt19937_64 a(42), b(42);
  const auto g = make_se3();
  CHECK(random_group(g, a).mat() == random_group(g, b).mat());
  const Vector c = random_algebra(g, a).coords();
  CHECK(c.maxCoeff() <= 1.0 + 1e-12);
  CHECK(c.minCoeff() >= -1.0 - 1e-12);
}
