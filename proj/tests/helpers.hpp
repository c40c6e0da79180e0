#pragma once

#include <cmath>
#include <initializer_list>
#include <random>

#include "eqobs/lie_group.hpp"
#include "eqobs/symmetry.hpp"
#include "eqobs/system.hpp"

namespace th {

using eqobs::AlgebraElement;
using eqobs::GroupElement;
using eqobs::GroupPtr;
using eqobs::Matrix;
using eqobs::Vector;

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

// [R(theta) p; 0 1]
inline Matrix se2_matrix(double theta, double x, double y) {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 0) = std::cos(theta);
  m(0, 1) = -std::sin(theta);
  m(1, 0) = std::sin(theta);
  m(1, 1) = std::cos(theta);
  m(0, 2) = x;
  m(1, 2) = y;
  return m;
}

inline GroupElement pose(double theta, double x = 0.0, double y = 0.0) {
  return GroupElement(eqobs::make_se2(), se2_matrix(theta, x, y));
}

inline AlgebraElement se2(double w, double vx, double vy) {
  return AlgebraElement::from_coords(eqobs::make_se2(), vec({w, vx, vy}));
}

inline Matrix skew(double x, double y, double z) {
  Matrix m(3, 3);
  m << 0, -z, y, z, 0, -x, -y, x, 0;
  return m;
}

// Rotation about a unit axis by the Rodrigues formula.
inline Matrix rodrigues(const Vector& w) {
  const double theta = w.norm();
  const Matrix k = skew(w[0], w[1], w[2]) / theta;
  return Matrix::Identity(3, 3) + std::sin(theta) * k + (1.0 - std::cos(theta)) * k * k;
}

inline double dist(const Matrix& a, const Matrix& b) { return (a - b).norm(); }
inline double dist(const AlgebraElement& a, const AlgebraElement& b) {
  return (a.mat() - b.mat()).norm();
}

struct Sampler {
  GroupPtr g;
  std::mt19937_64 rng;
  Sampler(GroupPtr group, std::uint64_t seed) : g(std::move(group)), rng(seed) {}

  GroupElement group() { return eqobs::random_group(g, rng); }
  AlgebraElement algebra() { return eqobs::random_algebra(g, rng); }
  eqobs::SymmetryElement symmetry() { return {group(), algebra()}; }
  eqobs::SymmetryVelocity velocity() { return {algebra(), algebra()}; }
  eqobs::State state() { return {group(), algebra()}; }
  eqobs::InputVelocity input() { return {algebra(), algebra()}; }
  Matrix matrix() {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(g->n(), g->n());
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
    return m;
  }
};

}  // namespace th
