#include "eqobs/lie_group.hpp"

namespace eqobs {

namespace {

Matrix unit(int n, int r, int c) {
  Matrix m = Matrix::Zero(n, n);
  m(r, c) = 1.0;
  return m;
}

// Generator of rotation about `axis` embedded in the top-left 3×3 block.
Matrix skew_generator(int n, int axis) {
  Matrix m = Matrix::Zero(n, n);
  const int i = (axis + 1) % 3;
  const int j = (axis + 2) % 3;
  m(j, i) = 1.0;
  m(i, j) = -1.0;
  return m;
}

}  // namespace

GroupPtr make_so3() {
  static const GroupPtr group = std::make_shared<const GroupDescriptor>(
      "so3", 3,
      std::vector<Matrix>{skew_generator(3, 0), skew_generator(3, 1), skew_generator(3, 2)},
      Constraint::kSpecialOrthogonal);
  return group;
}

GroupPtr make_se2() {
  static const GroupPtr group = [] {
    Matrix rot = Matrix::Zero(3, 3);
    rot(0, 1) = -1.0;
    rot(1, 0) = 1.0;
    return std::make_shared<const GroupDescriptor>(
        "se2", 3, std::vector<Matrix>{rot, unit(3, 0, 2), unit(3, 1, 2)},
        Constraint::kSpecialEuclidean);
  }();
  return group;
}

GroupPtr make_se3() {
  static const GroupPtr group = std::make_shared<const GroupDescriptor>(
      "se3", 4,
      std::vector<Matrix>{skew_generator(4, 0), skew_generator(4, 1), skew_generator(4, 2),
                          unit(4, 0, 3), unit(4, 1, 3), unit(4, 2, 3)},
      Constraint::kSpecialEuclidean);
  return group;
}

GroupPtr make_group(const std::string& name) {
  if (name == "se2") return make_se2();
  if (name == "so3") return make_so3();
  if (name == "se3") return make_se3();
  throw Error("unknown group '" + name + "' (expected se2, so3 or se3)");
}

std::vector<std::string> registered_groups() { return {"se2", "so3", "se3"}; }

}  // namespace eqobs
