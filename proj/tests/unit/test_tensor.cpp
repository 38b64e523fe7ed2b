#include "helpers.hpp"
#include "nilsoliton/errors.hpp"
#include "nilsoliton/flow.hpp"
#include "nilsoliton/tensor.hpp"
#include "nilsoliton/tensor_json.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace nilsoliton;
using testutil::J;
using testutil::mat2;

TEST(NewTensor, SkewInputIsKept) {
  const auto c = new_tensor(1, 2, {J()});
  EXPECT_EQ(c[0], J());
  EXPECT_EQ(c.symmetrization_correction(), 0.0);
}

TEST(NewTensor, NonSkewInputIsProjected) {
  const auto c = new_tensor(1, 2, {mat2(0, 1, 0, 0)});
  EXPECT_EQ(c[0], mat2(0, 0.5, -0.5, 0));
  EXPECT_EQ(c.symmetrization_correction(), 0.5);
}

TEST(NewTensor, DimensionMismatch) {
  EXPECT_THROW(new_tensor(2, 2, {Matrix::Zero(3, 3)}), DimensionError);
  EXPECT_THROW(new_tensor(2, 2, {J()}), DimensionError);
  EXPECT_THROW(new_tensor(0, 2, {}), ContractError);
  Matrix bad = J();
  bad(0, 1) = std::nan("");
  EXPECT_THROW(new_tensor(1, 2, {bad}), ContractError);
}

TEST(IsTypePq, Examples) {
  EXPECT_TRUE(is_type_pq(standard_blocks(BlockName::Soliton23)));
  EXPECT_FALSE(is_type_pq(new_tensor(2, 2, {J(), 2.0 * J()})));
  EXPECT_TRUE(is_type_pq(b_tuple(6)));
}

TEST(GroupAct, Examples) {
  const auto c = b_tuple(2);
  EXPECT_EQ(max_abs_difference(group_act(GroupElement::identity(4, 2), c), c), 0.0);
  GroupElement e = GroupElement::identity(4, 2);
  e.h *= 2.0;
  EXPECT_EQ(max_abs_difference(group_act(e, c), c.scaled(2.0)), 0.0);
  GroupElement g = GroupElement::identity(2, 1);
  g.g(0, 0) = 2.0;
  EXPECT_EQ(group_act(g, new_tensor(1, 2, {J()}))[0], mat2(0, 2, -2, 0));
  GroupElement sing = GroupElement::identity(4, 2);
  sing.g(0, 0) = 0.0;
  EXPECT_THROW(group_act(sing, c), ContractError);
}

TEST(InfinitesimalAct, Examples) {
  const auto c = b_tuple(2);
  EXPECT_EQ(norm(infinitesimal_act(Matrix::Zero(4, 4), Matrix::Zero(2, 2), c)), 0.0);
  EXPECT_EQ(max_abs_difference(infinitesimal_act(Matrix::Identity(4, 4), Matrix::Zero(2, 2), c), c.scaled(2.0)), 0.0);
  EXPECT_EQ(max_abs_difference(infinitesimal_act(Matrix::Zero(4, 4), Matrix::Identity(2, 2), c), c), 0.0);
  EXPECT_THROW(infinitesimal_act(Matrix::Zero(3, 3), Matrix::Zero(2, 2), c), DimensionError);
}

TEST(InfinitesimalAct, IsDerivativeOfGroupAct) {
  const auto c = random_tensor(3, 5, 42);
  const Matrix x = random_tensor(1, 5, 1)[0] + Matrix::Identity(5, 5) * 0.3;
  const Matrix y = random_tensor(1, 3, 2)[0];
  const double h = 1e-6;
  GroupElement e{Matrix::Identity(5, 5) + h * x, Matrix::Identity(3, 3) + h * y};
  const auto fd = axpy(group_act(e, c), -1.0, c).scaled(1.0 / h);
  EXPECT_LT(max_abs_difference(fd, infinitesimal_act(x, y, c)), 1e-5);
}

TEST(GroupAct, IsAnAction) {
  const auto c = random_tensor(2, 4, 5);
  GroupElement a{Matrix::Identity(4, 4) + 0.3 * random_tensor(1, 4, 6)[0], Matrix::Identity(2, 2) * 1.5};
  GroupElement b{Matrix::Identity(4, 4) + 0.2 * random_tensor(1, 4, 7)[0], Matrix::Identity(2, 2) + 0.1 * random_tensor(1, 2, 8)[0]};
  EXPECT_LT(max_abs_difference(group_act(a * b, c), group_act(a, group_act(b, c))), 1e-12);
}

TEST(Inner, TracePairing) {
  const auto c = b_tuple(2);
  EXPECT_DOUBLE_EQ(inner(c, c), 8.0);
  EXPECT_DOUBLE_EQ(norm(new_tensor(1, 2, {J()})), std::sqrt(2.0));
}

TEST(TensorJson, RoundTrip) {
  const auto c = random_tensor(3, 5, 9);
  const auto back = tensor_from_json(tensor_to_json(c));
  EXPECT_EQ(max_abs_difference(back, c), 0.0);
}

TEST(TensorJson, AcceptsDecimalStrings) {
  nlohmann::json j = {{"p", 1}, {"q", 2}, {"matrices", {{"0", "1.5", "-1.5", 0}}}};
  EXPECT_EQ(tensor_from_json(j)[0](0, 1), 1.5);
}

TEST(TensorJson, ErrorsNameTheField) {
  nlohmann::json j = {{"p", 1}, {"q", 2}, {"matrices", {{0, 1, "x", 0}}}};
  try {
    tensor_from_json(j);
    FAIL();
  } catch (const ContractError& e) {
    EXPECT_NE(std::string(e.what()).find("matrices[0][2]"), std::string::npos) << e.what();
  }
  EXPECT_THROW(tensor_from_json(nlohmann::json{{"p", 1}, {"q", 2}}), ContractError);
  EXPECT_THROW(tensor_from_json(nlohmann::json{{"p", 2}, {"q", 2}, {"matrices", {{0, 1, -1, 0}}}}), DimensionError);
}

TEST(TensorJson, FileErrors) {
  EXPECT_THROW(read_tensor_file("/nonexistent/x.json"), IoError);
  const auto path = std::filesystem::temp_directory_path() / "nilsoliton_bad.json";
  std::ofstream(path) << "{\n  \"p\": 1,\n  \"q\": 2,\n  oops\n}";
  try {
    read_tensor_file(path);
    FAIL();
  } catch (const ContractError& e) {
    EXPECT_NE(std::string(e.what()).find(":4:"), std::string::npos) << e.what();
  }
  std::filesystem::remove(path);
}
