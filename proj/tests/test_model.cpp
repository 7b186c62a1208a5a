/*
 * Copyright (C) 2026 The hastings-lab authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "hastings/model.hpp"
#include "support/random_models.hpp"

namespace {

using namespace hastings;

TEST(StateSpace, DiscreteNeedsTwoStates) {
  EXPECT_THROW(StateSpace::discrete(1), ModelError);
  EXPECT_EQ(StateSpace::discrete(3).size(), 3u);
  EXPECT_TRUE(StateSpace::discrete(3).is_discrete());
}

TEST(StateSpace, ContinuousNeedsNonemptySupport) {
  EXPECT_THROW(StateSpace::continuous({1.0, 1.0}), ModelError);
  const auto s = StateSpace::continuous({-1.0, 2.0});
  EXPECT_FALSE(s.is_discrete());
  EXPECT_EQ(s.size(), 0u);
  EXPECT_TRUE(s.support().contains(0.5));
  EXPECT_FALSE(s.support().contains(3.0));
}

TEST(Model, MismatchedSpacesRejected) {
  Target<double> t{StateSpace::continuous(), [](const double &) { return 0.0; }};
  Proposal<double> p{StateSpace::continuous({0.0, 1.0}), [](const double &, const double &) { return 0.0; },
                     [](const double &x, RngStream &) { return x; }};
  EXPECT_THROW(ContinuousModel(t, p), ModelError);
}

TEST(MakeDiscreteModel, TwoStateLogs) {
  const auto m = fixtures::d2();
  EXPECT_DOUBLE_EQ(m.log_p(1), std::log(2.0));
  EXPECT_DOUBLE_EQ(m.log_gamma(0, 1), std::log(0.5));
  EXPECT_TRUE(m.independent_proposal());
  ASSERT_NE(m.tables(), nullptr);
  EXPECT_EQ(m.tables()->n, 2u);
}

TEST(MakeDiscreteModel, RejectsBadInputWithIndex) {
  try {
    make_discrete_model({1.0, 2.0}, {{0.5, 0.5}, {0.5, 0.6}});
    FAIL() << "row sum not rejected";
  } catch (const ModelError &e) {
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos);
  }
  try {
    make_discrete_model({1.0, -2.0}, {{0.5, 0.5}, {0.5, 0.5}});
    FAIL() << "negative mass not rejected";
  } catch (const ModelError &e) {
    EXPECT_NE(std::string(e.what()).find("p[1]"), std::string::npos);
  }
  EXPECT_THROW(make_discrete_model({0.0, 0.0}, {{0.5, 0.5}, {0.5, 0.5}}), ModelError);
  EXPECT_THROW(make_discrete_model({1.0, 2.0}, {{1.0}}), ModelError);
  EXPECT_THROW(make_discrete_model({1.0, 2.0}, {{0.5, 0.5}, {0.5}}), ModelError);
  EXPECT_THROW(make_discrete_model({1.0, 2.0}, {{1.5, -0.5}, {0.5, 0.5}}), ModelError);
}

TEST(MakeDiscreteModel, RowSumToleranceIsOneEMinusTwelve) {
  EXPECT_NO_THROW(make_discrete_model({1.0, 1.0}, {{0.5, 0.5 - 5e-13}, {0.5, 0.5}}));
  EXPECT_THROW(make_discrete_model({1.0, 1.0}, {{0.5, 0.5 - 5e-12}, {0.5, 0.5}}), ModelError);
}

TEST(MakeDiscreteModel, OutOfRangeStateRejected) {
  const auto m = fixtures::d2();
  EXPECT_THROW(m.log_p(2), ModelError);
  RngStream rng(0);
  EXPECT_THROW(m.sample(5, rng), ModelError);
}

TEST(MakeDiscreteModel, DependentRowsAreNotIndependent) {
  const auto m = make_discrete_model({1.0, 1.0}, {{0.9, 0.1}, {0.1, 0.9}});
  EXPECT_FALSE(m.independent_proposal());
}

TEST(MakeDiscreteModel, SamplingMatchesRowAndSkipsZeros) {
  const auto m = make_discrete_model({1.0, 1.0, 1.0}, {{0.2, 0.0, 0.8}, {0.0, 1.0, 0.0}, {0.3, 0.3, 0.4}});
  RngStream rng(17);
  std::vector<int> counts(3, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    ++counts[m.sample(0, rng)];
  }
  EXPECT_EQ(counts[1], 0);
  EXPECT_NEAR(counts[0] / double(n), 0.2, 5.0 * std::sqrt(0.16 / n));
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(m.sample(1, rng), 1u);
  }
}

TEST(MakeDiscreteModel, OneUniformPerDraw) {
  const auto m = fixtures::d2();
  RngStream rng(3);
  m.sample(0, rng);
  EXPECT_EQ(rng.draws(), 1u);
}

TEST(NormalModel, DensitiesAndValidation) {
  EXPECT_THROW(make_normal_model(0.0), ModelError);
  EXPECT_THROW(make_normal_model(1.0, ProposalKind::autoregressive, 1.0), ModelError);
  const auto rw = make_normal_model(2.0);
  EXPECT_DOUBLE_EQ(rw.log_p(2.0), -2.0);
  EXPECT_NEAR(rw.log_gamma(1.0, 1.0), -std::log(2.0) - 0.5 * std::log(2.0 * M_PI), 1e-15);
  EXPECT_DOUBLE_EQ(rw.log_gamma(3.0, 1.0), rw.log_gamma(1.0, 3.0));
  const auto ar = make_normal_model(1.0, ProposalKind::autoregressive, 0.5);
  EXPECT_NE(ar.log_gamma(1.0, 0.0), ar.log_gamma(0.0, 1.0));
  EXPECT_DOUBLE_EQ(ar.log_gamma(0.5, 1.0), -0.5 * std::log(2.0 * M_PI));
}

TEST(NormalModel, ProposalUsesTwoWords) {
  const auto m = make_normal_model(1.0);
  RngStream rng(0);
  m.sample(0.0, rng);
  EXPECT_EQ(rng.draws(), 2u);
}

} // namespace
