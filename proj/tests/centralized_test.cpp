#include <cmath>
#include <stdexcept>
#include <vector>

#include "aoisim/centralized.hpp"
#include "doctest.h"

using namespace aoisim;

TEST_SUITE("centralized") {

TEST_CASE("preamble collision probability") {
  CHECK(RachCollisionProbability(1, 64) == 0.0);
  CHECK(RachCollisionProbability(0, 64) == 0.0);
  CHECK(RachCollisionProbability(2, 64) == doctest::Approx(0.015625));
  CHECK_THROWS_AS(RachCollisionProbability(3, 0), std::invalid_argument);
}

TEST_CASE("lone requester always survives") {
  Rng rng(1);
  const std::vector<UplinkRequest> one = {UplinkRequest{4, 3.0, 1, std::nullopt}};
  for (int k = 0; k < 100; ++k) CHECK(RachPhase(one, RachConfig{}, rng).size() == 1);
}

TEST_CASE("survival fraction at 65 requesters") {
  std::vector<UplinkRequest> requests(65);
  for (int i = 0; i < 65; ++i) requests[i].device_id = i;
  const double expected = std::pow(63.0 / 64.0, 64);
  for (bool exact : {false, true}) {
    Rng rng(exact ? 8 : 7);
    long survived = 0;
    const int trials = exact ? 20000 : 100000;
    for (int k = 0; k < trials; ++k) {
      survived += static_cast<long>(RachPhase(requests, RachConfig{64, exact}, rng).size());
    }
    CHECK(std::abs(static_cast<double>(survived) / (65.0 * trials) - expected) < 0.01);
  }
}

TEST_CASE("aging identification") {
  CHECK(IdentifyAging(3, 10, std::nullopt) == AgingKind::kLinear);
  CHECK(IdentifyAging(6, 10, std::nullopt) == AgingKind::kLinear);
  CHECK_FALSE(IdentifyAging(4, 10, std::nullopt).has_value());
  CHECK(IdentifyAging(4, 11, RequestObservation{10, 2}) == AgingKind::kExponential);
  CHECK(IdentifyAging(2, 11, RequestObservation{10, 1}) == std::nullopt);  // 1+1 == 1*2
  CHECK(IdentifyAging(8, 12, RequestObservation{10, 2}) == AgingKind::kExponential);
  CHECK(IdentifyAging(4, 12, RequestObservation{10, 2}) == AgingKind::kLinear);
  CHECK(IdentifyAging(4, 10, RequestObservation{10, 2}) == std::nullopt);
}

TEST_CASE("powers of two") {
  CHECK(IsPowerOfTwo(1));
  CHECK(IsPowerOfTwo(1024));
  CHECK_FALSE(IsPowerOfTwo(3));
  CHECK_FALSE(IsPowerOfTwo(0.5));
  CHECK_FALSE(IsPowerOfTwo(0));
}

TEST_CASE("maximum likelihood type") {
  const double l1 = 3 * std::log(0.75) + std::log(0.25);
  const double l2 = 3 * std::log(0.25) + std::log(0.75);
  CHECK(l1 == doctest::Approx(-2.249).epsilon(1e-3));
  CHECK(l2 == doctest::Approx(-4.447).epsilon(1e-3));
  CHECK(LearnType({3, 1}, 0.75, 0.75) == TypeId::kType1);
  CHECK(LearnType({0, 5}, 0.75, 0.75) == TypeId::kType2);
  CHECK(LearnType({2, 2}, 0.75, 0.75) == TypeId::kType2);
  CHECK(LearnType({0, 0}, 0.75, 0.75) == TypeId::kType2);
}

TEST_CASE("learner") {
  TypeLearner learner(3, TypePriors{});
  CHECK_FALSE(learner.Estimate(0).has_value());
  learner.Record(0, AgingKind::kLinear);
  CHECK(learner.Estimate(0) == TypeId::kType1);
  learner.Record(0, AgingKind::kExponential);
  CHECK(learner.Estimate(0) == TypeId::kType2);
  CHECK(learner.counts(0).total() == 2);
}

TEST_CASE("expected future age") {
  CHECK(ExpectedFutureAoi(4, TypeId::kType1, 0.75, 0.75) == doctest::Approx(5.75));
  CHECK(ExpectedFutureAoi(4, TypeId::kType2, 0.75, 0.75) == doctest::Approx(7.25));
  CHECK(ExpectedFutureAoi(1, TypeId::kType1, 0.75, 0.75) == doctest::Approx(2.0));
  CHECK(ExpectedFutureAoi(1, TypeId::kType2, 0.75, 0.75) == doctest::Approx(2.0));
  CHECK(ExpectedFutureAoi(4, TypeId::kType1, 0.75, 0.75, 2) ==
        doctest::Approx(0.75 * 6 + 0.25 * 16));
  CHECK(MarginalExpectedFutureAoi(4, TypePriors{0.75, 0.75, 0.6}) ==
        doctest::Approx(0.6 * 5.75 + 0.4 * 7.25));
  CHECK(ExactFutureAoi(4, AgingKind::kExponential, 3) == 32);
}

TEST_CASE("priority allocation") {
  SUBCASE("largest key first") {
    const auto a = AllocateByPriority({{1, 6.0, std::nullopt, 1}, {2, 8.0, std::nullopt, 1}}, 1,
                                      1, nullptr);
    REQUIRE(a.entries.size() == 1);
    CHECK(a.entries[0].device_id == 2);
  }
  SUBCASE("type 2 wins an equal key") {
    Rng rng(4);
    for (int k = 0; k < 20; ++k) {
      const auto a = AllocateByPriority(
          {{1, 5.0, TypeId::kType1, 1}, {2, 5.0, TypeId::kType2, 1}}, 1, 1, &rng);
      REQUIRE(a.entries.size() == 1);
      CHECK(a.entries[0].device_id == 2);
    }
  }
  SUBCASE("partial grant when RBs run out") {
    const auto a = AllocateByPriority(
        {{1, 9.0, std::nullopt, 2}, {2, 8.0, std::nullopt, 2}, {3, 7.0, std::nullopt, 2}}, 5, 1,
        nullptr);
    REQUIRE(a.entries.size() == 3);
    CHECK(a.entries[0].rbs == std::vector<int>{0, 1});
    CHECK(a.entries[1].rbs == std::vector<int>{2, 3});
    CHECK(a.entries[2].rbs == std::vector<int>{4});
    CHECK_NOTHROW(a.Validate(5));
  }
  SUBCASE("residual ties are broken uniformly") {
    Rng rng(9);
    int first = 0;
    for (int k = 0; k < 2000; ++k) {
      const auto a = AllocateByPriority(
          {{1, 5.0, std::nullopt, 1}, {2, 5.0, std::nullopt, 1}}, 1, 1, &rng);
      first += a.entries[0].device_id == 1 ? 1 : 0;
    }
    CHECK(std::abs(first / 2000.0 - 0.5) < 0.05);
  }
}

TEST_CASE("learning scheduler identifies from consecutive requests") {
  CentralizedScheduler s(SchedulerVariant::kLearning, 2, TypePriors{}, 1);
  // age 2 then 4 one slot later: exponential
  s.Rank(UplinkRequest{0, 2.0, 1, std::nullopt}, 10);
  const PriorityEntry e = s.Rank(UplinkRequest{0, 4.0, 1, std::nullopt}, 11);
  CHECK(e.key == 8.0);
  CHECK(s.learner().counts(0).exponential == 1);
  CHECK(e.type == TypeId::kType2);

  // delivery after identification is not counted again
  s.OnDelivered(0, AgingKind::kExponential);
  CHECK(s.learner().counts(0).total() == 1);

  // an unidentified message is counted when its content arrives
  s.Rank(UplinkRequest{1, 1.0, 1, std::nullopt}, 10);
  CHECK(s.learner().counts(1).total() == 0);
  s.OnDelivered(1, AgingKind::kLinear);
  CHECK(s.learner().counts(1).linear == 1);
}

TEST_CASE("no-learning scheduler keys on the marginal expectation") {
  CentralizedScheduler s(SchedulerVariant::kNoLearning, 1, TypePriors{}, 1);
  const PriorityEntry e = s.Rank(UplinkRequest{0, 3.0, 1, std::nullopt}, 5);
  CHECK(e.key == doctest::Approx(MarginalExpectedFutureAoi(3.0, TypePriors{})));
  CHECK_FALSE(e.type.has_value());
}

TEST_CASE("full-information scheduler") {
  CHECK_THROWS_AS(CentralizedScheduler(SchedulerVariant::kFullInfo, 2, TypePriors{}, 1),
                  std::invalid_argument);
  CentralizedScheduler s(SchedulerVariant::kFullInfo, 2, TypePriors{}, 2,
                         {TypeId::kType1, TypeId::kType2});
  const PriorityEntry e = s.Rank(UplinkRequest{1, 4.0, 1, AgingKind::kExponential}, 5);
  CHECK(e.key == 16.0);
  CHECK(e.type == TypeId::kType2);
  CHECK_THROWS_AS(s.Rank(UplinkRequest{0, 4.0, 1, std::nullopt}, 5), std::logic_error);
}

}  // TEST_SUITE
