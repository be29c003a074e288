#include <cmath>
#include <stdexcept>

#include "aoisim/channel.hpp"
#include "aoisim/rng.hpp"
#include "doctest.h"

using namespace aoisim;

namespace {

RbGrant Grant(int device, std::vector<int> rbs) { return RbGrant{device, std::move(rbs)}; }

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("outage probability") {
  const ChannelModel model = ChannelModel::FromMeanSnrDb(20.0, 1.0);
  CHECK(model.MeanSnr(0) == doctest::Approx(100.0));
  CHECK(OutageProbability(model, 0, 1) == doctest::Approx(0.00995).epsilon(1e-3));
  CHECK(OutageProbability(model, 0, 2) == doctest::Approx(0.0198).epsilon(1e-3));
  CHECK_THROWS_AS(OutageProbability(model, 0, 0), std::domain_error);

  const ChannelModel clear = ChannelModel::FromMeanSnrDb(20.0, 0.0);
  CHECK(OutageProbability(clear, 0, 1) == 0.0);
  CHECK(OutageProbability(clear, 0, 7) == 0.0);
}

TEST_CASE("per-device mean SNR") {
  ChannelModel model = ChannelModel::FromMeanSnrDb(20.0, 1.0);
  model.per_device_mean_snr = {10.0, 1000.0};
  CHECK(OutageProbability(model, 0, 1) > OutageProbability(model, 1, 1));
  CHECK(OutageProbability(model, 0, 1) == doctest::Approx(1.0 - std::exp(-0.1)));
}

TEST_CASE("shared RB fails every claimant") {
  Rng rng(1);
  const ChannelModel clear = ChannelModel::FromMeanSnrDb(20.0, 0.0);
  RbAssignment a{1, {Grant(1, {3}), Grant(2, {3})}};
  const auto out = ResolveSlot(a, clear, 5, rng);
  CHECK(out[0] == TxOutcome::kDuplicateFailure);
  CHECK(out[1] == TxOutcome::kDuplicateFailure);

  RbAssignment single{1, {Grant(1, {3})}};
  CHECK(ResolveSlot(single, clear, 5, rng)[0] == TxOutcome::kSuccess);
}

TEST_CASE("multi-RB transmission fails whole on any shared RB") {
  Rng rng(1);
  const ChannelModel clear = ChannelModel::FromMeanSnrDb(20.0, 0.0);
  RbAssignment a{1, {Grant(1, {0, 1, 2}), Grant(2, {2}), Grant(3, {4})}};
  const auto out = ResolveSlot(a, clear, 5, rng);
  CHECK(out[0] == TxOutcome::kDuplicateFailure);
  CHECK(out[1] == TxOutcome::kDuplicateFailure);
  CHECK(out[2] == TxOutcome::kSuccess);
}

TEST_CASE("malformed assignments are rejected") {
  Rng rng(1);
  const ChannelModel clear = ChannelModel::FromMeanSnrDb(20.0, 0.0);
  CHECK_THROWS_AS(ResolveSlot(RbAssignment{1, {Grant(1, {5})}}, clear, 5, rng),
                  std::domain_error);
  CHECK_THROWS_AS(ResolveSlot(RbAssignment{1, {Grant(1, {})}}, clear, 5, rng),
                  std::domain_error);
  CHECK_THROWS_AS(ResolveSlot(RbAssignment{1, {Grant(1, {1, 1})}}, clear, 5, rng),
                  std::domain_error);
  CHECK_THROWS_AS(ResolveSlot(RbAssignment{1, {Grant(1, {1}), Grant(1, {2})}}, clear, 5, rng),
                  std::domain_error);
}

TEST_CASE("outage rate matches the closed form") {
  Rng rng(17);
  const ChannelModel model = ChannelModel::FromMeanSnrDb(20.0, -100.0 * std::log(0.99));
  RbAssignment a{1, {Grant(1, {1}), Grant(2, {2})}};
  const int trials = 100000;
  int ok[2] = {0, 0};
  for (int k = 0; k < trials; ++k) {
    const auto out = ResolveSlot(a, model, 4, rng);
    for (int j = 0; j < 2; ++j) ok[j] += out[j] == TxOutcome::kSuccess ? 1 : 0;
  }
  for (int j = 0; j < 2; ++j) {
    CHECK(std::abs(static_cast<double>(ok[j]) / trials - 0.99) < 0.005);
  }
}

TEST_CASE("disjoint singletons always succeed without outage") {
  Rng rng(2);
  const ChannelModel clear = ChannelModel::FromMeanSnrDb(20.0, 0.0);
  RbAssignment a;
  for (int d = 0; d < 10; ++d) a.entries.push_back(Grant(d, {d}));
  for (const TxOutcome o : ResolveSlot(a, clear, 10, rng)) CHECK(o == TxOutcome::kSuccess);
}

}  // TEST_SUITE
