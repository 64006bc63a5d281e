#include <gtest/gtest.h>

#include "roadweights/config.hpp"
#include "roadweights/errors.hpp"

using namespace roadweights;

TEST(Variant, ParseAndPrint) {
  for (Variant v : kAllVariants) EXPECT_EQ(parse_variant(to_string(v)), v);
  EXPECT_FALSE(parse_variant("F5"));
}

TEST(Variant, PenaltiesDropUnusedTerms) {
  const Penalties base{2.0, 3.0, 0.1};
  const auto f1 = penalties_for(Variant::kF1, base);
  const auto f2 = penalties_for(Variant::kF2, base);
  const auto f3 = penalties_for(Variant::kF3, base);
  const auto f4 = penalties_for(Variant::kF4, base);
  EXPECT_EQ(f1.alpha, 0.0);
  EXPECT_EQ(f1.beta, 0.0);
  EXPECT_EQ(f2.alpha, 2.0);
  EXPECT_EQ(f2.beta, 0.0);
  EXPECT_EQ(f3.alpha, 0.0);
  EXPECT_EQ(f3.beta, 3.0);
  EXPECT_EQ(f4.alpha, 2.0);
  EXPECT_EQ(f4.beta, 3.0);
  for (const auto& p : {f1, f2, f3, f4}) EXPECT_EQ(p.gamma, 0.1);
}

TEST(RunConfig, DefaultsAreValid) {
  const RunConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.similarity_threshold, 0.95);
  EXPECT_EQ(c.highway_cutoff_kmh, 90.0);
}

TEST(RunConfig, EntriesRoundTripThroughSet) {
  RunConfig c;
  c.penalties = {0.25, 4.0, 1e-7};
  c.similarity_threshold = 0.9;
  c.cg_max_iters = 77;
  c.jacobi = true;
  c.seed = 12345;
  c.variant = Variant::kF3;
  RunConfig d;
  for (const auto& [k, v] : c.entries()) d.set(k, v);
  EXPECT_EQ(d.entries(), c.entries());
}

TEST(RunConfig, RejectsBadValues) {
  RunConfig c;
  EXPECT_THROW(c.set("alpha", "abc"), Error);
  EXPECT_THROW(c.set("nope", "1"), Error);
  EXPECT_THROW(c.set("variant", "F9"), Error);
  c.penalties.gamma = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c = RunConfig{};
  c.similarity_threshold = 1.5;
  EXPECT_THROW(c.validate(), Error);
  c = RunConfig{};
  c.penalties.alpha = -1;
  EXPECT_THROW(c.validate(), Error);
}
