#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "snm/errors.hpp"
#include "snm/zeros.hpp"
#include "snm/zeta.hpp"
#include "support.hpp"

namespace {

TEST(Zeros, FirstHundredAgainstSignScan) {
  const auto list = snm::testing::cached_zeros(1000.0);
  const auto oracle = snm::testing::sign_scan(10.0, 237.0);
  ASSERT_GE(oracle.size(), 100u);
  ASSERT_GE(list.size(), 100u);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_NEAR(list.ordinates[i], oracle[i], 1e-6) << i;
}

TEST(Zeros, KnownOrdinates) {
  const auto list = snm::testing::cached_zeros(1000.0);
  EXPECT_NEAR(list.ordinates[0], 14.134725141734693, 1e-8);
  EXPECT_NEAR(list.ordinates[1], 21.022039638771555, 1e-8);
  EXPECT_NEAR(list.ordinates[99], 236.524229665816, 1e-8);
}

TEST(Zeros, CountMatchesTheta) {
  const auto list = snm::testing::cached_zeros(1000.0);
  const double th = snm::rs_theta(1000.0).theta;
  EXPECT_EQ(static_cast<long>(list.size()), std::lround(th / std::numbers::pi + 1.0));
  EXPECT_EQ(static_cast<long>(list.count_upto(1000.0)), snm::zero_count(1000.0));
}

TEST(Zeros, SortedSimpleAndSignChanging) {
  const auto list = snm::testing::cached_zeros(1000.0);
  for (std::size_t i = 1; i < list.size(); ++i) ASSERT_LT(list.ordinates[i - 1], list.ordinates[i]);
  for (std::size_t i = 0; i < list.size(); i += 37) {
    const double g = list.ordinates[i];
    EXPECT_LT(snm::hardy_z(g - 1e-6) * snm::hardy_z(g + 1e-6), 0.0) << g;
  }
}

TEST(Zeros, SubrangeIsConsistent) {
  const auto all = snm::testing::cached_zeros(1000.0);
  const auto part = snm::find_zeros(400.0, 600.0);
  ASSERT_EQ(part.size(), all.count_upto(600.0) - all.count_upto(400.0));
  const std::size_t off = all.count_upto(400.0);
  for (std::size_t i = 0; i < part.size(); ++i) EXPECT_NEAR(part.ordinates[i], all.ordinates[off + i], 1e-9);
}

TEST(Zeros, AuditFindsMissingZero) {
  auto list = snm::testing::cached_zeros(1000.0);
  EXPECT_TRUE(snm::audit_zeros(list).complete);
  list.ordinates.erase(list.ordinates.begin() + 300);
  const auto audit = snm::audit_zeros(list);
  EXPECT_FALSE(audit.complete);
  ASSERT_FALSE(audit.windows.empty());
  const double missing = snm::testing::cached_zeros(1000.0).ordinates[300];
  EXPECT_LE(audit.windows.front().lo, missing);
  EXPECT_GE(audit.windows.front().hi, missing);
  EXPECT_EQ(audit.windows.front().found + 1, audit.windows.front().expected);
}

TEST(Zeros, RejectsBadRanges) {
  EXPECT_THROW(snm::find_zeros(0.0, 2e4), snm::PreconditionError);
  EXPECT_THROW(snm::find_zeros(100.0, 50.0), snm::DomainError);
}

TEST(ZeroFile, RoundTripIsBitExact) {
  const auto list = snm::testing::cached_zeros(1000.0);
  const std::string text = snm::format_zeros(list);
  const auto back = snm::parse_zeros(text);
  ASSERT_EQ(back.size(), list.size());
  for (std::size_t i = 0; i < list.size(); ++i) EXPECT_EQ(back.ordinates[i], list.ordinates[i]);
  EXPECT_EQ(back.accuracy, list.accuracy);
  EXPECT_EQ(back.t_max, list.t_max);
  EXPECT_EQ(snm::format_zeros(back), text);
}

TEST(ZeroFile, ParseErrorCarriesLineNumber) {
  const std::string text = "14.134725141734693\n21.022039638771555\nnot-a-number\n";
  try {
    snm::parse_zeros(text);
    FAIL() << "expected ParseError";
  } catch (const snm::ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ZeroFile, RejectsDisorderAndNonPositive) {
  EXPECT_THROW(snm::parse_zeros("21.0\n14.1\n"), snm::ParseError);
  EXPECT_THROW(snm::parse_zeros("-1.0\n"), snm::ParseError);
  EXPECT_THROW(snm::parse_zeros("14.1\n14.1\n"), snm::ParseError);
}

TEST(ZeroFile, CommentsAndDefaults) {
  const auto list = snm::parse_zeros("# hello\n\n14.134725141734693\n  21.022039638771555  \n", 1e-6);
  EXPECT_EQ(list.size(), 2u);
  EXPECT_EQ(list.accuracy, 1e-6);
  EXPECT_THROW(snm::load_zeros("/nonexistent/zeros.txt"), snm::IoError);
}

}  // namespace
