#include <gtest/gtest.h>

#include "support.hpp"

using namespace covlift;
using namespace covlift::testing;

namespace {

QuadraticSystemFp random_system(u64 p, std::size_t n, std::size_t neqs) {
  QuadraticSystemFp sys(p, n);
  for (std::size_t e = 0; e < neqs; ++e) {
    QuadEquation q;
    q.constant = uniform(0, p - 1);
    for (std::size_t v = 0; v < n; ++v)
      if (uniform(0, 2) == 0) q.lin.push_back({v, uniform(1, p - 1)});
    std::size_t nq = uniform(0, 2);
    for (std::size_t t = 0; t < nq; ++t) q.quad.push_back({uniform(0, n - 1), uniform(0, n - 1), uniform(1, p - 1)});
    sys.add(std::move(q));
  }
  return sys;
}

}  // namespace

TEST(LinearSystem, UniqueSolution) {
  // x + y = 3, x - y = 1 over F_7
  LinearSystemFp s(7, 2);
  s.add_equation({1, 1}, 3);
  s.add_equation({1, 6}, 1);
  ASSERT_TRUE(s.reduce());
  EXPECT_TRUE(s.free_variables().empty());
  auto sols = s.solutions(100);
  ASSERT_EQ(sols.size(), 1u);
  EXPECT_EQ(sols[0], (std::vector<u64>{2, 1}));
  EXPECT_EQ(s.forced().size(), 2u);
}

TEST(LinearSystem, InconsistentAndFree) {
  LinearSystemFp bad(5, 2);
  bad.add_equation({1, 2}, 1);
  bad.add_equation({2, 4}, 3);
  EXPECT_FALSE(bad.reduce());
  EXPECT_TRUE(bad.solutions(100).empty());
  LinearSystemFp free(3, 3);
  free.add_equation({1, 1, 1}, 0);
  EXPECT_EQ(free.free_variables().size(), 2u);
  EXPECT_EQ(free.solutions(100).size(), 9u);
  EXPECT_THROW(free.solutions(5), Error);
  EXPECT_THROW(free.add_equation({1, 1}, 0), Error);
}

TEST(LinearSystem, AgreesWithEnumeration) {
  for (u64 p : {2, 3, 5})
    for (int t = 0; t < 40; ++t) {
      std::size_t n = 1 + t % 4, m = 1 + t % 3;
      LinearSystemFp s(p, n);
      std::vector<std::vector<u64>> A;
      std::vector<u64> b;
      for (std::size_t i = 0; i < m; ++i) {
        std::vector<u64> row(n);
        for (auto& c : row) c = uniform(0, p - 1);
        A.push_back(row);
        b.push_back(uniform(0, p - 1));
        s.add_equation(row, b.back());
      }
      std::set<std::vector<u64>> brute;
      std::vector<u64> x(n, 0);
      while (true) {
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i) {
          u64 acc = 0;
          for (std::size_t j = 0; j < n; ++j) acc = (acc + A[i][j] * x[j]) % p;
          ok = acc == b[i];
        }
        if (ok) brute.insert(x);
        std::size_t i = 0;
        while (i < n && ++x[i] == p) x[i++] = 0;
        if (i == n) break;
      }
      auto sols = s.solutions(1000);
      ASSERT_EQ(std::set<std::vector<u64>>(sols.begin(), sols.end()), brute);
      ASSERT_EQ(sols.size(), brute.size());
    }
}

TEST(QuadraticSystem, SmallExample) {
  // x*y = 1 and x + y = 0 over F_5: x^2 = -1, so x in {2, 3}
  QuadraticSystemFp s(5, 2);
  s.add({4, {}, {{0, 1, 1}}});
  s.add({0, {{0, 1}, {1, 1}}, {}});
  auto ex = s.solve_exhaustive(1000);
  std::set<std::vector<u64>> want{{2, 3}, {3, 2}};
  EXPECT_EQ(std::set<std::vector<u64>>(ex.begin(), ex.end()), want);
  auto pr = s.solve_propagate(1000);
  EXPECT_EQ(std::set<std::vector<u64>>(pr.begin(), pr.end()), want);
  for (const auto& x : ex) EXPECT_TRUE(s.satisfied(x));
  EXPECT_FALSE(s.satisfied({1, 1}));
}

TEST(QuadraticSystem, SolversAgree) {
  for (u64 p : {2, 3, 5})
    for (int t = 0; t < 60; ++t) {
      std::size_t n = 2 + t % 4;
      auto sys = random_system(p, n, 1 + t % 4);
      auto ex = sys.solve_exhaustive(1 << 16), pr = sys.solve_propagate(1 << 20);
      ASSERT_EQ(std::set<std::vector<u64>>(ex.begin(), ex.end()), std::set<std::vector<u64>>(pr.begin(), pr.end()));
      for (const auto& x : pr) ASSERT_TRUE(sys.satisfied(x));
    }
}

TEST(QuadraticSystem, Caps) {
  QuadraticSystemFp s(5, 10);
  EXPECT_THROW(s.solve_exhaustive(1000), Error);
  try {
    s.solve_propagate(10);
    FAIL() << "expected cap_exceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::cap_exceeded);
  }
}
