#include <qce/parallel.hpp>
#include <qce/verify.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <stdexcept>

using namespace qce;

TEST(Parallel, VisitsEveryIndexOnce) {
  for (unsigned t : {1u, 2u, 4u}) {
    std::vector<std::atomic<int>> seen(1000);
    parallel_for(seen.size(), t, [&](std::size_t i) { ++seen[i]; });
    for (const auto& s : seen) EXPECT_EQ(s.load(), 1);
  }
  parallel_for(0, 3, [](std::size_t) { FAIL(); });
}

TEST(Parallel, RethrowsWorkerException) {
  EXPECT_THROW(parallel_for(100, 3,
                            [](std::size_t i) {
                              if (i == 42) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(Parallel, ThreadResolution) {
  EXPECT_EQ(resolve_threads(3), 3u);
  ::setenv("QCE_THREADS", "5", 1);
  EXPECT_EQ(resolve_threads(0), 5u);
  ::setenv("QCE_THREADS", "junk", 1);
  EXPECT_EQ(resolve_threads(0), 1u);
  ::unsetenv("QCE_THREADS");
  EXPECT_EQ(resolve_threads(0), 1u);
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
  const auto a = certificate_grid(15, 120, 1), b = certificate_grid(15, 120, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].D, b[i].D);
    EXPECT_EQ(a[i].p, b[i].p);
    EXPECT_EQ(a[i].cert.lower_bound, b[i].cert.lower_bound);
  }
  EXPECT_EQ(two_torsion_primes(300, 1), two_torsion_primes(300, 3));
}
