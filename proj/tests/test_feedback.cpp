// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#include "udcran/feedback.hpp"
#include "udcran/validation.hpp"

#include "doctest.h"
#include "test_util.hpp"

using namespace udcran;

TEST_SUITE("feedback") {
  TEST_CASE("codeword equal to the estimate direction") {
    Rng rng(1);
    const CVec h = sample_cn(rng, 2, 3.0);
    CMat book(2, 3);
    book.col(0) = sample_unit(rng, 2);
    book.col(1) = h.normalized();
    book.col(2) = sample_unit(rng, 2);
    const CdiQuantization q = quantize_cdi(h, book);
    CHECK(q.index == 1);
    CHECK(q.a == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::min(q.phi, kTwoPi - q.phi) < 1e-12);
  }

  TEST_CASE("orthogonal single codeword") {
    CVec h(2);
    h << cd(1, 0), cd(0, 0);
    CMat book(2, 1);
    book << cd(0, 0), cd(0, 1);
    CHECK(quantize_cdi(h, book).a == doctest::Approx(1.0));
  }

  TEST_CASE("ties go to the lowest index") {
    CVec h(2);
    h << cd(1, 0), cd(0, 0);
    CMat book(2, 2);
    book.col(0) << cd(0, 0), cd(1, 0);
    book.col(1) << cd(0, 1), cd(0, 0);
    CMat twin(2, 3);
    twin << book, book.col(1);
    CHECK(quantize_cdi(h, twin).index == 1);
  }

  TEST_CASE("zero estimate is rejected") {
    CHECK_THROWS_AS(quantize_cdi(CVec::Zero(2), CMat::Identity(2, 2)), NumericalError);
  }

  TEST_CASE("phase quantizer cells") {
    CHECK(quantize_pa(0.1, 1) == doctest::Approx(kPi / 2));
    CHECK(quantize_pa(kPi, 2) == doctest::Approx(kPi + kPi / 4));
    CHECK(quantize_pa(4.0, 0) == 0.0);
    CHECK(std::abs(quantize_pa(2.345, 20) - 2.345) <= kPi / (1 << 20));
  }

  TEST_CASE("phase error stays inside its cell") {
    Rng rng(4);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    for (int b = 1; b <= 6; ++b)
      for (int t = 0; t < 2000; ++t) {
        const double phi = angle(rng);
        CHECK(std::abs(phi - quantize_pa(phi, b)) <= kPi / (1 << b) + 1e-15);
      }
  }

  TEST_CASE("codebooks are unit norm and reproducible") {
    const Topology t = generate_topology(NetworkConfig::small_scenario());
    FeedbackConfig cfg;
    Rng r1(9), r2(9);
    const CodebookSet a = generate_codebooks(cfg, t, r1);
    const CodebookSet b = generate_codebooks(cfg, t, r2);
    for (int k = 0; k < t.num_ue(); ++k)
      for (int i = 0; i < t.num_rrh(); ++i) {
        const CMat& book = a.at(i, k);
        if (!t.in_cluster(i, k)) {
          CHECK(book.size() == 0);
          continue;
        }
        CHECK(book.cols() == (1 << cfg.b_cdi));
        for (int c = 0; c < book.cols(); ++c) CHECK(std::abs(book.col(c).norm() - 1.0) < 1e-12);
        CHECK(book == b.at(i, k));
      }
  }

  TEST_CASE("reconstruction identity of the quantization residual") {
    Rng rng(21);
    for (int t = 0; t < 2000; ++t) {
      const int m = 2 + t % 3;
      const CVec h = sample_cn(rng, m, 1.0);
      CMat book(m, 8);
      for (int c = 0; c < 8; ++c) book.col(c) = sample_unit(rng, m);
      const CdiQuantization q = quantize_cdi(h, book);
      CHECK(q.phi >= 0.0);
      CHECK(q.phi < kTwoPi);
      const CVec dir = h.normalized();
      CHECK(q.a == doctest::Approx(1.0 - std::norm(dir.dot(q.q))).epsilon(1e-12));
      if (q.a <= 1e-12) continue;
      const CVec u = (dir - std::sqrt(1.0 - q.a) * std::polar(1.0, q.phi) * q.q) / std::sqrt(q.a);
      CHECK(std::abs(u.norm() - 1.0) < 1e-10);
      CHECK(std::abs(q.q.dot(u)) < 1e-10);
    }
  }

  TEST_CASE("feedback state carries realised and quantized values") {
    const Scenario sc = testing::small_scenario(0);
    for (int k = 0; k < sc.topo.num_ue(); ++k)
      for (int i : sc.topo.clusters[k]) {
        const PairFeedback& p = sc.feedback.at(i, k);
        REQUIRE(p.valid);
        CHECK(std::abs(p.q.norm() - 1.0) < 1e-12);
        CHECK(p.a >= 0.0);
        CHECK(p.a <= 1.0);
        CHECK(p.phi_hat == doctest::Approx(quantize_pa(p.phi, p.b_pa)));
      }
  }

  TEST_CASE("isotropy, error mean and phase error oracles") {
    OracleOptions opt;
    opt.stat_draws = 200'000;
    for (const auto& r : feedback_oracles(opt)) {
      INFO(r.name << " error " << r.error);
      CHECK(r.pass);
    }
  }
}
