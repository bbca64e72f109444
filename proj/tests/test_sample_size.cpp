#include "mzkit/errors.hpp"
#include "mzkit/kernels.hpp"
#include "mzkit/sample_size.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace mzkit;

namespace {

// independent transcription of C q 4^q N^(2-1/q) B^q (log2(2N log2(4(4B)^q N q)))^2
double entropy_rule_oracle(double n, double q, double b, double big_c) {
    const double a = std::log(4.0 * std::exp(q * std::log(4.0 * b)) * n * q) / std::log(2.0);
    const double l = std::log(2.0 * n * a) / std::log(2.0);
    return big_c * q * std::exp(q * std::log(4.0)) * std::exp((2.0 - 1.0 / q) * std::log(n)) *
           std::exp(q * std::log(b)) * l * l;
}

} // namespace

TEST_CASE("entropy rule matches an independent transcription") {
    for (double n : {3.0, 10.0, 100.0})
        for (double q : {1.5, 2.0, 4.0})
            for (double b : {1.0, 2.5}) {
                SampleSizeQuery s;
                s.N = n;
                s.q = q;
                s.B = b;
                s.C = 0.7;
                CHECK(sample_size_value(s, SampleRule::LqEntropy) ==
                      doctest::Approx(entropy_rule_oracle(n, q, b, 0.7)).epsilon(1e-12));
            }
}

TEST_CASE("formula arithmetic") {
    SampleSizeQuery s;
    s.N = 3;
    s.q = 2;
    s.H = std::sqrt(3.0);
    s.delta = 0.1;
    CHECK(required_m(s, SampleRule::LqRandomNikolskii) == 3600);
    s.c = 0.5;
    CHECK(required_m(s, SampleRule::LqRandomNikolskii) == 1800);

    SampleSizeQuery l2;
    l2.N = 5;
    l2.b = 2.0;
    CHECK(required_m(l2, SampleRule::L2Sparse) == 10);
    l2.b = 1.5;
    CHECK(required_m(l2, SampleRule::L2Sparse) == 8);
    l2.b = 2.5;
    CHECK_THROWS_AS(required_m(l2, SampleRule::L2Sparse), ArgumentError);
    CHECK(l2_sparse_ratio_bound(1.5) == doctest::Approx(4.0));

    SampleSizeQuery w;
    w.N = 8;
    w.eps = 0.5;
    CHECK(required_m(w, SampleRule::WeightedUniformEps) == 32);
    CHECK(required_m(w, SampleRule::L1Weighted) == 96);

    SampleSizeQuery g;
    g.N = 16;
    g.B = 2;
    g.k = 1;
    CHECK(required_m(g, SampleRule::UniformNikolskiiGrowth) == 16 * 16 * 16 * 16);

    SampleSizeQuery u;
    u.N = 4;
    u.M = 4;
    CHECK(required_m(u, SampleRule::UniformBilinear) == 160);
    CHECK(kernel_m_bound(4, 4) == 160);
}

TEST_CASE("missing parameters are named") {
    SampleSizeQuery s;
    s.N = 3;
    try {
        required_m(s, SampleRule::LqRandomNikolskii);
        FAIL("expected ArgumentError");
    } catch (const ArgumentError& e) {
        CHECK(std::string(e.what()).find("'q'") != std::string::npos);
    }
    SampleSizeQuery none;
    CHECK_THROWS_AS(required_m(none, SampleRule::L2Sparse), ArgumentError);
}

TEST_CASE("sample sizes grow with N") {
    for (auto rule : {SampleRule::LqRandomNikolskii, SampleRule::L1Weighted, SampleRule::LqEntropy,
                      SampleRule::UniformNikolskiiGrowth, SampleRule::WeightedUniformEps,
                      SampleRule::UniformBilinear, SampleRule::L2Sparse}) {
        std::uint64_t prev = 0;
        for (double n : {2.0, 4.0, 8.0, 16.0}) {
            SampleSizeQuery s;
            s.N = n;
            s.q = 2;
            s.H = 2;
            s.delta = 0.5;
            s.eps = 0.5;
            s.B = 2;
            s.k = 1;
            s.M = 3;
            s.b = 2;
            const std::uint64_t m = required_m(s, rule);
            CHECK(m >= prev);
            prev = m;
        }
        CHECK(sample_rule_from_string(to_string(rule)) == rule);
    }
    CHECK_THROWS_AS(sample_rule_from_string("nope"), ArgumentError);
}

TEST_CASE("overflow is reported") {
    SampleSizeQuery s;
    s.N = 1e6;
    s.B = 2;
    s.k = 3;
    CHECK_THROWS_AS(required_m(s, SampleRule::UniformNikolskiiGrowth), ArgumentError);
}
