#include <doctest.h>

#include <cmath>

#include "dwcl/kernels.hpp"
#include "dwcl/matrix.hpp"
#include "dwcl/ref_kernels.hpp"
#include "dwcl/rng.hpp"
#include "oracles.hpp"

using dwcl::Matrix;

TEST_CASE("pairwise_distances on a 1-d pair") {
    const Matrix x = Matrix::from_rows({{0.0}, {3.0}});
    const Matrix d = dwcl::pairwise_distances(x);
    CHECK(d(0, 0) == 0.0);
    CHECK(d(1, 1) == 0.0);
    CHECK(d(0, 1) == doctest::Approx(3.0));
    CHECK(d(1, 0) == doctest::Approx(3.0));
}

TEST_CASE("pairwise_distances identical rows give zero off-diagonal") {
    const Matrix x = Matrix::from_rows({{1.5, -2.0}, {1.5, -2.0}, {0.0, 0.0}});
    const Matrix d = dwcl::pairwise_distances(x);
    CHECK(d(0, 1) == 0.0);
    CHECK(d(1, 0) == 0.0);
    CHECK(d(0, 2) > 0.0);
}

TEST_CASE("pairwise_distances matches the scalar-loop reference") {
    dwcl::RandomSource rng(11);
    const Matrix x = oracle::random_matrix(rng, 10, 4);
    const Matrix got = dwcl::pairwise_distances(x);
    const Matrix want = dwcl::ref::pairwise_distances(x);
    CHECK(dwcl::max_abs_diff(got, want) <= 1e-12);
}

TEST_CASE("pairwise_distances is exactly symmetric with zero diagonal") {
    dwcl::RandomSource rng(5);
    for (int round = 0; round < 5; ++round) {
        const Matrix x = oracle::random_matrix(rng, 17, 3, 10.0);
        const Matrix d = dwcl::pairwise_distances(x);
        for (std::size_t i = 0; i < d.rows(); ++i) {
            CHECK(d(i, i) == 0.0);
            for (std::size_t j = 0; j < d.cols(); ++j) {
                CHECK(d(i, j) == d(j, i));
            }
        }
    }
}

TEST_CASE("pairwise_distances rejects non-finite input") {
    Matrix x(2, 2, 0.0);
    x(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS((void)dwcl::pairwise_distances(x), std::invalid_argument);
}

TEST_CASE("cosine_similarity endpoints") {
    const Matrix a = Matrix::from_rows({{1.0, 2.0, -1.0}});
    const Matrix b = Matrix::from_rows({{1.0, 2.0, -1.0}, {-1.0, -2.0, 1.0}});
    const Matrix s = dwcl::cosine_similarity(a, b);
    CHECK(std::abs(s(0, 0) - 1.0) <= 1e-12);
    CHECK(std::abs(s(0, 1) + 1.0) <= 1e-12);
}

TEST_CASE("cosine_similarity matches the per-pair dot/norm oracle") {
    dwcl::RandomSource rng(21);
    const Matrix a = oracle::random_matrix(rng, 5, 3);
    const Matrix b = oracle::random_matrix(rng, 4, 3);
    const Matrix got = dwcl::cosine_similarity(a, b);
    const Matrix want = dwcl::ref::cosine_similarity(a, b);
    CHECK(got.rows() == 5);
    CHECK(got.cols() == 4);
    CHECK(dwcl::max_abs_diff(got, want) <= 1e-12);
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got.data()[i] >= -1.0 - 1e-12);
        CHECK(got.data()[i] <= 1.0 + 1e-12);
    }
}

TEST_CASE("cosine_similarity rejects a zero-norm row") {
    const Matrix a = Matrix::from_rows({{0.0, 0.0}});
    const Matrix b = Matrix::from_rows({{1.0, 0.0}});
    CHECK_THROWS_AS((void)dwcl::cosine_similarity(a, b), std::invalid_argument);
    CHECK_THROWS_AS((void)dwcl::cosine_similarity(b, a), std::invalid_argument);
}

TEST_CASE("matmul kernels agree with the serial reference") {
    dwcl::RandomSource rng(31);
    const Matrix a = oracle::random_matrix(rng, 7, 5);
    const Matrix b = oracle::random_matrix(rng, 5, 6);
    const Matrix c = oracle::random_matrix(rng, 9, 5);
    const Matrix d = oracle::random_matrix(rng, 7, 4);
    CHECK(dwcl::max_abs_diff(dwcl::matmul_nn(a, b), dwcl::ref::matmul_nn(a, b)) <= 1e-12);
    CHECK(dwcl::max_abs_diff(dwcl::matmul_nt(a, c), dwcl::ref::matmul_nt(a, c)) <= 1e-12);
    CHECK(dwcl::max_abs_diff(dwcl::matmul_tn(a, d), dwcl::ref::matmul_tn(a, d)) <= 1e-12);
}

TEST_CASE("kernels are reproducible call to call") {
    dwcl::RandomSource rng(41);
    const Matrix x = oracle::random_matrix(rng, 12, 6);
    CHECK(dwcl::pairwise_distances(x) == dwcl::pairwise_distances(x));
    CHECK(dwcl::cosine_similarity(x, x) == dwcl::cosine_similarity(x, x));
}

TEST_CASE("random source determinism") {
    dwcl::RandomSource a(123), b(123);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    CHECK(a.uniform() == b.uniform());
    CHECK(a.normal() == b.normal());

    dwcl::RandomSource c(123);
    dwcl::RandomSource s1 = c.split(7), s2 = c.split(7), s3 = c.split(8);
    CHECK(s1.next_u64() == s2.next_u64());
    CHECK(s1.next_u64() != s3.next_u64());
}

TEST_CASE("shuffle is deterministic and a permutation") {
    std::vector<int> v1(20), v2(20);
    for (int i = 0; i < 20; ++i) v1[i] = v2[i] = i;
    dwcl::RandomSource a(9), b(9);
    a.shuffle(v1);
    b.shuffle(v2);
    CHECK(v1 == v2);
    std::vector<int> sorted = v1;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 20; ++i) CHECK(sorted[static_cast<std::size_t>(i)] == i);
}
