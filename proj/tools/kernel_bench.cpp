// Compares the OpenMP kernels against the serial reference implementations:
// wall time, speedup, and the largest elementwise deviation.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dwcl/kernels.hpp"
#include "dwcl/matrix.hpp"
#include "dwcl/ref_kernels.hpp"
#include "dwcl/rng.hpp"

namespace {

dwcl::Matrix random_matrix(std::size_t rows, std::size_t cols, dwcl::RandomSource& rng) {
    dwcl::Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
    return m;
}

double time_call(const std::function<dwcl::Matrix()>& fn, int repeats, dwcl::Matrix& out) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        out = fn();
        best = std::min(best, std::chrono::duration<double>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count());
    }
    return best;
}

void report(const char* name, std::size_t n, double ref_s, double omp_s, double max_diff) {
    std::printf("%-20s n=%-5zu ref %9.4f ms  omp %9.4f ms  speedup %5.2fx  max|diff| %g\n",
                name, n, ref_s * 1e3, omp_s * 1e3, ref_s / omp_s, max_diff);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial-vs-OpenMP kernel benchmark"};
    std::size_t n = 768, d = 128;
    int repeats = 3;
    app.add_option("--n", n, "row count");
    app.add_option("--dim", d, "column count");
    app.add_option("--repeats", repeats, "repeats per kernel (min taken)");
    CLI11_PARSE(app, argc, argv);

    dwcl::RandomSource rng(7);
    const dwcl::Matrix a = random_matrix(n, d, rng);
    const dwcl::Matrix b = random_matrix(n, d, rng);
    const dwcl::Matrix square = random_matrix(d, d, rng);

    dwcl::Matrix r_ref, r_omp;
    double t_ref, t_omp;

    t_ref = time_call([&] { return dwcl::ref::pairwise_distances(a); }, repeats, r_ref);
    t_omp = time_call([&] { return dwcl::pairwise_distances(a); }, repeats, r_omp);
    report("pairwise_distances", n, t_ref, t_omp, dwcl::max_abs_diff(r_ref, r_omp));

    t_ref = time_call([&] { return dwcl::ref::cosine_similarity(a, b); }, repeats, r_ref);
    t_omp = time_call([&] { return dwcl::cosine_similarity(a, b); }, repeats, r_omp);
    report("cosine_similarity", n, t_ref, t_omp, dwcl::max_abs_diff(r_ref, r_omp));

    t_ref = time_call([&] { return dwcl::ref::matmul_nn(a, square); }, repeats, r_ref);
    t_omp = time_call([&] { return dwcl::matmul_nn(a, square); }, repeats, r_omp);
    report("matmul_nn", n, t_ref, t_omp, dwcl::max_abs_diff(r_ref, r_omp));

    t_ref = time_call([&] { return dwcl::ref::matmul_nt(a, b); }, repeats, r_ref);
    t_omp = time_call([&] { return dwcl::matmul_nt(a, b); }, repeats, r_omp);
    report("matmul_nt", n, t_ref, t_omp, dwcl::max_abs_diff(r_ref, r_omp));

    t_ref = time_call([&] { return dwcl::ref::matmul_tn(a, b); }, repeats, r_ref);
    t_omp = time_call([&] { return dwcl::matmul_tn(a, b); }, repeats, r_omp);
    report("matmul_tn", n, t_ref, t_omp, dwcl::max_abs_diff(r_ref, r_omp));

    return 0;
}
