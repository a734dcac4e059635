#pragma once

#include <cstddef>
#include <vector>

// Hot loops in two flavours: a serial reference and an OpenMP version.
// Both reduce over fixed-size chunks in a fixed order, so they return
// bit-identical results regardless of thread count.
namespace wobble::kernels {

inline constexpr std::size_t kChunk = 256;

namespace serial {

// (1/2P) * sum over the full 2P-point grid of F_n(lambda_j) * phi(lambda_j),
// given phi on the half grid lambda_j = pi j / P, j = 0..P.
double fejer_quadrature(int n, const std::vector<double>& phi_half);

// a0 + sum_k a_k cos(k x) at each point, by direct summation.
std::vector<double> cosine_eval(double a0, const std::vector<double>& a, const std::vector<double>& x);

// Sum over rows of the outer product row * row^T for a rows x d block,
// returned as a row-major d x d matrix.
std::vector<double> outer_sum(const std::vector<double>& rows, std::size_t d);

}  // namespace serial

namespace omp {

double fejer_quadrature(int n, const std::vector<double>& phi_half);
std::vector<double> cosine_eval(double a0, const std::vector<double>& a, const std::vector<double>& x);
std::vector<double> outer_sum(const std::vector<double>& rows, std::size_t d);

}  // namespace omp

}  // namespace wobble::kernels
