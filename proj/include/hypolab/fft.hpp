#pragma once

#include <complex>
#include <span>

namespace hypolab::fft {

enum class Direction { Forward = -1, Backward = +1 };

// Unnormalized in-place transforms of a row-major nx × ny array (row index = x).
// Backward(Forward(v)) = nx·ny·v for 2D, = n·v along the transformed axis.
void transform_2d(std::span<std::complex<double>> data, int nx, int ny, Direction dir);
/// 1D transforms along y (contiguous) for every row.
void transform_y(std::span<std::complex<double>> data, int nx, int ny, Direction dir);
/// 1D transforms along x (strided) for every column.
void transform_x(std::span<std::complex<double>> data, int nx, int ny, Direction dir);
/// Single 1D transform of length n.
void transform_1d(std::span<std::complex<double>> data, Direction dir);

}  // namespace hypolab::fft
