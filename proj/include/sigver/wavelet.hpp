#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace sigver {

// Orthonormal analysis pair. highpass[k] = (-1)^k lowpass[11-k].
struct FilterBank {
    std::array<double, 12> lowpass{};
    std::array<double, 12> highpass{};
};

// 12-tap least-asymmetric (symlet) filter with 6 vanishing moments.
const FilterBank& sym6_bank();

struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
};

// Output length of one decimated filtering pass over n samples.
constexpr int dwt_out_len(int n) { return (n + 11) / 2; }

// Half-point symmetric index folding: ... x1 x0 | x0 x1 ... xn-1 | xn-1 ...
int sym_fold(long long t, int n);

// One decimated analysis pass. approx[k] = sum_j low[j] x~(2k+1-j), detail
// likewise with the highpass; x~ is the symmetric extension. Output length
// is dwt_out_len(n) for both. Throws input_too_short for n < 2.
void dwt1(std::span<const double> x, const FilterBank& fb,
          std::vector<double>& approx, std::vector<double>& detail);

// Exact inverse of dwt1 given the original length n.
std::vector<double> idwt1(std::span<const double> approx, std::span<const double> detail,
                          const FilterBank& fb, int n);

// One separable 2D level. Rows are filtered first (across columns), then
// columns. detail_h = row-lowpass/column-highpass, detail_v =
// row-highpass/column-lowpass, detail_d = highpass both ways.
struct Subbands {
    Matrix approx;
    Matrix detail_h;
    Matrix detail_v;
    Matrix detail_d;
};

struct WaveletPyramid {
    Matrix approx;                                  // second-level approximation
    std::array<Subbands, 2> levels;                 // [0] first, [1] second; approx members left empty
    std::array<std::pair<int, int>, 2> input_dims;  // rows, cols fed into each level
};

// Two-level decomposition; row/column passes run under OpenMP.
WaveletPyramid dwt2_two_level(const Matrix& band, const FilterBank& fb = sym6_bank());

// Plain single-threaded implementation kept as the reference the parallel
// kernels are checked against (and benchmarked against).
WaveletPyramid dwt2_two_level_serial(const Matrix& band, const FilterBank& fb = sym6_bank());

// Reconstructs the original matrix from a pyramid; throws
// dimension_mismatch if the subband shapes are inconsistent.
Matrix idwt2_two_level(const WaveletPyramid& p, const FilterBank& fb = sym6_bank());

} // namespace sigver
