#include "sigver/wavelet.hpp"

#include "sigver/errors.hpp"

namespace sigver {

const FilterBank& sym6_bank() {
    static const FilterBank bank = [] {
        FilterBank fb;
        fb.lowpass = {
            -0.0078007083250323804,
            0.0017677118642540077,
            0.044724901770781385,
            -0.021060292512370848,
            -0.072637522786376583,
            0.33792942172816583,
            0.78764114102865100,
            0.49105594192797373,
            -0.048311742585698055,
            -0.11799011114852003,
            0.0034907120842221625,
            0.015404109327044824,
        };
        for (int k = 0; k < 12; ++k)
            fb.highpass[k] = ((k & 1) ? -1.0 : 1.0) * fb.lowpass[11 - k];
        return fb;
    }();
    return bank;
}

int sym_fold(long long t, int n) {
    long long p = 2LL * n;
    t = ((t % p) + p) % p;
    if (t >= n) t = p - 1 - t;
    return static_cast<int>(t);
}

void dwt1(std::span<const double> x, const FilterBank& fb,
          std::vector<double>& approx, std::vector<double>& detail) {
    int n = static_cast<int>(x.size());
    if (n < 2) raise(Errc::input_too_short, "dwt1 needs at least 2 samples");
    int m = dwt_out_len(n);
    approx.resize(m);
    detail.resize(m);
    for (int k = 0; k < m; ++k) {
        double a = 0.0, d = 0.0;
        for (int j = 0; j < 12; ++j) {
            double v = x[static_cast<std::size_t>(sym_fold(2LL * k + 1 - j, n))];
            a += fb.lowpass[j] * v;
            d += fb.highpass[j] * v;
        }
        approx[k] = a;
        detail[k] = d;
    }
}

std::vector<double> idwt1(std::span<const double> approx, std::span<const double> detail,
                          const FilterBank& fb, int n) {
    int m = dwt_out_len(n);
    if (static_cast<int>(approx.size()) != m || static_cast<int>(detail.size()) != m)
        raise(Errc::dimension_mismatch, "subband length does not match original length");
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        // coefficients whose window covers sample t
        int i_lo = t / 2;
        int i_hi = (t + 10) / 2;
        double s = 0.0;
        for (int i = i_lo; i <= i_hi; ++i) {
            int j = 2 * i + 1 - t;
            s += approx[static_cast<std::size_t>(i)] * fb.lowpass[j] +
                 detail[static_cast<std::size_t>(i)] * fb.highpass[j];
        }
        x[static_cast<std::size_t>(t)] = s;
    }
    return x;
}

namespace {

// One separable level; the two loop nests parallelize across rows and
// columns. With run_parallel = false the pragmas are inert and the
// arithmetic is identical, so both paths produce the same bits.
Subbands dwt2_level(const Matrix& in, const FilterBank& fb, bool run_parallel) {
    if (in.rows < 2 || in.cols < 2)
        raise(Errc::input_too_short, "dwt2 needs at least a 2x2 matrix");
    int mr = dwt_out_len(in.rows);
    int mc = dwt_out_len(in.cols);

    Matrix row_lo(in.rows, mc), row_hi(in.rows, mc);
#pragma omp parallel if (run_parallel)
    {
        std::vector<double> a, d;
#pragma omp for
        for (int r = 0; r < in.rows; ++r) {
            std::span<const double> row(in.data.data() + static_cast<std::size_t>(r) * in.cols,
                                        static_cast<std::size_t>(in.cols));
            dwt1(row, fb, a, d);
            for (int c = 0; c < mc; ++c) {
                row_lo.at(r, c) = a[static_cast<std::size_t>(c)];
                row_hi.at(r, c) = d[static_cast<std::size_t>(c)];
            }
        }
    }

    Subbands out;
    out.approx = Matrix(mr, mc);
    out.detail_h = Matrix(mr, mc);
    out.detail_v = Matrix(mr, mc);
    out.detail_d = Matrix(mr, mc);
#pragma omp parallel if (run_parallel)
    {
        std::vector<double> col(static_cast<std::size_t>(in.rows));
        std::vector<double> a, d;
#pragma omp for
        for (int c = 0; c < mc; ++c) {
            for (int r = 0; r < in.rows; ++r) col[static_cast<std::size_t>(r)] = row_lo.at(r, c);
            dwt1(col, fb, a, d);
            for (int r = 0; r < mr; ++r) {
                out.approx.at(r, c) = a[static_cast<std::size_t>(r)];
                out.detail_h.at(r, c) = d[static_cast<std::size_t>(r)];
            }
            for (int r = 0; r < in.rows; ++r) col[static_cast<std::size_t>(r)] = row_hi.at(r, c);
            dwt1(col, fb, a, d);
            for (int r = 0; r < mr; ++r) {
                out.detail_v.at(r, c) = a[static_cast<std::size_t>(r)];
                out.detail_d.at(r, c) = d[static_cast<std::size_t>(r)];
            }
        }
    }
    return out;
}

WaveletPyramid dwt2_impl(const Matrix& band, const FilterBank& fb, bool run_parallel) {
    WaveletPyramid p;
    p.input_dims[0] = {band.rows, band.cols};
    Subbands l1 = dwt2_level(band, fb, run_parallel);
    p.input_dims[1] = {l1.approx.rows, l1.approx.cols};
    Subbands l2 = dwt2_level(l1.approx, fb, run_parallel);

    p.approx = std::move(l2.approx);
    p.levels[0].detail_h = std::move(l1.detail_h);
    p.levels[0].detail_v = std::move(l1.detail_v);
    p.levels[0].detail_d = std::move(l1.detail_d);
    p.levels[1].detail_h = std::move(l2.detail_h);
    p.levels[1].detail_v = std::move(l2.detail_v);
    p.levels[1].detail_d = std::move(l2.detail_d);
    return p;
}

void check_dims(const Matrix& m, int rows, int cols, const char* what) {
    if (m.rows != rows || m.cols != cols)
        raise(Errc::dimension_mismatch, std::string("pyramid subband '") + what +
                                            "' has inconsistent dimensions");
}

// Inverse of one level: columns first, then rows.
Matrix idwt2_level(const Matrix& approx, const Subbands& det, const FilterBank& fb,
                   int rows, int cols) {
    int mr = dwt_out_len(rows);
    int mc = dwt_out_len(cols);
    check_dims(approx, mr, mc, "approx");
    check_dims(det.detail_h, mr, mc, "detail_h");
    check_dims(det.detail_v, mr, mc, "detail_v");
    check_dims(det.detail_d, mr, mc, "detail_d");

    Matrix row_lo(rows, mc), row_hi(rows, mc);
    std::vector<double> a(static_cast<std::size_t>(mr)), d(static_cast<std::size_t>(mr));
    for (int c = 0; c < mc; ++c) {
        for (int r = 0; r < mr; ++r) {
            a[static_cast<std::size_t>(r)] = approx.at(r, c);
            d[static_cast<std::size_t>(r)] = det.detail_h.at(r, c);
        }
        std::vector<double> lo = idwt1(a, d, fb, rows);
        for (int r = 0; r < rows; ++r) row_lo.at(r, c) = lo[static_cast<std::size_t>(r)];
        for (int r = 0; r < mr; ++r) {
            a[static_cast<std::size_t>(r)] = det.detail_v.at(r, c);
            d[static_cast<std::size_t>(r)] = det.detail_d.at(r, c);
        }
        std::vector<double> hi = idwt1(a, d, fb, rows);
        for (int r = 0; r < rows; ++r) row_hi.at(r, c) = hi[static_cast<std::size_t>(r)];
    }

    Matrix out(rows, cols);
    std::vector<double> ra(static_cast<std::size_t>(mc)), rd(static_cast<std::size_t>(mc));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < mc; ++c) {
            ra[static_cast<std::size_t>(c)] = row_lo.at(r, c);
            rd[static_cast<std::size_t>(c)] = row_hi.at(r, c);
        }
        std::vector<double> x = idwt1(ra, rd, fb, cols);
        for (int c = 0; c < cols; ++c) out.at(r, c) = x[static_cast<std::size_t>(c)];
    }
    return out;
}

} // namespace

WaveletPyramid dwt2_two_level(const Matrix& band, const FilterBank& fb) {
    return dwt2_impl(band, fb, true);
}

WaveletPyramid dwt2_two_level_serial(const Matrix& band, const FilterBank& fb) {
    return dwt2_impl(band, fb, false);
}

Matrix idwt2_two_level(const WaveletPyramid& p, const FilterBank& fb) {
    auto [r1, c1] = p.input_dims[1];
    Matrix ll1 = idwt2_level(p.approx, p.levels[1], fb, r1, c1);
    auto [r0, c0] = p.input_dims[0];
    if (ll1.rows != dwt_out_len(r0) || ll1.cols != dwt_out_len(c0))
        raise(Errc::dimension_mismatch, "level sizes disagree between pyramid levels");
    return idwt2_level(ll1, p.levels[0], fb, r0, c0);
}

} // namespace sigver
