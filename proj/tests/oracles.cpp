#include "oracles.hpp"

#include <cmath>

namespace oracle {

int otsu_exhaustive(const sigver::GrayRaster& g) {
    bool uniform = true;
    for (std::size_t i = 1; i < g.samples.size() && uniform; ++i)
        uniform = g.samples[i] == g.samples[0];
    if (uniform) return 128;

    int best_t = 128;
    unsigned __int128 best_num = 0, best_den = 1;
    bool have = false;
    for (int t = 0; t < 256; ++t) {
        long long n0 = 0, s0 = 0, n1 = 0, s1 = 0;
        for (std::uint8_t v : g.samples) {
            if (v < t) {
                ++n0;
                s0 += v;
            } else {
                ++n1;
                s1 += v;
            }
        }
        if (n0 == 0 || n1 == 0) continue;
        __int128 d = static_cast<__int128>(s0) * n1 - static_cast<__int128>(s1) * n0;
        if (d < 0) d = -d;
        unsigned __int128 num = static_cast<unsigned __int128>(d) * static_cast<unsigned __int128>(d);
        unsigned __int128 den = static_cast<unsigned __int128>(n0) * static_cast<unsigned __int128>(n1);
        if (!have || num * best_den > best_num * den) {
            best_num = num;
            best_den = den;
            best_t = t;
            have = true;
        }
    }
    return best_t;
}

std::vector<sigver::Run> label_runs_brute(const sigver::RowHistogram& h) {
    std::vector<sigver::Run> runs;
    int start = 0;
    bool above = h.counts[0] >= h.mean;
    long long mass = 0;
    for (int r = 0; r < 256; ++r) {
        bool a = h.counts[static_cast<std::size_t>(r)] >= h.mean;
        if (a != above) {
            runs.push_back({start, r - start, above, mass});
            start = r;
            above = a;
            mass = 0;
        }
        mass += h.counts[static_cast<std::size_t>(r)];
    }
    runs.push_back({start, 256 - start, above, mass});
    return runs;
}

namespace {

double ref_fold(const std::vector<double>& x, long long t) {
    long long n = static_cast<long long>(x.size());
    long long period = 2 * n;
    long long m = ((t % period) + period) % period;
    if (m >= n) m = period - 1 - m;
    return x[static_cast<std::size_t>(m)];
}

void ref_dwt1(const std::vector<double>& x, const sigver::FilterBank& fb,
              std::vector<double>& lo, std::vector<double>& hi) {
    int n = static_cast<int>(x.size());
    int m = (n + 11) / 2;
    lo.assign(static_cast<std::size_t>(m), 0.0);
    hi.assign(static_cast<std::size_t>(m), 0.0);
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < 12; ++j) {
            double v = ref_fold(x, 2LL * k + 1 - j);
            lo[static_cast<std::size_t>(k)] += fb.lowpass[static_cast<std::size_t>(j)] * v;
            hi[static_cast<std::size_t>(k)] += fb.highpass[static_cast<std::size_t>(j)] * v;
        }
}

struct RefLevel {
    sigver::Matrix ll, lh, hl, hh;
};

RefLevel ref_level(const sigver::Matrix& in, const sigver::FilterBank& fb) {
    int mr = (in.rows + 11) / 2, mc = (in.cols + 11) / 2;
    sigver::Matrix row_lo(in.rows, mc), row_hi(in.rows, mc);
    std::vector<double> buf, lo, hi;
    for (int r = 0; r < in.rows; ++r) {
        buf.assign(in.data.begin() + static_cast<std::ptrdiff_t>(r) * in.cols,
                   in.data.begin() + static_cast<std::ptrdiff_t>(r + 1) * in.cols);
        ref_dwt1(buf, fb, lo, hi);
        for (int c = 0; c < mc; ++c) {
            row_lo.at(r, c) = lo[static_cast<std::size_t>(c)];
            row_hi.at(r, c) = hi[static_cast<std::size_t>(c)];
        }
    }
    RefLevel out{sigver::Matrix(mr, mc), sigver::Matrix(mr, mc), sigver::Matrix(mr, mc),
                 sigver::Matrix(mr, mc)};
    for (int c = 0; c < mc; ++c) {
        buf.resize(static_cast<std::size_t>(in.rows));
        for (int r = 0; r < in.rows; ++r) buf[static_cast<std::size_t>(r)] = row_lo.at(r, c);
        ref_dwt1(buf, fb, lo, hi);
        for (int r = 0; r < mr; ++r) {
            out.ll.at(r, c) = lo[static_cast<std::size_t>(r)];
            out.lh.at(r, c) = hi[static_cast<std::size_t>(r)];
        }
        for (int r = 0; r < in.rows; ++r) buf[static_cast<std::size_t>(r)] = row_hi.at(r, c);
        ref_dwt1(buf, fb, lo, hi);
        for (int r = 0; r < mr; ++r) {
            out.hl.at(r, c) = lo[static_cast<std::size_t>(r)];
            out.hh.at(r, c) = hi[static_cast<std::size_t>(r)];
        }
    }
    return out;
}

double ref_mean(const sigver::Matrix& m) {
    double s = 0.0;
    for (double v : m.data) s += v;
    return m.data.empty() ? 0.0 : s / static_cast<double>(m.data.size());
}

double ref_std(const sigver::Matrix& m) {
    double mu = ref_mean(m);
    double ss = 0.0;
    for (double v : m.data) ss += (v - mu) * (v - mu);
    return m.data.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(m.data.size()));
}

} // namespace

RefPyramid ref_dwt2_two_level(const sigver::Matrix& band, const sigver::FilterBank& fb) {
    RefLevel l1 = ref_level(band, fb);
    RefLevel l2 = ref_level(l1.ll, fb);
    RefPyramid p;
    p.approx = l2.ll;
    p.h1 = l1.lh;
    p.v1 = l1.hl;
    p.d1 = l1.hh;
    p.h2 = l2.lh;
    p.v2 = l2.hl;
    p.d2 = l2.hh;
    return p;
}

RefBandFeatures ref_band_features(const sigver::BinaryRaster& r, int row_begin, int row_end) {
    int h = row_end - row_begin;
    sigver::Matrix band(h, sigver::BinaryRaster::kCols);
    long long black = 0;
    for (int row = 0; row < h; ++row)
        for (int col = 0; col < sigver::BinaryRaster::kCols; ++col)
            if (r.black(row_begin + row, col)) {
                band.at(row, col) = 1.0;
                ++black;
            }
    RefPyramid p = ref_dwt2_two_level(band, sigver::sym6_bank());
    return {ref_mean(p.approx), ref_std(p.approx), ref_std(p.h2), ref_std(p.v2), ref_std(p.d2),
            black};
}

sigver::Gradient fd_gradient(const sigver::Perceptron& p, const std::vector<double>& x,
                             double target, double eps) {
    sigver::Gradient g;
    g.g1.resize(p.w1().size());
    g.g2.resize(p.w2().size());
    sigver::Perceptron work = p;
    auto loss = [&](const sigver::Perceptron& net) {
        double e = net.forward(x) - target;
        return 0.5 * e * e;
    };
    for (std::size_t i = 0; i < work.w1().size(); ++i) {
        double save = work.w1()[i];
        work.w1()[i] = save + eps;
        double up = loss(work);
        work.w1()[i] = save - eps;
        double dn = loss(work);
        work.w1()[i] = save;
        g.g1[i] = (up - dn) / (2.0 * eps);
    }
    for (std::size_t i = 0; i < work.w2().size(); ++i) {
        double save = work.w2()[i];
        work.w2()[i] = save + eps;
        double up = loss(work);
        work.w2()[i] = save - eps;
        double dn = loss(work);
        work.w2()[i] = save;
        g.g2[i] = (up - dn) / (2.0 * eps);
    }
    return g;
}

} // namespace oracle
