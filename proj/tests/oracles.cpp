#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

namespace oracle {

double ssim(const dlfr::Frame& a, const dlfr::Frame& b) {
    constexpr int n = 11;
    double g[n];
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        g[i] = std::exp(-double((i - 5) * (i - 5)) / (2.0 * 1.5 * 1.5));
        total += g[i];
    }
    for (double& v : g) v /= total;
    const double c1 = 6.5025, c2 = 58.5225;

    const auto w = static_cast<long>(a.width()), h = static_cast<long>(a.height());
    double sum = 0.0;
    long count = 0;
    for (long y0 = 0; y0 + n <= h; ++y0) {
        for (long x0 = 0; x0 + n <= w; ++x0) {
            double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
            for (int dy = 0; dy < n; ++dy) {
                for (int dx = 0; dx < n; ++dx) {
                    const double wt = g[dy] * g[dx];
                    const double pa = a.at(x0 + dx, y0 + dy), pb = b.at(x0 + dx, y0 + dy);
                    ma += wt * pa;
                    mb += wt * pb;
                    saa += wt * pa * pa;
                    sbb += wt * pb * pb;
                    sab += wt * pa * pb;
                }
            }
            const double va = saa - ma * ma, vb = sbb - mb * mb, cov = sab - ma * mb;
            sum += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
            ++count;
        }
    }
    return sum / double(count);
}

std::vector<double> dft_amplitudes(std::span<const double> x) {
    const std::size_t L = x.size();
    std::vector<double> out(L / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t t = 0; t < L; ++t)
            acc += x[t] * std::polar(1.0, -2.0 * std::numbers::pi * double(k) * double(t) / double(L));
        const bool edge = k == 0 || (L % 2 == 0 && k == L / 2);
        out[k] = std::abs(acc) * (edge ? 1.0 : 2.0) / double(L);
    }
    return out;
}

double complexity(std::span<const dlfr::Frame> frames) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < frames.size(); ++i) s += 1.0 - ssim(frames[i], frames[i + 1]);
    return s / double(frames.size() - 1);
}

double spearman(std::span<const double> a, std::span<const double> b) {
    auto ranks = [](std::span<const double> v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return v[i] < v[j]; });
        std::vector<double> r(v.size());
        for (std::size_t k = 0; k < idx.size(); ++k) r[idx[k]] = double(k);
        return r;
    };
    const auto ra = ranks(a), rb = ranks(b);
    const double n = double(a.size());
    double d2 = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

dlfr::Frame random_frame(std::mt19937_64& rng, std::size_t w, std::size_t h) {
    std::uniform_real_distribution<double> u(0.0, 255.0);
    std::vector<double> v(w * h);
    for (double& x : v) x = u(rng);
    return dlfr::Frame(w, h, std::move(v));
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

}  // namespace oracle
