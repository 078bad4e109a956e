#include "dlfr/rope.hpp"

#include "dlfr/error.hpp"

#include <algorithm>
#include <cmath>

namespace dlfr {
namespace {

void check_dim(std::size_t dim) {
    require(dim >= 2 && dim % 2 == 0, ErrorKind::parameter,
            "RoPE dimension must be even and at least 2, got " + std::to_string(dim));
}

}  // namespace

std::vector<double> rope_theta(std::size_t dim) {
    check_dim(dim);
    std::vector<double> theta(dim / 2);
    for (std::size_t i = 0; i < theta.size(); ++i)
        theta[i] = std::pow(10000.0, -2.0 * static_cast<double>(i) / static_cast<double>(dim));
    return theta;
}

std::vector<double> positions_from_durations(std::span<const double> durations) {
    std::vector<double> p;
    p.reserve(durations.size());
    double acc = 0.0;
    for (double d : durations) {
        require(std::isfinite(d) && d > 0.0, ErrorKind::parameter,
                "token durations must be positive");
        p.push_back(acc);
        acc += d;
    }
    return p;
}

std::vector<double> rope_rotate(std::span<const double> v, double position) {
    check_dim(v.size());
    const auto theta = rope_theta(v.size());
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double a = position * theta[i];
        const double c = std::cos(a), s = std::sin(a);
        const double x = v[2 * i], y = v[2 * i + 1];
        out[2 * i] = x * c - y * s;
        out[2 * i + 1] = x * s + y * c;
    }
    return out;
}

double attention_score(std::span<const double> q, std::span<const double> k, double p_m,
                       double p_n) {
    require(q.size() == k.size(), ErrorKind::dimension, "query and key dimensions differ");
    const auto rq = rope_rotate(q, p_m);
    const auto rk = rope_rotate(k, p_n);
    double s = 0.0;
    for (std::size_t i = 0; i < rq.size(); ++i) s += rq[i] * rk[i];
    return s;
}

std::vector<double> RopeTable::rotate(std::span<const double> v, std::size_t m) const {
    require(v.size() == dim, ErrorKind::dimension,
            "vector has dimension " + std::to_string(v.size()) + ", table has " +
                std::to_string(dim));
    require(m < rows(), ErrorKind::parameter, "table row out of range");
    std::vector<double> out(dim);
    for (std::size_t i = 0; i < half(); ++i) {
        const double c = cos_at(m, i), s = sin_at(m, i);
        out[2 * i] = v[2 * i] * c - v[2 * i + 1] * s;
        out[2 * i + 1] = v[2 * i] * s + v[2 * i + 1] * c;
    }
    return out;
}

RopeTable rope_table_at(std::span<const double> positions, std::size_t dim) {
    RopeTable t;
    t.dim = dim;
    t.theta = rope_theta(dim);
    t.positions.assign(positions.begin(), positions.end());
    for (std::size_t m = 1; m < positions.size(); ++m)
        require(positions[m] >= positions[m - 1], ErrorKind::parameter,
                "RoPE positions must be non-decreasing");
    t.cos.resize(t.rows() * t.half());
    t.sin.resize(t.rows() * t.half());
    for (std::size_t m = 0; m < t.rows(); ++m) {
        for (std::size_t i = 0; i < t.half(); ++i) {
            const double a = positions[m] * t.theta[i];
            t.cos[m * t.half() + i] = std::cos(a);
            t.sin[m * t.half() + i] = std::sin(a);
        }
    }
    return t;
}

RopeTable rope_table(std::span<const double> durations, std::size_t dim) {
    check_dim(dim);
    const auto p = positions_from_durations(durations);
    return rope_table_at(p, dim);
}

RopeTable standard_rope_table(std::size_t tokens, std::size_t dim) {
    std::vector<double> p(tokens);
    for (std::size_t m = 0; m < tokens; ++m) p[m] = static_cast<double>(m);
    return rope_table_at(p, dim);
}

std::vector<double> token_durations(std::span<const std::size_t> segment_frames,
                                    std::span<const std::size_t> down_ratios) {
    require(segment_frames.size() == down_ratios.size(), ErrorKind::dimension,
            "one ratio per segment required");
    std::vector<double> d;
    for (std::size_t s = 0; s < segment_frames.size(); ++s) {
        const std::size_t r = down_ratios[s];
        require(r >= 1, ErrorKind::parameter, "down ratio must be positive");
        for (std::size_t left = segment_frames[s]; left > 0; left -= std::min(left, r))
            d.push_back(static_cast<double>(std::min(left, r)));
    }
    return d;
}

}  // namespace dlfr
