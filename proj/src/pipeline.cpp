#include "dlfr/pipeline.hpp"

#include "dlfr/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

namespace dlfr {
namespace {

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.emplace_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::uint64_t to_uint(const std::string& text, const std::string& token) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || p != text.data() + text.size())
        fail(ErrorKind::config, "bad number '" + text + "' in pipeline token '" + token + "'");
    return v;
}

PipelineStage parse_token(const std::string& token, std::uint64_t default_seed) {
    const auto parts = split(token, ':');
    const std::string& name = parts[0];
    PipelineStage st;
    if (name == "slot" && parts.size() == 1) {
        st.kind = StageKind::temporal_downsample_slot;
    } else if (name == "id" && parts.size() == 1) {
        st.kind = StageKind::identity;
    } else if (name == "pool" && parts.size() == 2) {
        st.kind = StageKind::spatial_mean_pool;
        st.factor = to_uint(parts[1], token);
        require(st.factor >= 1, ErrorKind::config, "pool factor must be >= 1");
    } else if (name == "linear" && parts.size() >= 2 && parts.size() <= 4) {
        st.kind = StageKind::fixed_linear;
        st.out_channels = to_uint(parts[1], token);
        require(st.out_channels >= 1, ErrorKind::config, "linear stage needs >= 1 channel");
        st.seed = default_seed;
        std::size_t next = 2;
        if (parts.size() > next && parts[next] != "tanh") st.seed = to_uint(parts[next++], token);
        if (parts.size() > next) {
            require(parts[next] == "tanh", ErrorKind::config,
                    "unknown linear stage option in '" + token + "'");
            st.saturate = true;
            ++next;
        }
        require(next == parts.size(), ErrorKind::config, "malformed token '" + token + "'");
    } else {
        fail(ErrorKind::config, "unknown pipeline token '" + token + "'");
    }
    return st;
}

std::string token_of(const PipelineStage& st) {
    switch (st.kind) {
        case StageKind::identity: return "id";
        case StageKind::spatial_mean_pool: return "pool:" + std::to_string(st.factor);
        case StageKind::fixed_linear:
            return "linear:" + std::to_string(st.out_channels) + ":" + std::to_string(st.seed) +
                   (st.saturate ? ":tanh" : "");
        case StageKind::temporal_downsample_slot:
        case StageKind::temporal_upsample_slot: return "slot";
    }
    return "?";
}

std::vector<PipelineStage> parse_list(std::string_view text, std::uint64_t default_seed,
                                      StageKind slot_kind) {
    std::vector<PipelineStage> out;
    const std::string body = trim(text);
    if (body.empty()) return out;
    for (const auto& raw : split(body, ',')) {
        const std::string tok = trim(raw);
        // Unseeded linear stages get a per-position seed.
        auto st = parse_token(tok, default_seed + out.size());
        if (st.is_slot()) st.kind = slot_kind;
        out.push_back(st);
    }
    return out;
}

std::vector<PipelineStage> non_slots(const std::vector<PipelineStage>& v) {
    std::vector<PipelineStage> out;
    std::copy_if(v.begin(), v.end(), std::back_inserter(out),
                 [](const PipelineStage& s) { return !s.is_slot(); });
    return out;
}

// --- stage math ----------------------------------------------------------

FeatureVolume mean_pool(const FeatureVolume& in, std::size_t f) {
    if (f == 1) return in;
    require(in.height % f == 0 && in.width % f == 0, ErrorKind::dimension,
            "pool factor does not divide the feature size");
    FeatureVolume out(in.steps, in.channels, in.height / f, in.width / f);
    const double norm = 1.0 / static_cast<double>(f * f);
    for (std::size_t t = 0; t < in.steps; ++t) {
        for (std::size_t c = 0; c < in.channels; ++c) {
            const double* src = in.data.data() + (t * in.channels + c) * in.height * in.width;
            double* dst = out.data.data() + (t * out.channels + c) * out.height * out.width;
            for (std::size_t y = 0; y < out.height; ++y) {
                for (std::size_t x = 0; x < out.width; ++x) {
                    double acc = 0.0;
                    for (std::size_t dy = 0; dy < f; ++dy)
                        for (std::size_t dx = 0; dx < f; ++dx)
                            acc += src[(y * f + dy) * in.width + x * f + dx];
                    dst[y * out.width + x] = acc * norm;
                }
            }
        }
    }
    return out;
}

FeatureVolume nearest_unpool(const FeatureVolume& in, std::size_t f) {
    if (f == 1) return in;
    FeatureVolume out(in.steps, in.channels, in.height * f, in.width * f);
    for (std::size_t t = 0; t < in.steps; ++t) {
        for (std::size_t c = 0; c < in.channels; ++c) {
            const double* src = in.data.data() + (t * in.channels + c) * in.height * in.width;
            double* dst = out.data.data() + (t * out.channels + c) * out.height * out.width;
            for (std::size_t y = 0; y < out.height; ++y)
                for (std::size_t x = 0; x < out.width; ++x)
                    dst[y * out.width + x] = src[(y / f) * in.width + x / f];
        }
    }
    return out;
}

// Per-pixel channel mixing: out[o] = sum_c m[o][c] * in[c].
FeatureVolume mix_channels(const FeatureVolume& in, const Eigen::MatrixXd& m) {
    require(static_cast<std::size_t>(m.cols()) == in.channels, ErrorKind::dimension,
            "channel mixing matrix does not match the input");
    const std::size_t plane = in.height * in.width;
    const auto out_c = static_cast<std::size_t>(m.rows());
    FeatureVolume out(in.steps, out_c, in.height, in.width);
    for (std::size_t t = 0; t < in.steps; ++t) {
        const double* src = in.data.data() + t * in.channels * plane;
        double* dst = out.data.data() + t * out_c * plane;
        for (std::size_t o = 0; o < out_c; ++o) {
            for (std::size_t c = 0; c < in.channels; ++c) {
                const double w = m(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(c));
                for (std::size_t i = 0; i < plane; ++i) dst[o * plane + i] += w * src[c * plane + i];
            }
        }
    }
    return out;
}

Eigen::MatrixXd forward_matrix(const PipelineStage& st, std::size_t in_channels) {
    const auto w = projection_matrix(st.seed, st.out_channels, in_channels);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(st.out_channels),
                      static_cast<Eigen::Index>(in_channels));
    for (std::size_t r = 0; r < st.out_channels; ++r)
        for (std::size_t c = 0; c < in_channels; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                w[r * in_channels + c] / 255.0;
    return m;
}

constexpr double kAtanhLimit = 1.0 - 1e-12;

FeatureVolume apply_forward(const PipelineStage& st, FeatureVolume vol) {
    switch (st.kind) {
        case StageKind::identity: return vol;
        case StageKind::spatial_mean_pool: return mean_pool(vol, st.factor);
        case StageKind::fixed_linear: {
            auto out = mix_channels(vol, forward_matrix(st, vol.channels));
            if (st.saturate)
                for (double& v : out.data) v = std::tanh(v);
            return out;
        }
        default: break;
    }
    fail(ErrorKind::parameter, "slot passed to apply_forward");
}

FeatureVolume apply_inverse(const PipelineStage& st, FeatureVolume vol, Shape target) {
    switch (st.kind) {
        case StageKind::identity: return vol;
        case StageKind::spatial_mean_pool: return nearest_unpool(vol, st.factor);
        case StageKind::fixed_linear: {
            require(vol.channels == st.out_channels, ErrorKind::dimension,
                    "decoder input does not match the linear stage");
            if (st.saturate)
                for (double& v : vol.data) v = std::atanh(std::clamp(v, -kAtanhLimit, kAtanhLimit));
            const Eigen::MatrixXd fwd = forward_matrix(st, target.channels);
            const Eigen::MatrixXd inv = fwd.completeOrthogonalDecomposition().pseudoInverse();
            return mix_channels(vol, inv);
        }
        default: break;
    }
    fail(ErrorKind::parameter, "slot passed to apply_inverse");
}

}  // namespace

// --- Placement -------------------------------------------------------------

std::string Placement::to_string() const {
    std::ostringstream os;
    os << 'e';
    for (std::size_t i = 0; i < encoder.size(); ++i) os << (i ? "," : "") << encoder[i];
    os << "/d";
    for (std::size_t i = 0; i < decoder.size(); ++i) os << (i ? "," : "") << decoder[i];
    return os.str();
}

Placement Placement::parse(std::string_view text) {
    const auto halves = split(text, '/');
    require(halves.size() == 2 && !halves[0].empty() && halves[0][0] == 'e' &&
                !halves[1].empty() && halves[1][0] == 'd',
            ErrorKind::config, "malformed placement '" + std::string(text) + "'");
    auto indices = [&](const std::string& part) {
        std::vector<std::size_t> out;
        const std::string body = part.substr(1);
        if (body.empty()) return out;
        for (const auto& tok : split(body, ',')) out.push_back(to_uint(tok, std::string(text)));
        return out;
    };
    return {indices(halves[0]), indices(halves[1])};
}

// --- Pipeline -------------------------------------------------------------

Pipeline Pipeline::parse(std::string_view descriptor, std::uint64_t default_seed) {
    Pipeline p;
    const auto arrow = descriptor.find("=>");
    p.encoder_ = parse_list(descriptor.substr(0, arrow), default_seed,
                            StageKind::temporal_downsample_slot);
    if (arrow == std::string_view::npos) {
        p.decoder_.assign(p.encoder_.rbegin(), p.encoder_.rend());
        for (auto& st : p.decoder_)
            if (st.is_slot()) st.kind = StageKind::temporal_upsample_slot;
    } else {
        // Decoder tokens name the encoder stage they undo and take its seed.
        auto enc_stages = non_slots(p.encoder_);
        std::reverse(enc_stages.begin(), enc_stages.end());
        p.decoder_ = parse_list(descriptor.substr(arrow + 2), default_seed,
                                StageKind::temporal_upsample_slot);
        std::size_t j = 0;
        for (auto& st : p.decoder_) {
            if (st.is_slot()) continue;
            require(j < enc_stages.size(), ErrorKind::config,
                    "decoder has more stages than the encoder");
            if (st.kind == StageKind::fixed_linear && enc_stages[j].kind == StageKind::fixed_linear &&
                st.out_channels == enc_stages[j].out_channels &&
                st.saturate == enc_stages[j].saturate) {
                st.seed = enc_stages[j].seed;
            }
            ++j;
        }
    }
    auto dec_stages = non_slots(p.decoder_);
    std::reverse(dec_stages.begin(), dec_stages.end());
    require(dec_stages == non_slots(p.encoder_), ErrorKind::config,
            "decoder stages must mirror the encoder stages");
    return p;
}

Pipeline Pipeline::identity() { return parse("slot"); }

std::string Pipeline::descriptor() const {
    auto join = [](const std::vector<PipelineStage>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + token_of(v[i]);
        return s;
    };
    return join(encoder_) + "=>" + join(decoder_);
}

std::size_t Pipeline::encoder_slots() const noexcept {
    return static_cast<std::size_t>(std::count_if(encoder_.begin(), encoder_.end(),
                                                  [](const auto& s) { return s.is_slot(); }));
}

std::size_t Pipeline::decoder_slots() const noexcept {
    return static_cast<std::size_t>(std::count_if(decoder_.begin(), decoder_.end(),
                                                  [](const auto& s) { return s.is_slot(); }));
}

Placement Pipeline::full_placement() const {
    Placement p;
    for (std::size_t i = 0; i < encoder_slots(); ++i) p.encoder.push_back(i);
    for (std::size_t i = 0; i < decoder_slots(); ++i) p.decoder.push_back(i);
    if (p.encoder.size() != p.decoder.size()) {
        const std::size_t m = std::min(p.encoder.size(), p.decoder.size());
        p.encoder.resize(m);
        // Keep the decoder slots nearest the output.
        p.decoder.erase(p.decoder.begin(),
                        p.decoder.begin() + static_cast<std::ptrdiff_t>(p.decoder.size() - m));
    }
    return p;
}

void Pipeline::validate(const Placement& placement) const {
    auto check = [](const std::vector<std::size_t>& v, std::size_t n, const char* side) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            require(v[i] < n, ErrorKind::config, std::string(side) + " slot index out of range");
            require(i == 0 || v[i - 1] < v[i], ErrorKind::config,
                    std::string(side) + " slot indices must be ascending and distinct");
        }
    };
    check(placement.encoder, encoder_slots(), "encoder");
    check(placement.decoder, decoder_slots(), "decoder");
    require(placement.encoder.size() == placement.decoder.size(), ErrorKind::config,
            "placement must pair every encoder slot with a decoder slot");
}

std::vector<Shape> Pipeline::encoder_shapes(Shape input) const {
    std::vector<Shape> shapes;
    Shape s = input;
    for (const auto& st : encoder_) {
        shapes.push_back(s);
        if (st.kind == StageKind::spatial_mean_pool) {
            require(s.height % st.factor == 0 && s.width % st.factor == 0, ErrorKind::dimension,
                    "pool:" + std::to_string(st.factor) + " does not divide " +
                        std::to_string(s.width) + "x" + std::to_string(s.height));
            s.height /= st.factor;
            s.width /= st.factor;
        } else if (st.kind == StageKind::fixed_linear) {
            s.channels = st.out_channels;
        }
    }
    shapes.push_back(s);
    return shapes;
}

FeatureVolume Pipeline::run_encoder(FeatureVolume vol, const std::vector<std::size_t>& factors,
                                    DownMethod method) const {
    require(factors.size() == encoder_slots(), ErrorKind::parameter,
            "one factor per encoder slot required");
    std::size_t slot = 0;
    for (const auto& st : encoder_) {
        if (st.is_slot()) {
            vol = downsample_by(vol, factors[slot++], method);
        } else {
            vol = apply_forward(st, std::move(vol));
        }
    }
    return vol;
}

FeatureVolume Pipeline::run_decoder(FeatureVolume vol, Shape output,
                                    const std::vector<std::size_t>& factors,
                                    UpMethod method) const {
    require(factors.size() == decoder_slots(), ErrorKind::parameter,
            "one factor per decoder slot required");
    // Input shapes of the encoder's non-slot stages, consumed back to front.
    const auto shapes = encoder_shapes(output);
    std::vector<Shape> targets;
    for (std::size_t i = 0; i < encoder_.size(); ++i)
        if (!encoder_[i].is_slot()) targets.push_back(shapes[i]);

    std::size_t slot = 0;
    for (const auto& st : decoder_) {
        if (st.is_slot()) {
            vol = upsample_by(vol, factors[slot++], method);
        } else {
            const Shape target = targets.back();
            targets.pop_back();
            vol = apply_inverse(st, std::move(vol), target);
        }
    }
    return vol;
}

// --- slot factors -----------------------------------------------------------

std::vector<std::size_t> distribute_ratio(std::size_t ratio, std::size_t slots) {
    require(ratio >= 1, ErrorKind::parameter, "ratio must be >= 1");
    std::vector<std::size_t> primes;
    for (std::size_t n = ratio, d = 2; n > 1;) {
        if (d * d > n) {
            primes.push_back(n);
            break;
        }
        if (n % d == 0) {
            primes.push_back(d);
            n /= d;
        } else {
            ++d;
        }
    }
    require(primes.empty() || slots > 0, ErrorKind::parameter,
            "temporal ratio " + std::to_string(ratio) + " is unreachable without resampling slots");
    std::sort(primes.rbegin(), primes.rend());
    std::vector<std::size_t> out(slots, 1);
    for (std::size_t i = 0; i < primes.size(); ++i) out[i % slots] *= primes[i];
    return out;
}

std::vector<std::size_t> encoder_factors(const Pipeline& p, const Placement& placement,
                                         std::size_t ratio) {
    p.validate(placement);
    const auto dist = distribute_ratio(ratio, placement.encoder.size());
    std::vector<std::size_t> out(p.encoder_slots(), 1);
    for (std::size_t k = 0; k < dist.size(); ++k) out[placement.encoder[k]] = dist[k];
    return out;
}

std::vector<std::size_t> decoder_factors(const Pipeline& p, const Placement& placement,
                                         std::size_t ratio) {
    p.validate(placement);
    const auto dist = distribute_ratio(ratio, placement.decoder.size());
    std::vector<std::size_t> out(p.decoder_slots(), 1);
    const std::size_t m = dist.size();
    for (std::size_t k = 0; k < m; ++k) out[placement.decoder[m - 1 - k]] = dist[k];
    return out;
}

std::vector<double> projection_matrix(std::uint64_t seed, std::size_t rows, std::size_t cols) {
    std::mt19937_64 rng(seed);
    std::vector<double> m(rows * cols);
    // 53 random bits mapped to [-1, 1).
    for (double& v : m) v = 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
    return m;
}

}  // namespace dlfr
