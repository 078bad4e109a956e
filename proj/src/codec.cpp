#include "dlfr/codec.hpp"

#include "dlfr/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>

namespace dlfr {
namespace {

std::size_t to_size(const std::string& text, const std::string& key) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || p != text.data() + text.size())
        fail(ErrorKind::format, "bad value '" + text + "' for " + key + " in stream descriptor");
    return v;
}

std::size_t ratio_for_rate(const LatentStream& stream, float rate) {
    for (const auto& c : stream.classes) {
        const double class_rate = 2.0 * static_cast<double>(c.eff_freq);
        if (std::abs(class_rate - static_cast<double>(rate)) <= 1e-6 * class_rate) return c.ratio;
    }
    fail(ErrorKind::format, "segment latent rate " + std::to_string(rate) +
                                " Hz is not in the stream's class table");
}

void combinations(std::size_t n, std::size_t k, std::vector<std::size_t>& cur, std::size_t start,
                  std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        combinations(n, k, cur, i + 1, out);
        cur.pop_back();
    }
}

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    combinations(n, k, cur, 0, out);
    return out;
}

std::size_t prime_factor_count(std::size_t n) {
    std::size_t count = 0;
    for (std::size_t d = 2; n > 1;) {
        if (d * d > n) return count + 1;
        if (n % d == 0) {
            n /= d;
            ++count;
        } else {
            ++d;
        }
    }
    return count;
}

Clip decode_with(const LatentStream& stream, const StreamDescriptor& desc,
                 const Pipeline& pipeline) {
    require(stream.segment_len >= 1, ErrorKind::format, "stream segment length is zero");
    require(stream.source_fps > 0.0f, ErrorKind::format, "stream source fps must be positive");
    pipeline.validate(desc.placement);

    const std::size_t n = stream.segment_len;
    const std::size_t expected_segments = (desc.total_frames + n - 1) / n;
    require(stream.segments.size() == expected_segments, ErrorKind::format,
            "stream holds " + std::to_string(stream.segments.size()) + " segments, header implies " +
                std::to_string(expected_segments));

    const Shape frame_shape{1, desc.height, desc.width};
    const Shape latent = pipeline.latent_shape(frame_shape);

    std::vector<Frame> frames;
    frames.reserve(desc.total_frames);
    for (std::size_t i = 0; i < stream.segments.size(); ++i) {
        const LatentSegment& seg = stream.segments[i];
        require(seg.index == i, ErrorKind::format, "segments out of order");
        const std::size_t start = i * n;
        const std::size_t count = std::min(n, desc.total_frames - start);
        const std::size_t ratio = ratio_for_rate(stream, seg.latent_rate);
        require(seg.steps == (count + ratio - 1) / ratio, ErrorKind::format,
                "segment " + std::to_string(i) + " step count does not match its rate");
        require(seg.channels == latent.channels && seg.height == latent.height &&
                    seg.width == latent.width,
                ErrorKind::format, "segment " + std::to_string(i) + " latent shape mismatch");
        require(seg.data.size() == seg.steps * seg.step_size(), ErrorKind::format,
                "segment " + std::to_string(i) + " payload size mismatch");

        FeatureVolume vol(seg.steps, seg.channels, seg.height, seg.width);
        std::copy(seg.data.begin(), seg.data.end(), vol.data.begin());
        vol = pipeline.run_decoder(std::move(vol), frame_shape,
                                   decoder_factors(pipeline, desc.placement, ratio), desc.up);
        require(vol.steps >= count, ErrorKind::format, "decoder produced too few frames");
        vol.steps = count;
        vol.data.resize(count * vol.step_size());
        auto out = to_frames(vol);
        frames.insert(frames.end(), std::make_move_iterator(out.begin()),
                      std::make_move_iterator(out.end()));
    }
    return Clip(static_cast<double>(stream.source_fps), std::move(frames));
}

}  // namespace

// --- StreamDescriptor --------------------------------------------------------

std::string StreamDescriptor::to_string() const {
    return "pipeline=" + pipeline + ";placement=" + placement.to_string() +
           ";frames=" + std::to_string(total_frames) + ";width=" + std::to_string(width) +
           ";height=" + std::to_string(height) + ";down=" + std::string(dlfr::to_string(down)) +
           ";up=" + std::string(dlfr::to_string(up));
}

StreamDescriptor StreamDescriptor::parse(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto semi = text.find(';', start);
        const auto item = text.substr(start, semi - start);
        const auto eq = item.find('=');
        require(eq != std::string_view::npos, ErrorKind::format,
                "malformed stream descriptor item '" + std::string(item) + "'");
        kv[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
        if (semi == std::string_view::npos) break;
        start = semi + 1;
    }
    auto need = [&](const char* key) -> const std::string& {
        auto it = kv.find(key);
        require(it != kv.end(), ErrorKind::format,
                std::string("stream descriptor lacks '") + key + "'");
        return it->second;
    };
    StreamDescriptor d;
    d.pipeline = need("pipeline");
    try {
        d.placement = Placement::parse(need("placement"));
        d.down = parse_down_method(need("down"));
        d.up = parse_up_method(need("up"));
    } catch (const Error& e) {
        fail(ErrorKind::format, e.what());
    }
    d.total_frames = to_size(need("frames"), "frames");
    d.width = to_size(need("width"), "width");
    d.height = to_size(need("height"), "height");
    return d;
}

// --- encode / decode ---------------------------------------------------------

LatentStream encode(const Clip& clip, const RateSchedule& sched, const Pipeline& pipeline,
                    const CodecOptions& options) {
    require(!clip.empty(), ErrorKind::parameter, "cannot encode an empty clip");
    require(sched.total_frames == clip.size(), ErrorKind::parameter,
            "schedule does not cover the clip");
    require(std::abs(sched.source_fps - clip.fps()) <= 1e-9 * clip.fps(), ErrorKind::parameter,
            "schedule frame rate differs from the clip");
    require(sched.segment_len >= 1, ErrorKind::parameter, "schedule has no segment length");

    const Placement placement = options.placement.value_or(pipeline.full_placement());
    pipeline.validate(placement);
    const Shape frame_shape{1, clip.height(), clip.width()};
    const Shape latent = pipeline.latent_shape(frame_shape);

    StreamDescriptor desc;
    desc.pipeline = pipeline.descriptor();
    desc.placement = placement;
    desc.total_frames = clip.size();
    desc.width = clip.width();
    desc.height = clip.height();
    desc.down = options.down;
    desc.up = options.up;

    LatentStream stream;
    stream.source_fps = static_cast<float>(clip.fps());
    stream.segment_len = static_cast<std::uint32_t>(sched.segment_len);
    stream.descriptor = desc.to_string();
    for (const auto& c : sched.classes)
        stream.classes.push_back({static_cast<float>(c.eff_freq),
                                  static_cast<std::uint32_t>(c.down_ratio)});

    std::size_t covered = 0;
    for (const auto& e : sched.entries) {
        require(e.start_frame == covered && e.frames >= 1, ErrorKind::parameter,
                "schedule entries must tile the clip");
        covered += e.frames;
        require(covered <= clip.size(), ErrorKind::parameter, "schedule runs past the clip");

        const std::span<const Frame> window(clip.frames().data() + e.start_frame, e.frames);
        FeatureVolume vol = pipeline.run_encoder(to_features(window),
                                                 encoder_factors(pipeline, placement, e.down_ratio),
                                                 options.down);
        LatentSegment seg;
        seg.index = e.segment;
        seg.latent_rate = static_cast<float>(e.latent_rate);
        seg.steps = vol.steps;
        seg.channels = latent.channels;
        seg.height = latent.height;
        seg.width = latent.width;
        seg.data.assign(vol.data.begin(), vol.data.end());
        for (float v : seg.data)
            require(std::isfinite(v), ErrorKind::parameter, "encoder produced a non-finite latent");
        stream.segments.push_back(std::move(seg));
    }
    require(covered == clip.size(), ErrorKind::parameter, "schedule does not cover the clip");
    return stream;
}

Clip decode(const LatentStream& stream) {
    const auto desc = StreamDescriptor::parse(stream.descriptor);
    Pipeline pipeline;
    try {
        pipeline = Pipeline::parse(desc.pipeline);
    } catch (const Error& e) {
        fail(ErrorKind::format, std::string("stream pipeline: ") + e.what());
    }
    return decode_with(stream, desc, pipeline);
}

Clip decode(const LatentStream& stream, const Pipeline& pipeline) {
    const auto desc = StreamDescriptor::parse(stream.descriptor);
    require(desc.pipeline == pipeline.descriptor(), ErrorKind::format,
            "stream was encoded with pipeline '" + desc.pipeline + "', not '" +
                pipeline.descriptor() + "'");
    return decode_with(stream, desc, pipeline);
}

Clip roundtrip(const Clip& clip, const RateSchedule& sched, const Pipeline& pipeline,
               const CodecOptions& options) {
    return decode(encode(clip, sched, pipeline, options), pipeline);
}

double stream_compression_ratio(const LatentStream& stream) {
    const auto desc = StreamDescriptor::parse(stream.descriptor);
    std::size_t steps = 0;
    for (const auto& s : stream.segments) steps += s.steps;
    return steps == 0 ? 1.0 : static_cast<double>(desc.total_frames) / static_cast<double>(steps);
}

// --- placement search ----------------------------------------------------------

std::size_t slots_needed(const Pipeline& pipeline, std::size_t ratio) {
    const std::size_t available = std::min(pipeline.encoder_slots(), pipeline.decoder_slots());
    const std::size_t factors = prime_factor_count(ratio);
    require(factors == 0 || available > 0, ErrorKind::parameter,
            "ratio " + std::to_string(ratio) + " needs at least one resampling slot pair");
    return std::min(factors, available);
}

std::vector<Placement> enumerate_placements(const Pipeline& pipeline, std::size_t ratio) {
    const std::size_t m = slots_needed(pipeline, ratio);
    std::vector<Placement> out;
    for (const auto& enc : combinations(pipeline.encoder_slots(), m))
        for (const auto& dec : combinations(pipeline.decoder_slots(), m)) out.push_back({enc, dec});
    return out;
}

PlacementScore evaluate_placement(const Pipeline& pipeline, const Placement& placement,
                                  std::span<const Clip> corpus, double latent_rate,
                                  DownMethod down, UpMethod up) {
    require(!corpus.empty(), ErrorKind::parameter, "placement evaluation needs a corpus");
    PlacementScore score{placement, 0.0, 0.0};
    CodecOptions opts{down, up, placement};
    for (const Clip& clip : corpus) {
        const auto sched = uniform_schedule(clip.size(), clip.fps(),
                                            default_segment_length(clip.fps()), latent_rate);
        const auto q = clip_quality(clip, roundtrip(clip, sched, pipeline, opts));
        score.mean_ssim += q.ssim;
        score.mean_psnr += q.psnr;
    }
    score.mean_ssim /= static_cast<double>(corpus.size());
    score.mean_psnr /= static_cast<double>(corpus.size());
    return score;
}

PlacementSearch search_placement(const Pipeline& pipeline, std::span<const Clip> corpus,
                                 double latent_rate, DownMethod down, UpMethod up) {
    require(!corpus.empty(), ErrorKind::parameter, "placement search needs a corpus");
    for (const Clip& c : corpus)
        require(c.fps() == corpus[0].fps(), ErrorKind::parameter,
                "placement search corpus mixes frame rates");
    PlacementSearch result;
    result.ratio = integral_ratio(corpus[0].fps(), latent_rate);
    const auto placements = enumerate_placements(pipeline, result.ratio);
    require(!placements.empty(), ErrorKind::parameter, "no legal placement for this rate");
    for (const auto& p : placements) {
        result.table.push_back(evaluate_placement(pipeline, p, corpus, latent_rate, down, up));
        if (result.table.back().mean_ssim > result.table[result.best].mean_ssim)
            result.best = result.table.size() - 1;
    }
    return result;
}

}  // namespace dlfr
