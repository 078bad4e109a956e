#include "dlfr/container.hpp"

#include "dlfr/error.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

namespace dlfr {
namespace {

class Writer {
public:
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        out_.insert(out_.end(), b, b + n);
    }
    void u16(std::uint16_t v) {
        out_.push_back(static_cast<std::uint8_t>(v));
        out_.push_back(static_cast<std::uint8_t>(v >> 8));
    }
    void u32(std::uint32_t v) {
        for (int s = 0; s < 32; s += 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void count(std::size_t v, const char* what) {
        require(v <= std::numeric_limits<std::uint32_t>::max(), ErrorKind::parameter,
                std::string(what) + " does not fit in 32 bits");
        u32(static_cast<std::uint32_t>(v));
    }
    std::size_t size() const noexcept { return out_.size(); }
    const std::uint8_t* at(std::size_t off) const noexcept { return out_.data() + off; }
    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    std::span<const std::uint8_t> take(std::size_t n, const char* what) {
        if (in_.size() - pos_ < n)
            fail(ErrorKind::truncated, std::string("stream truncated while reading ") + what);
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    std::uint16_t u16(const char* what) {
        auto b = take(2, what);
        return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
    }
    std::uint32_t u32(const char* what) {
        auto b = take(4, what);
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    }
    float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
    std::size_t pos() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return in_.size() - pos_; }

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

std::uint32_t crc(const std::uint8_t* p, std::size_t n) {
    uLong c = crc32(0L, Z_NULL, 0);
    while (n > 0) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
        c = crc32(c, p, chunk);
        p += chunk;
        n -= chunk;
    }
    return static_cast<std::uint32_t>(c);
}

LatentStream parse(std::span<const std::uint8_t> bytes, bool verify,
                   std::vector<PayloadSpan>* spans) {
    Reader r(bytes);
    auto magic = r.take(4, "magic");
    if (std::memcmp(magic.data(), kContainerMagic, 4) != 0)
        fail(ErrorKind::magic, "not a DLFR latent stream (bad magic)");
    const auto version = r.u16("version");
    require(version == kContainerVersion, ErrorKind::version,
            "unsupported container version " + std::to_string(version));

    LatentStream s;
    s.source_fps = r.f32("source fps");
    s.segment_len = r.u32("segment length");
    const std::uint32_t n_segments = r.u32("segment count");
    const std::uint32_t desc_len = r.u32("descriptor length");
    auto desc = r.take(desc_len, "descriptor");
    s.descriptor.assign(desc.begin(), desc.end());

    const std::uint32_t n_classes = r.u32("class count");
    if (r.remaining() / 8 < n_classes) fail(ErrorKind::truncated, "stream truncated in class table");
    s.classes.resize(n_classes);
    for (auto& c : s.classes) {
        c.eff_freq = r.f32("class frequency");
        c.ratio = r.u32("class ratio");
    }

    s.segments.reserve(std::min<std::size_t>(n_segments, r.remaining() / 28 + 1));
    for (std::uint32_t i = 0; i < n_segments; ++i) {
        LatentSegment seg;
        seg.index = r.u32("segment index");
        seg.latent_rate = r.f32("segment rate");
        seg.steps = r.u32("segment steps");
        seg.channels = r.u32("segment channels");
        seg.height = r.u32("segment height");
        seg.width = r.u32("segment width");

        std::size_t count = seg.steps;
        for (std::size_t d : {seg.channels, seg.height, seg.width}) {
            if (d != 0 && count > std::numeric_limits<std::size_t>::max() / d / 4)
                fail(ErrorKind::truncated, "segment payload larger than the stream");
            count *= d;
        }
        const std::size_t offset = r.pos();
        auto payload = r.take(count * 4, "segment payload");
        const std::uint32_t stored = r.u32("segment checksum");
        if (verify && crc(payload.data(), payload.size()) != stored)
            fail(ErrorKind::checksum, "checksum mismatch in segment " + std::to_string(i));
        if (spans) spans->push_back({offset, payload.size()});

        seg.data.resize(count);
        for (std::size_t k = 0; k < count; ++k) {
            const auto* b = payload.data() + 4 * k;
            seg.data[k] = std::bit_cast<float>(
                static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
                (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24));
        }
        s.segments.push_back(std::move(seg));
    }
    require(r.remaining() == 0, ErrorKind::format,
            std::to_string(r.remaining()) + " unexpected trailing bytes after the last segment");
    return s;
}

}  // namespace

std::vector<std::uint8_t> serialize(const LatentStream& stream) {
    Writer w;
    w.bytes(kContainerMagic, 4);
    w.u16(kContainerVersion);
    w.f32(stream.source_fps);
    w.u32(stream.segment_len);
    w.count(stream.segments.size(), "segment count");
    w.count(stream.descriptor.size(), "descriptor length");
    w.bytes(stream.descriptor.data(), stream.descriptor.size());
    w.count(stream.classes.size(), "class count");
    for (const auto& c : stream.classes) {
        w.f32(c.eff_freq);
        w.u32(c.ratio);
    }
    for (const auto& seg : stream.segments) {
        require(seg.data.size() == seg.steps * seg.step_size(), ErrorKind::dimension,
                "segment " + std::to_string(seg.index) + " data does not match its shape");
        w.count(seg.index, "segment index");
        w.f32(seg.latent_rate);
        w.count(seg.steps, "segment steps");
        w.count(seg.channels, "segment channels");
        w.count(seg.height, "segment height");
        w.count(seg.width, "segment width");
        const std::size_t start = w.size();
        for (float v : seg.data) w.f32(v);
        w.u32(crc(w.at(start), w.size() - start));
    }
    return w.take();
}

LatentStream deserialize(std::span<const std::uint8_t> bytes) {
    return parse(bytes, true, nullptr);
}

std::vector<PayloadSpan> payload_spans(std::span<const std::uint8_t> bytes) {
    std::vector<PayloadSpan> spans;
    parse(bytes, false, &spans);
    return spans;
}

void write_stream(const std::filesystem::path& path, const LatentStream& stream) {
    const auto bytes = serialize(stream);
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::io, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    require(static_cast<bool>(out), ErrorKind::io, "failed writing " + path.string());
}

LatentStream read_stream(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>()};
    require(!in.bad(), ErrorKind::io, "failed reading " + path.string());
    return deserialize(bytes);
}

}  // namespace dlfr
