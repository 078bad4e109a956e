#include "dlfr/clip_io.hpp"

#include "dlfr/error.hpp"

#include <png.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace dlfr {
namespace fs = std::filesystem;

namespace {

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::uint8_t to_byte(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::nearbyint(v), 0.0, 255.0));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// --- PNM ---------------------------------------------------------------------

struct PnmReader {
    std::istream& in;
    const fs::path& path;

    std::string token() {
        std::string tok;
        int c = in.get();
        while (c != EOF) {
            if (c == '#') {
                while (c != EOF && c != '\n') c = in.get();
            } else if (!std::isspace(c)) {
                break;
            }
            c = in.get();
        }
        while (c != EOF && !std::isspace(c) && c != '#') {
            tok.push_back(static_cast<char>(c));
            c = in.get();
        }
        if (tok.empty()) fail(ErrorKind::format, "truncated PNM header in " + path.string());
        return tok;
    }

    unsigned long number() {
        const std::string tok = token();
        unsigned long v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || p != tok.data() + tok.size())
            fail(ErrorKind::format, "bad PNM header field '" + tok + "' in " + path.string());
        return v;
    }
};

Frame read_pnm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open " + path.string());
    PnmReader rd{in, path};
    const std::string magic = rd.token();
    const bool ascii = magic == "P2" || magic == "P3";
    const bool color = magic == "P3" || magic == "P6";
    if (magic != "P2" && magic != "P3" && magic != "P5" && magic != "P6")
        fail(ErrorKind::format, "unsupported PNM type '" + magic + "' in " + path.string());
    const auto width = rd.number();
    const auto height = rd.number();
    const auto maxval = rd.number();
    if (width == 0 || height == 0 || maxval == 0 || maxval > 65535)
        fail(ErrorKind::format, "bad PNM dimensions in " + path.string());
    // Binary data starts right after the single whitespace following maxval,
    // which token() has already consumed.

    const std::size_t channels = color ? 3 : 1;
    const std::size_t count = width * height * channels;
    std::vector<double> samples(count);
    if (ascii) {
        for (auto& s : samples) s = static_cast<double>(rd.number());
    } else {
        const std::size_t bytes_per = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> raw(count * bytes_per);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (in.gcount() != static_cast<std::streamsize>(raw.size()))
            fail(ErrorKind::format, "truncated PNM data in " + path.string());
        for (std::size_t i = 0; i < count; ++i) {
            samples[i] = bytes_per == 1 ? raw[i] : (raw[2 * i] << 8 | raw[2 * i + 1]);
        }
    }
    const double scale = 255.0 / static_cast<double>(maxval);
    std::vector<double> luma(width * height);
    for (std::size_t i = 0; i < luma.size(); ++i) {
        if (color) {
            luma[i] = rgb_to_luma(samples[3 * i] * scale, samples[3 * i + 1] * scale,
                                  samples[3 * i + 2] * scale);
        } else {
            luma[i] = maxval == 255 ? samples[i] : std::nearbyint(samples[i] * scale);
        }
        if (luma[i] < 0.0 || luma[i] > 255.0)
            fail(ErrorKind::format, "PNM sample exceeds maxval in " + path.string());
    }
    return Frame(width, height, std::move(luma));
}

void write_pgm(const fs::path& path, const Frame& frame) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::io, "cannot create " + path.string());
    out << "P5\n" << frame.width() << ' ' << frame.height() << "\n255\n";
    std::vector<char> bytes(frame.size());
    std::transform(frame.luma().begin(), frame.luma().end(), bytes.begin(),
                   [](double v) { return static_cast<char>(to_byte(v)); });
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::io, "write failed for " + path.string());
}

// --- PNG ---------------------------------------------------------------------

Frame read_png(const fs::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
        fail(ErrorKind::format, "cannot decode PNG " + path.string() + ": " + image.message);
    }
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        fail(ErrorKind::format, "cannot decode PNG " + path.string() + ": " + msg);
    }
    std::vector<double> luma(static_cast<std::size_t>(image.width) * image.height);
    for (std::size_t i = 0; i < luma.size(); ++i) {
        luma[i] = color ? rgb_to_luma(buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2])
                        : static_cast<double>(buffer[i]);
    }
    return Frame(image.width, image.height, std::move(luma));
}

Frame read_image(const fs::path& path) {
    const std::string ext = lower(path.extension().string());
    if (ext == ".png") return read_png(path);
    return read_pnm(path);
}

bool is_frame_file(const fs::path& p) {
    const std::string ext = lower(p.extension().string());
    return ext == ".png" || ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

double parse_fps(std::string_view text, const std::string& where) {
    double fps = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first != last && std::isspace(static_cast<unsigned char>(*first))) ++first;
    while (last != first && std::isspace(static_cast<unsigned char>(last[-1]))) --last;
    auto [p, ec] = std::from_chars(first, last, fps);
    if (ec != std::errc{} || p != last || !(fps > 0.0) || !std::isfinite(fps))
        fail(ErrorKind::format, "bad fps value in " + where);
    return fps;
}

Clip load_image_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) fail(ErrorKind::io, "not a directory: " + dir.string());
    const fs::path sidecar = dir / std::string(kFpsSidecar);
    std::ifstream fin(sidecar);
    if (!fin) fail(ErrorKind::io, "missing fps sidecar " + sidecar.string());
    std::string line;
    std::getline(fin, line);
    const double fps = parse_fps(line, sidecar.string());

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_frame_file(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
        return a.filename().string() < b.filename().string();
    });
    if (files.empty()) fail(ErrorKind::format, "no frame images in " + dir.string());

    std::vector<Frame> frames;
    frames.reserve(files.size());
    for (const auto& f : files) {
        frames.push_back(read_image(f));
        if (!frames.back().same_shape(frames.front()))
            fail(ErrorKind::dimension, "frame size differs in " + f.string());
    }
    return Clip(fps, std::move(frames));
}

void save_image_dir(const fs::path& dir, const Clip& clip) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorKind::io, "cannot create directory " + dir.string());
    {
        std::ofstream out(dir / std::string(kFpsSidecar));
        if (!out) fail(ErrorKind::io, "cannot write fps sidecar in " + dir.string());
        out << format_number(clip.fps()) << '\n';
    }
    const std::size_t digits = std::max<std::size_t>(6, std::to_string(clip.size()).size());
    for (std::size_t i = 0; i < clip.size(); ++i) {
        std::string name = std::to_string(i);
        name.insert(0, digits - name.size(), '0');
        write_pgm(dir / ("frame_" + name + ".pgm"), clip[i]);
    }
}

}  // namespace

ClipFormat parse_clip_format(std::string_view name) {
    if (name == "raw") return ClipFormat::raw;
    if (name == "image_dir" || name == "dir") return ClipFormat::image_dir;
    fail(ErrorKind::parameter, "unknown clip format '" + std::string(name) + "'");
}

ClipFormat guess_clip_format(const fs::path& path) {
    return fs::is_directory(path) ? ClipFormat::image_dir : ClipFormat::raw;
}

Clip read_raw_clip(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) fail(ErrorKind::format, "missing raw clip header");
    std::istringstream hs(header);
    std::string magic, fps_text;
    long long width = 0, height = 0, n_frames = -1;
    hs >> magic >> width >> height >> n_frames >> fps_text;
    std::string extra;
    if (!hs || magic != kRawMagic || (hs >> extra))
        fail(ErrorKind::format, "malformed raw clip header: '" + header + "'");
    if (width < 1 || height < 1 || n_frames < 0)
        fail(ErrorKind::format, "bad dimensions in raw clip header: '" + header + "'");
    const double fps = parse_fps(fps_text, "raw clip header");

    const auto w = static_cast<std::size_t>(width);
    const auto h = static_cast<std::size_t>(height);
    std::vector<Frame> frames;
    frames.reserve(static_cast<std::size_t>(n_frames));
    std::vector<unsigned char> plane(w * h);
    for (long long i = 0; i < n_frames; ++i) {
        in.read(reinterpret_cast<char*>(plane.data()), static_cast<std::streamsize>(plane.size()));
        if (in.gcount() != static_cast<std::streamsize>(plane.size()))
            fail(ErrorKind::format, "raw clip truncated at frame " + std::to_string(i));
        frames.emplace_back(w, h, std::vector<double>(plane.begin(), plane.end()));
    }
    if (in.peek() != std::char_traits<char>::eof())
        fail(ErrorKind::format, "raw clip has trailing bytes beyond declared frames");
    return Clip(fps, std::move(frames));
}

void write_raw_clip(std::ostream& out, const Clip& clip) {
    out << kRawMagic << ' ' << clip.width() << ' ' << clip.height() << ' ' << clip.size()
        << ' ' << format_number(clip.fps()) << '\n';
    std::vector<char> bytes;
    for (const Frame& f : clip.frames()) {
        bytes.resize(f.size());
        std::transform(f.luma().begin(), f.luma().end(), bytes.begin(),
                       [](double v) { return static_cast<char>(to_byte(v)); });
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
}

Clip load_clip(const fs::path& path, ClipFormat format) {
    if (format == ClipFormat::image_dir) return load_image_dir(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open " + path.string());
    return read_raw_clip(in);
}

Clip load_clip(const fs::path& path) { return load_clip(path, guess_clip_format(path)); }

void save_clip(const fs::path& path, const Clip& clip, ClipFormat format) {
    if (format == ClipFormat::image_dir) {
        save_image_dir(path, clip);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::io, "cannot create " + path.string());
    write_raw_clip(out, clip);
    if (!out) fail(ErrorKind::io, "write failed for " + path.string());
}

}  // namespace dlfr
