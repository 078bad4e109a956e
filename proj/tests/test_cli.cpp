#include "cli.hpp"
#include "dlfr/clip_io.hpp"
#include "dlfr/container.hpp"
#include "dlfr/scheduler.hpp"
#include "report.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dlfr;
using cli::CsvTable;
using cli::read_csv;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "dlfr");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

CsvTable csv(const std::string& text) {
    std::istringstream in(text);
    return read_csv(in, "<report>");
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / ("dlfr_cli_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& f) const { return (path / f).string(); }
};

}  // namespace

TEST_CASE("exit codes") {
    CHECK(cli::exit_code(ErrorKind::parameter) == 2);
    CHECK(cli::exit_code(ErrorKind::config) == 2);
    CHECK(cli::exit_code(ErrorKind::dimension) == 2);
    CHECK(cli::exit_code(ErrorKind::io) == 3);
    for (auto k : {ErrorKind::format, ErrorKind::magic, ErrorKind::version, ErrorKind::truncated,
                   ErrorKind::checksum})
        CHECK(cli::exit_code(k) == 4);

    TempDir tmp("codes");
    CHECK(invoke({}).code != 0);
    CHECK(invoke({"bogus"}).code == 2);
    CHECK(invoke({"analyze", "--nope"}).code == 2);
    CHECK(invoke({"analyze"}).code == 2);
    CHECK(invoke({"analyze", "-i", tmp / "missing.raw"}).code == 3);
    {
        std::ofstream(tmp / "junk.raw") << "not a clip";
    }
    CHECK(invoke({"analyze", "-i", tmp / "junk.raw"}).code == 4);
    {
        std::ofstream(tmp / "junk.dlfr") << "DLFQ....";
    }
    CHECK(invoke({"decode", "-i", tmp / "junk.dlfr", "-o", tmp / "x.raw"}).code == 4);
    CHECK(invoke({"synth", "-o", tmp / "s.raw", "--fps", "16", "--frames", "32"}).code == 0);
    const auto bad = invoke({"analyze", "-i", tmp / "s.raw", "--classes", "3"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("config") != std::string::npos);
    CHECK(invoke({"analyze", "-i", tmp / "s.raw", "--format", "xml"}).code == 2);
    CHECK(invoke({"analyze", "-i", tmp / "s.raw", "--config", tmp / "none.cfg"}).code == 3);
}

TEST_CASE("analyze a static clip") {
    TempDir tmp("analyze");
    REQUIRE(invoke({"synth", "--kind", "checker", "--velocity", "0", "--fps", "16", "--frames", "48",
                 "-o", tmp / "still.raw"})
                .code == 0);
    const auto r = invoke({"analyze", "-i", tmp / "still.raw", "--classes", "1,2,4"});
    REQUIRE(r.code == 0);
    const auto t = csv(r.out);
    REQUIRE(t.rows.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(t.rows[i][t.column("complexity")] == "0");
        CHECK(t.rows[i][t.column("class")] == "1");
        CHECK(t.rows[i][t.column("down_ratio")] == "16");
        CHECK(t.rows[i][t.column("f_eff")] == "");
    }
    CHECK(t.rows[0][t.column("clip")] == "still");
}

TEST_CASE("analyze matches the library schedule and epsilon is monotone") {
    TempDir tmp("analyze2");
    REQUIRE(invoke({"synth", "--kind", "mixed", "--still", "1", "--moving", "2", "--fps", "16",
                 "--frames", "48", "-o", tmp.path.string()})
                .code == 0);
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(tmp.path)) files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    REQUIRE(files.size() == 3);

    for (const auto& f : files) {
        const auto r = csv(invoke({"analyze", "-i", f, "--classes", "1,2,4"}).out);
        const Clip clip = load_clip(f);
        SchedulerSettings s;
        s.class_rates = {1, 2, 4};
        const auto sched = schedule(clip, s.bind(16));
        REQUIRE(r.rows.size() == sched.entries.size());
        for (std::size_t i = 0; i < r.rows.size(); ++i) {
            CHECK(std::stod(r.rows[i][r.column("complexity")]) == sched.entries[i].complexity);
            CHECK(std::stoul(r.rows[i][r.column("down_ratio")]) == sched.entries[i].down_ratio);
        }

        std::vector<double> prev(r.rows.size(), 1e9);
        for (const char* eps : {"0.5", "1.8", "4", "10", "40"}) {
            const auto t = csv(invoke({"analyze", "-i", f, "--epsilon", eps}).out);
            for (std::size_t i = 0; i < t.rows.size(); ++i) {
                const auto& cellv = t.rows[i][t.column("f_eff")];
                const double v = cellv.empty() ? -1.0 : std::stod(cellv);
                CHECK(v <= prev[i]);
                prev[i] = v;
            }
        }
    }
}

TEST_CASE("encode and decode through files") {
    TempDir tmp("codec");
    REQUIRE(invoke({"synth", "--kind", "checker", "--velocity", "2", "--fps", "16", "--frames", "40",
                 "--width", "16", "--height", "16", "-o", tmp / "in.raw"})
                .code == 0);
    const auto e = invoke({"encode", "-i", tmp / "in.raw", "-o", tmp / "in.dlfr", "--rate", "16"});
    REQUIRE(e.code == 0);
    CHECK(csv(e.out).rows.size() == 3);
    const auto d = invoke({"decode", "-i", tmp / "in.dlfr", "-o", tmp / "out.raw"});
    REQUIRE(d.code == 0);
    CHECK(load_clip(tmp / "out.raw") == load_clip(tmp / "in.raw"));

    REQUIRE(invoke({"encode", "-i", tmp / "in.raw", "-o", tmp / "dyn.dlfr", "--pipeline",
                 "slot,pool:2", "--classes", "1,2,4"})
                .code == 0);
    const auto stream = read_stream(tmp / "dyn.dlfr");
    CHECK(stream.segments.size() == 3);
    CHECK(stream.segments[0].width == 8);
    const auto dd = csv(invoke({"decode", "-i", tmp / "dyn.dlfr", "-o", tmp / "dyn.raw"}).out);
    CHECK(dd.rows[0][dd.column("frames")] == "40");
}

TEST_CASE("identity eval is lossless") {
    const auto r = invoke({"eval", "--still", "1", "--moving", "1", "--fps", "16", "--frames", "16",
                        "--width", "16", "--height", "16", "--classes", "16", "--thresholds", ""});
    REQUIRE(r.code == 0);
    const auto t = csv(r.out);
    REQUIRE(t.rows.size() == 3);
    for (const auto& row : t.rows) {
        CHECK(row[t.column("dynamic_ssim")] == "1");
        CHECK(row[t.column("static_ssim")] == "1");
        CHECK(row[t.column("dynamic_cr")] == "1");
        CHECK(row[t.column("static_cr")] == "1");
    }
    CHECK(t.rows.back()[t.column("clip")] == "corpus");
}

TEST_CASE("reports are deterministic and flags override the config file") {
    TempDir tmp("det");
    const std::vector<std::string> args{"sweep", "--velocities", "0,2", "--frames", "24",
                                        "--width", "16", "--height", "16", "--grid",
                                        "0,0.1,0.5"};
    const auto a = invoke(args);
    const auto b = invoke(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(csv(a.out).rows.size() == 3);

    {
        std::ofstream cfg(tmp / "run.cfg");
        cfg << "classes = 2, 6\nthresholds = 0.1\nformat = jsonl\n";
    }
    const auto c = invoke({"analyze", "-i", tmp / "none.raw", "--config", tmp / "run.cfg"});
    CHECK(c.code == 3);
    REQUIRE(invoke({"synth", "-o", tmp / "s.raw", "--kind", "checker", "--fps", "24", "--frames",
                 "48"})
                .code == 0);
    const auto j = invoke({"analyze", "-i", tmp / "s.raw", "--config", tmp / "run.cfg"});
    REQUIRE(j.code == 0);
    CHECK(j.out.rfind("{\"clip\":", 0) == 0);
    CHECK(j.out.find("\"down_ratio\":4") != std::string::npos);
    const auto o = invoke({"analyze", "-i", tmp / "s.raw", "--config", tmp / "run.cfg", "--format",
                        "csv", "--classes", "2,3"});
    REQUIRE(o.code == 0);
    CHECK(csv(o.out).rows[0][csv(o.out).column("down_ratio")] == "8");

    REQUIRE(invoke({"analyze", "-i", tmp / "s.raw", "--report", tmp / "r.csv"}).code == 0);
    std::ifstream in(tmp / "r.csv");
    CHECK(read_csv(in, "r.csv").rows.size() == 2);
}

TEST_CASE("sweep, search, rope and speedup") {
    TempDir tmp("misc");
    const auto one = invoke({"sweep", "--velocities", "0,3", "--frames", "24", "--width", "16",
                          "--height", "16", "--classes", "2,6", "--thresholds", "0.1", "--grid",
                          "0.2"});
    REQUIRE(one.code == 0);
    const auto st = csv(one.out);
    REQUIRE(st.rows.size() == 1);
    CHECK(st.rows[0][st.column("frontier")] == "1");

    const auto sp = invoke({"search-placement", "--pipeline", "slot,id,slot", "--moving", "1", "--rate", "12",
                         "--frames", "24", "--width", "16", "--height", "16"});
    REQUIRE(sp.code == 0);
    const auto spt = csv(sp.out);
    CHECK(spt.rows.size() == 4);
    CHECK(spt.rows[0][spt.column("best")] == "1");

    const auto rp = invoke({"rope", "--durations", "1,1,2,2", "--dim", "4"});
    REQUIRE(rp.code == 0);
    const auto rt = csv(rp.out);
    REQUIRE(rt.rows.size() == 8);
    CHECK(rt.rows[6][rt.column("position")] == "4");
    CHECK(rt.rows[1][rt.column("theta")] == "0.01");
    CHECK(invoke({"rope", "--durations", "1,0"}).code == 2);

    {
        std::ofstream s(tmp / "sched.csv");
        s << "clip,frames,down_ratio\na,16,2\na,16,2\na,16,8\na,16,8\nb,16,4\n";
    }
    const auto su = invoke({"speedup", "--schedule", tmp / "sched.csv", "--spatial-tokens", "10"});
    REQUIRE(su.code == 0);
    const auto sut = csv(su.out);
    REQUIRE(sut.rows.size() == 2);
    CHECK(sut.rows[0][sut.column("tokens_base")] == "640");
    CHECK(sut.rows[0][sut.column("tokens_dlfr")] == "200");
    CHECK(sut.rows[1][sut.column("speedup")] == "16");

    const auto cal = invoke({"speedup", "--schedule", tmp / "sched.csv", "--calibrate",
                          "0.3333333333333333:9"});
    REQUIRE(cal.code == 0);
    CHECK(std::stod(csv(cal.out).rows[0][csv(cal.out).column("alpha")]) ==
          doctest::Approx(1.0).epsilon(1e-9));

    const auto rs = invoke({"rope", "--schedule", tmp / "sched.csv", "--dim", "2"});
    REQUIRE(rs.code == 0);
    CHECK(csv(rs.out).rows.size() == 8 + 8 + 2 + 2 + 4);

    {
        std::ofstream s(tmp / "bad.csv");
        s << "clip,frames,down_ratio\na,16,x\n";
    }
    CHECK(invoke({"speedup", "--schedule", tmp / "bad.csv"}).code == 4);
}
