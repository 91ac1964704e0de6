#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rsde/config.hpp"
#include "rsde/csv.hpp"
#include "rsde/rng.hpp"

using namespace rsde;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = (std::filesystem::temp_directory_path() / name).string();
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("config parser: sections, scalars, arrays, comments") {
    const std::string text = R"(
# comment
[domain]
kind = "interval"    # trailing comment
a = -0.5
b = 1.5

[study]
n_paths = 2000
q = 0.1666
flags = [1.0, 2, 3.5]
names = ["a", "b"]
enabled = true
)";
    const ConfigFile cfg = ConfigFile::parse_string(text);
    CHECK(cfg.get_string("domain", "kind") == "interval");
    CHECK(cfg.get_double("domain", "a") == -0.5);
    CHECK(cfg.get_int("study", "n_paths") == 2000);
    CHECK(cfg.get_double("study", "n_paths") == 2000.0); // int promotes to double
    CHECK(cfg.get_bool("study", "enabled"));
    CHECK(cfg.get_double_array("study", "flags") == std::vector<double>{1.0, 2.0, 3.5});
    CHECK(cfg.get_string_or("study", "name", "dflt") == "dflt");
    CHECK_THROWS_AS(cfg.get_string("domain", "missing"), ConfigError);
    CHECK_THROWS_AS(cfg.get_int("domain", "kind"), ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_string("key = 1\n"), ConfigError);  // outside section
    CHECK_THROWS_AS(ConfigFile::parse_string("[s]\nbad line\n"), ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_file("/nonexistent/x.toml"), IoError);
}

TEST_CASE("config hash is stable and canonicalization sorts keys") {
    const std::string a = "[s]\nx = 1\ny = 2.5\n";
    const std::string b = "[s]\ny = 2.5\nx = 1\n";
    CHECK(config_hash(ConfigFile::parse_string(a)) == config_hash(ConfigFile::parse_string(b)));
    const std::string c = "[s]\nx = 2\ny = 2.5\n";
    CHECK(config_hash(ConfigFile::parse_string(a)) != config_hash(ConfigFile::parse_string(c)));
}

TEST_CASE("builders resolve registered names eagerly") {
    const ConfigFile bad = ConfigFile::parse_string("[driver]\nkind = \"nope\"\ndelta = 0.1\n");
    CHECK_THROWS_AS(build_driver(bad), ConfigError);
    const ConfigFile badf =
        ConfigFile::parse_string("[driver]\nkind = \"piecewise_linear\"\nf = \"nope\"\ndelta = 0.1\n");
    CHECK_THROWS_AS(build_driver(badf), ConfigError);
    const ConfigFile badp = ConfigFile::parse_string("[coefficients]\npreset = \"nope\"\n");
    CHECK_THROWS_AS(build_coefficients(badp), ConfigError);
    const ConfigFile ok = ConfigFile::parse_string(
        "[driver]\nkind = \"mcshane\"\nf1 = \"linear\"\nf2 = \"quadratic\"\ndelta = 0.125\n");
    const ApproxDriver drv = build_driver(ok);
    CHECK(drv.kind_name() == "mcshane");
    CHECK(drv.required_r() == 2);
}

TEST_CASE("path CSV round-trips node values bit-exactly") {
    TimeGrid g(1.0, 64);
    SampledPath p(g, 2);
    NormalSampler gauss(31);
    for (std::int64_t j = 0; j <= 64; ++j) {
        p.node(j)[0] = gauss.next() * 1e-3;
        p.node(j)[1] = gauss.next() * 1e6;
    }
    TempFile f("rsde_roundtrip.csv");
    write_path_csv(f.path, p);
    const SampledPath q = read_path_csv(f.path);
    REQUIRE(q.dim() == 2);
    REQUIRE(q.n_nodes() == p.n_nodes());
    CHECK(q.raw() == p.raw()); // 17 significant digits round-trip doubles exactly
    // and the rewrite is byte-identical
    TempFile f2("rsde_roundtrip2.csv");
    write_path_csv(f2.path, q);
    std::ifstream a(f.path, std::ios::binary), b(f2.path, std::ios::binary);
    const std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
}

TEST_CASE("malformed CSV inputs raise IoError") {
    TempFile f("rsde_bad.csv");
    {
        std::ofstream os(f.path);
        os << "";
    }
    CHECK_THROWS_AS(read_path_csv(f.path), IoError); // empty
    {
        std::ofstream os(f.path);
        os << "t,v1\n0,0\n0.5,abc\n1,0\n";
    }
    CHECK_THROWS_AS(read_path_csv(f.path), IoError); // bad number
    {
        std::ofstream os(f.path);
        os << "t,v1\n0,0\n0.5\n";
    }
    CHECK_THROWS_AS(read_path_csv(f.path), IoError); // ragged row
    {
        std::ofstream os(f.path);
        os << "x,y\n0,0\n1,1\n";
    }
    CHECK_THROWS_AS(read_path_csv(f.path), IoError); // wrong header
}

TEST_CASE("format_double: 17 significant digits round-trip") {
    NormalSampler gauss(8);
    for (int i = 0; i < 1000; ++i) {
        const double v = gauss.next() * std::pow(10.0, (i % 13) - 6);
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}
