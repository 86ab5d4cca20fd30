#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "faa/grid_io.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("faa_io_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

} // namespace

TEST_CASE("csv parse") {
    TempDir tmp;

    SUBCASE("2x2") {
        write_text(tmp.file("a.csv"), "1,2\n3,4\n");
        const faa::Grid g = faa::grid_from_csv(tmp.file("a.csv"));
        CHECK(g.height == 2);
        CHECK(g.width == 2);
        CHECK(g.at(0, 0) == 1.0);
        CHECK(g.at(0, 1) == 2.0);
        CHECK(g.at(1, 0) == 3.0);
        CHECK(g.at(1, 1) == 4.0);
    }

    SUBCASE("1x1, no trailing newline") {
        write_text(tmp.file("b.csv"), "0");
        const faa::Grid g = faa::grid_from_csv(tmp.file("b.csv"));
        CHECK(g.height == 1);
        CHECK(g.width == 1);
        CHECK(g.at(0, 0) == 0.0);
    }

    SUBCASE("ragged rows rejected with position") {
        write_text(tmp.file("c.csv"), "1,2\n3\n");
        CHECK_THROWS_WITH_AS(faa::grid_from_csv(tmp.file("c.csv")),
                             doctest::Contains("ragged row 2"), faa::IoError);
    }

    SUBCASE("non-numeric cell rejected with position") {
        write_text(tmp.file("d.csv"), "1,2\n3,oops\n");
        CHECK_THROWS_WITH_AS(faa::grid_from_csv(tmp.file("d.csv")),
                             doctest::Contains("row 2, column 2"), faa::IoError);
    }

    SUBCASE("non-finite rejected") {
        write_text(tmp.file("e.csv"), "1,inf\n");
        CHECK_THROWS_AS(faa::grid_from_csv(tmp.file("e.csv")), faa::IoError);
    }

    SUBCASE("missing file") {
        CHECK_THROWS_AS(faa::grid_from_csv(tmp.file("missing.csv")), faa::IoError);
    }
}

TEST_CASE("csv round trip is bit exact") {
    TempDir tmp;

    SUBCASE("random 16x16") {
        const faa::Grid g = oracle::random_grid(16, 16, 99, -1e3, 1e3);
        faa::grid_to_csv(g, tmp.file("rt.csv"));
        const faa::Grid back = faa::grid_from_csv(tmp.file("rt.csv"));
        REQUIRE(back.height == g.height);
        REQUIRE(back.width == g.width);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(back.data[i] == g.data[i]);
    }

    SUBCASE("extreme values") {
        faa::Grid g(1, 3);
        g.data = {1e-300, 1.5, -2.25};
        faa::grid_to_csv(g, tmp.file("x.csv"));
        const faa::Grid back = faa::grid_from_csv(tmp.file("x.csv"));
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(back.data[i] == g.data[i]);
    }
}

TEST_CASE("pgm parse") {
    TempDir tmp;

    SUBCASE("P2") {
        write_text(tmp.file("a.pgm"), "P2\n2 2\n255\n0 255 255 0\n");
        const faa::Grid g = faa::grid_from_pgm(tmp.file("a.pgm"));
        CHECK(g.height == 2);
        CHECK(g.width == 2);
        CHECK(g.at(0, 0) == 0.0);
        CHECK(g.at(0, 1) == 255.0);
        CHECK(g.at(1, 0) == 255.0);
        CHECK(g.at(1, 1) == 0.0);
    }

    SUBCASE("P5 equals the P2 grid") {
        std::string payload = "P5\n2 2\n255\n";
        payload += '\x00';
        payload += '\xff';
        payload += '\xff';
        payload += '\x00';
        write_text(tmp.file("b.pgm"), payload);
        faa::PgmVariant variant;
        const faa::Grid g = faa::grid_from_pgm(tmp.file("b.pgm"), variant);
        CHECK(variant == faa::PgmVariant::binary);
        CHECK(g.at(0, 0) == 0.0);
        CHECK(g.at(0, 1) == 255.0);
        CHECK(g.at(1, 0) == 255.0);
        CHECK(g.at(1, 1) == 0.0);
    }

    SUBCASE("comments allowed in header") {
        write_text(tmp.file("c.pgm"), "P2\n# a comment\n2 1\n255\n7 9\n");
        const faa::Grid g = faa::grid_from_pgm(tmp.file("c.pgm"));
        CHECK(g.at(0, 0) == 7.0);
        CHECK(g.at(0, 1) == 9.0);
    }

    SUBCASE("truncated P2 payload") {
        write_text(tmp.file("d.pgm"), "P2\n2 2\n255\n0 255 255\n");
        CHECK_THROWS_WITH_AS(faa::grid_from_pgm(tmp.file("d.pgm")),
                             doctest::Contains("truncated payload"), faa::IoError);
    }

    SUBCASE("truncated P5 payload") {
        write_text(tmp.file("e.pgm"), std::string("P5\n2 2\n255\nab"));
        CHECK_THROWS_WITH_AS(faa::grid_from_pgm(tmp.file("e.pgm")),
                             doctest::Contains("truncated payload"), faa::IoError);
    }

    SUBCASE("bad magic") {
        write_text(tmp.file("f.pgm"), "P6\n1 1\n255\nx");
        CHECK_THROWS_AS(faa::grid_from_pgm(tmp.file("f.pgm")), faa::IoError);
    }

    SUBCASE("P5 maxval over 255 rejected") {
        write_text(tmp.file("g.pgm"), "P5\n1 1\n65535\nxx");
        CHECK_THROWS_AS(faa::grid_from_pgm(tmp.file("g.pgm")), faa::IoError);
    }

    SUBCASE("absurd header dimensions rejected as I/O errors") {
        write_text(tmp.file("h.pgm"), "P2\n99999999999999999999 2\n255\n0 0 0 0\n");
        CHECK_THROWS_AS(faa::grid_from_pgm(tmp.file("h.pgm")), faa::IoError);
    }
}

TEST_CASE("pgm write") {
    TempDir tmp;

    SUBCASE("constant grid normalizes to zero") {
        faa::Grid g(2, 3, 5.0);
        faa::grid_to_pgm(g, tmp.file("z.pgm"), true);
        const faa::Grid back = faa::grid_from_pgm(tmp.file("z.pgm"));
        for (double v : back.data) CHECK(v == 0.0);
    }

    SUBCASE("exact payload without normalization") {
        faa::Grid g(2, 2);
        g.data = {0.0, 255.0, 255.0, 0.0};
        faa::grid_to_pgm(g, tmp.file("p.pgm"), false);
        std::ifstream in(tmp.file("p.pgm"), std::ios::binary);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        CHECK(text == "P2\n2 2\n255\n0 255\n255 0\n");
    }

    SUBCASE("integer round trip, both variants") {
        faa::Grid g(3, 4);
        oracle::Rng rng(5);
        for (double& v : g.data) v = std::floor(rng.uniform(0.0, 256.0));
        for (faa::PgmVariant variant : {faa::PgmVariant::ascii, faa::PgmVariant::binary}) {
            faa::grid_to_pgm(g, tmp.file("rt.pgm"), false, variant);
            const faa::Grid back = faa::grid_from_pgm(tmp.file("rt.pgm"));
            for (std::size_t i = 0; i < g.size(); ++i) CHECK(back.data[i] == g.data[i]);
        }
    }

    SUBCASE("normalize maps [min,max] onto [0,255]") {
        faa::Grid g(1, 3);
        g.data = {-2.0, 0.0, 2.0};
        faa::grid_to_pgm(g, tmp.file("n.pgm"), true);
        const faa::Grid back = faa::grid_from_pgm(tmp.file("n.pgm"));
        CHECK(back.data[0] == 0.0);
        CHECK(back.data[1] == 128.0); // llround(127.5) rounds half away from zero
        CHECK(back.data[2] == 255.0);
    }
}
