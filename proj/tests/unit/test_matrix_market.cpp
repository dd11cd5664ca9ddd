#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "beamlu/gallery.hpp"
#include "beamlu/matrix_market.hpp"
#include "oracles.hpp"

using namespace beamlu;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/beamlu_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

} // namespace

TEST_CASE("identity round-trips exactly") {
    TempFile f("id.mtx");
    write_matrix_market(f.path, Matrix::identity(3));
    CHECK(read_matrix_market(f.path) == Matrix::identity(3));
}

TEST_CASE("coordinate format places entries") {
    TempFile f("coord.mtx");
    write_text(f.path,
               "%%MatrixMarket matrix coordinate real general\n"
               "% a comment\n"
               "2 2 2\n"
               "1 2 5.0\n"
               "2 1 -5.0\n");
    CHECK(read_matrix_market(f.path) == Matrix::from_rows({{0, 5}, {-5, 0}}));
}

TEST_CASE("symmetric coordinate storage expands") {
    TempFile f("sym.mtx");
    write_text(f.path,
               "%%MatrixMarket matrix coordinate real symmetric\n"
               "2 2 2\n"
               "1 1 3.0\n"
               "2 1 7.0\n");
    CHECK(read_matrix_market(f.path) == Matrix::from_rows({{3, 7}, {7, 0}}));
}

TEST_CASE("symmetric array storage expands") {
    TempFile f("syma.mtx");
    write_text(f.path,
               "%%MatrixMarket matrix array real symmetric\n"
               "2 2\n"
               "1.0\n2.0\n4.0\n");
    CHECK(read_matrix_market(f.path) == Matrix::from_rows({{1, 2}, {2, 4}}));
}

TEST_CASE("random and Zielke matrices round-trip bitwise") {
    TempFile f("rt.mtx");
    const Matrix a = oracles::random_matrix(7, 5, 101);
    write_matrix_market(f.path, a);
    CHECK(read_matrix_market(f.path) == a);

    const Matrix z = generate(MatrixSpec::zielke(6));
    write_matrix_market(f.path, z);
    CHECK(read_matrix_market(f.path) == z);
}

TEST_CASE("parse errors carry line numbers") {
    TempFile f("bad.mtx");
    SUBCASE("malformed header") {
        write_text(f.path, "%%NotMatrixMarket nope\n1 1\n0\n");
        try {
            read_matrix_market(f.path);
            FAIL("expected mm_parse_error");
        } catch (const mm_parse_error& e) {
            CHECK(e.line() == 1);
        }
    }
    SUBCASE("inconsistent entry count") {
        write_text(f.path,
                   "%%MatrixMarket matrix coordinate real general\n"
                   "2 2 3\n"
                   "1 1 1.0\n");
        try {
            read_matrix_market(f.path);
            FAIL("expected mm_parse_error");
        } catch (const mm_parse_error& e) {
            CHECK(e.line() >= 3);
        }
    }
    SUBCASE("bad array entry") {
        write_text(f.path,
                   "%%MatrixMarket matrix array real general\n"
                   "2 1\n"
                   "1.0\nbogus\n");
        CHECK_THROWS_AS(read_matrix_market(f.path), mm_parse_error);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(read_matrix_market("/tmp/beamlu_no_such_file.mtx"),
                        std::runtime_error);
    }
    SUBCASE("unwritable path") {
        CHECK_THROWS_AS(write_matrix_market("/nonexistent_dir/x.mtx", Matrix::identity(2)),
                        std::runtime_error);
    }
}
