#include <doctest.h>

#include "beamlu/blocking.hpp"
#include "oracles.hpp"

using namespace beamlu;

TEST_CASE("blocking validation") {
    CHECK_THROWS_AS(BlockingScheme({2, 5}, 4), std::invalid_argument);   // first must be 1
    CHECK_THROWS_AS(BlockingScheme({1, 4}, 4), std::invalid_argument);   // last must be n+1
    CHECK_THROWS_AS(BlockingScheme({1, 3, 3, 5}, 4), std::invalid_argument);
    CHECK_THROWS_AS(BlockingScheme({1}, 0), std::invalid_argument);
    const BlockingScheme b({1, 3, 5}, 4);
    CHECK(b.num_blocks() == 2);
    CHECK(b.block_size(0) == 2);
    CHECK(b.offset(1) == 2);
}

TEST_CASE("uniform blocking covers ragged tails") {
    const BlockingScheme b = BlockingScheme::uniform(7, 3);
    CHECK(b.num_blocks() == 3);
    CHECK(b.block_size(2) == 1);
    CHECK(b.max_block_size() == 3);
    CHECK(b.min_block_size() == 1);
}

TEST_CASE("coarsens detects nested blockings") {
    const BlockingScheme fine = BlockingScheme::scalar(6);
    const BlockingScheme coarse({1, 4, 7}, 6);
    CHECK(coarse.coarsens(fine));
    CHECK_FALSE(fine.coarsens(coarse));
    CHECK(coarse.coarsens(coarse));
}

TEST_CASE("tail re-bases the trailing blocks") {
    const BlockingScheme b({1, 3, 5, 9}, 8);
    const BlockingScheme t = b.tail(1);
    CHECK(t.dim() == 6);
    CHECK(t.starts() == std::vector<std::size_t>{1, 3, 7});
}

TEST_CASE("block_view examples") {
    Matrix a(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) a(i, j) = 10.0 * (i + 1) + (j + 1);

    SUBCASE("2x2 blocking, first block") {
        const Matrix blk = block_view(a, BlockingScheme({1, 3, 5}, 4), 0, 0);
        CHECK(blk == submatrix(a, 0, 2, 0, 2));
    }
    SUBCASE("single block is the whole matrix") {
        CHECK(block_view(a, BlockingScheme::single(4), 0, 0) == a);
    }
    SUBCASE("scalar blocks pick single entries") {
        const Matrix blk = block_view(a, BlockingScheme::scalar(4), 1, 2);
        CHECK(blk.rows() == 1);
        CHECK(blk(0, 0) == a(1, 2));
    }
    SUBCASE("out of range throws") {
        CHECK_THROWS_AS(block_view(a, BlockingScheme({1, 3, 5}, 4), 2, 0),
                        std::invalid_argument);
    }
}
