#include <catch2/catch_amalgamated.hpp>

#include "scatternet/selftest.hpp"

using namespace scatternet;

TEST_CASE("determinant is multiplicative", "[matrix]") {
    testing::Rng rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const Mat2 a{testing::random_complex(rng), testing::random_complex(rng),
                     testing::random_complex(rng), testing::random_complex(rng)};
        const Mat2 b{testing::random_complex(rng), testing::random_complex(rng),
                     testing::random_complex(rng), testing::random_complex(rng)};
        const Complex lhs = (a * b).det();
        const Complex rhs = a.det() * b.det();
        REQUIRE(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("inverse reproduces the identity", "[matrix]") {
    testing::Rng rng(102);
    int tested = 0;
    while (tested < 100) {
        const Mat2 a{testing::random_complex(rng), testing::random_complex(rng),
                     testing::random_complex(rng), testing::random_complex(rng)};
        if (std::abs(a.det()) <= 1e-10) {
            continue;
        }
        ++tested;
        const Mat2 prod = a * a.inverse();
        REQUIRE(prod.distance(Mat2::identity()) < 1e-12 * std::max(1.0, a.norm()));
    }
}

TEST_CASE("singular matrices refuse to invert", "[matrix]") {
    const Mat2 singular{1.0, 2.0, 2.0, 4.0};
    REQUIRE_THROWS_AS(singular.inverse(), Error);
}

TEST_CASE("transfer matrix determinant cache stays consistent", "[matrix]") {
    testing::Rng rng(103);
    TransferMatrix acc;
    for (int i = 0; i < 10; ++i) {
        acc = testing::random_unimodular(rng) * acc;
    }
    // the recomputed expression cancels at the scale of norm^2, which bounds
    // the achievable agreement
    const Complex recomputed = acc.mat().det();
    const double scale = std::max(1.0, acc.norm() * acc.norm());
    REQUIRE(std::abs(acc.det() - recomputed) <= 1e-12 * scale);
}

TEST_CASE("non-finite entries are rejected", "[matrix]") {
    Mat2 bad;
    bad.m12 = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    REQUIRE_THROWS_AS(TransferMatrix::from(bad), Error);
}
