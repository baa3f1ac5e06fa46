#include <doctest.h>

#include "ainf/linalg.hpp"
#include "test_support.hpp"

using namespace ainf;
using ainf::testing::random_matrix;
using ainf::testing::random_scalar;

TEST_CASE("fields reject composite characteristics") {
    CHECK_THROWS_AS(Field::prime(4), std::invalid_argument);
    CHECK_THROWS_AS(Field::prime(1), std::invalid_argument);
    CHECK(Field::prime(7).characteristic() == 7);
    CHECK(Field::parse("rational").is_rational());
    CHECK(Field::parse("5") == Field::prime(5));
}

TEST_CASE("scalar representations are canonical") {
    const Field q = Field::rationals();
    CHECK(Scalar(q, 2, 4) == Scalar(q, 1, 2));
    CHECK(Scalar(q, 1, -2) == Scalar(q, -1, 2));
    CHECK(Scalar(q, 3, -6).to_string() == "-1/2");
    const Field f5 = Field::prime(5);
    CHECK(Scalar(f5, -1) == Scalar(f5, 4));
    CHECK(Scalar(f5, 1, 2) == Scalar(f5, 3));
    CHECK(Scalar(f5, 4).to_string() == "-1");
    CHECK(Scalar::parse(q, "-7/4") == Scalar(q, -7, 4));
    CHECK_THROWS(Scalar::parse(q, "x"));
    CHECK_THROWS_AS(Scalar(f5, 0).inverse(), std::domain_error);
}

TEST_CASE("field axioms on random triples") {
    std::mt19937 rng(11);
    for (Field f : {Field::prime(2), Field::prime(3), Field::prime(7), Field::rationals()}) {
        for (int trial = 0; trial < 1000; ++trial) {
            const Scalar a = random_scalar(f, rng), b = random_scalar(f, rng), c = random_scalar(f, rng);
            REQUIRE((a + b) + c == a + (b + c));
            REQUIRE((a * b) * c == a * (b * c));
            REQUIRE(a * (b + c) == a * b + a * c);
            REQUIRE(a + b == b + a);
            REQUIRE(a * b == b * a);
            REQUIRE(a - a == Scalar::zero(f));
            if (!a.is_zero()) REQUIRE(a * a.inverse() == Scalar::one(f));
        }
    }
}

TEST_CASE("rref examples") {
    const Field q = Field::rationals();
    const auto id = SparseMatrix::identity(q, 3);
    const auto r = rref(id);
    CHECK(r.reduced == id);
    CHECK(r.pivots == std::vector<std::size_t>{0, 1, 2});

    const Field f2 = Field::prime(2);
    SparseMatrix ones(f2, 2, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) ones.set(i, j, Scalar::one(f2));
    const auto r2 = rref(ones);
    CHECK(r2.pivots == std::vector<std::size_t>{0});
    CHECK(r2.reduced.at(0, 0).is_one());
    CHECK(r2.reduced.at(0, 1).is_one());
    CHECK(r2.reduced.column(0).size() == 1);
    CHECK(r2.transform * ones == r2.reduced);
}

TEST_CASE("rank agrees with the minor oracle on random 5x5 matrices over F_3") {
    std::mt19937 rng(3);
    const Field f3 = Field::prime(3);
    for (int trial = 0; trial < 40; ++trial) {
        const auto m = random_matrix(f3, 5, 5, rng, trial % 2 ? 0.3 : 0.6);
        const auto r = rref(m);
        CHECK(r.pivots.size() == ainf::testing::minor_rank(m));
        CHECK(r.transform * m == r.reduced);
        CHECK(rank(inverse(SparseMatrix::identity(f3, 5))) == 5);
        CHECK(rank(m) == rank(m.transpose()));
    }
}

TEST_CASE("kernel_basis examples") {
    const Field q = Field::rationals();
    CHECK(kernel_basis(SparseMatrix(q, 2, 3)).size() == 3);
    CHECK(kernel_basis(SparseMatrix::identity(q, 4)).empty());

    // [[1,2]] over F_5: enumerate all 25 vectors for the kernel
    const Field f5 = Field::prime(5);
    SparseMatrix m(f5, 1, 2);
    m.set(0, 0, Scalar(f5, 1));
    m.set(0, 1, Scalar(f5, 2));
    std::vector<Vec> solutions;
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) {
            Vec v{Scalar(f5, a), Scalar(f5, b)};
            if (is_zero(m.apply(v))) solutions.push_back(v);
        }
    REQUIRE(solutions.size() == 5);  // a line
    const auto k = kernel_basis(m);
    REQUIRE(k.size() == 1);
    CHECK(k[0] == Vec{Scalar(f5, 3), Scalar(f5, 1)});
    CHECK(std::find(solutions.begin(), solutions.end(), k[0]) != solutions.end());
}

TEST_CASE("solve_preimage examples") {
    const Field q = Field::rationals();
    const Vec b{Scalar(q, 3), Scalar(q, -1, 2)};
    CHECK(*solve_preimage(SparseMatrix::identity(q, 2), b) == b);
    CHECK_FALSE(solve_preimage(SparseMatrix(q, 2, 2), b).has_value());

    // [[1,1],[0,0]] x = (2,0): the solution line is (2 - t, t); the free coordinate is zero
    SparseMatrix m(q, 2, 2);
    m.set(0, 0, Scalar(q, 1));
    m.set(0, 1, Scalar(q, 1));
    const Vec rhs{Scalar(q, 2), Scalar(q, 0)};
    const auto x = solve_preimage(m, rhs);
    REQUIRE(x);
    CHECK(*x == Vec{Scalar(q, 2), Scalar(q, 0)});
}

TEST_CASE("rank of an outer product is one") {
    const Field q = Field::rationals();
    std::mt19937 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Vec u, v;
        for (int i = 0; i < 4; ++i) u.push_back(Scalar(q, i + 1 + trial));
        for (int i = 0; i < 3; ++i) v.push_back(random_scalar(q, rng) + Scalar(q, 10));
        SparseMatrix m(q, 4, 3);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 3; ++j) m.set(i, j, u[i] * v[j]);
        CHECK(rank(m) == 1);
        CHECK(ainf::testing::minor_rank(m) == 1);
    }
}

TEST_CASE("linear algebra properties on random matrices") {
    std::mt19937 rng(17);
    for (Field f : {Field::prime(2), Field::prime(3), Field::rationals()}) {
        for (int trial = 0; trial < 60; ++trial) {
            std::uniform_int_distribution<std::size_t> dim(1, 7);
            const auto m = random_matrix(f, dim(rng), dim(rng), rng, 0.4);
            const auto kernel = kernel_basis(m);
            REQUIRE(rank(m) + kernel.size() == m.cols());
            for (const auto& v : kernel) REQUIRE(is_zero(m.apply(v)));
            REQUIRE(span_rank(f, m.cols(), kernel) == kernel.size());

            const auto r = rref(m);
            REQUIRE(rref(r.reduced).reduced == r.reduced);
            REQUIRE(std::is_sorted(r.pivots.begin(), r.pivots.end()));

            Vec x = ainf::zero_vec(f, m.cols());
            for (auto& s : x) s = random_scalar(f, rng);
            const Vec b = m.apply(x);
            const auto sol = solve_preimage(m, b);
            REQUIRE(sol);
            REQUIRE(m.apply(*sol) == b);
        }
    }
}

TEST_CASE("span builder and intersections") {
    const Field q = Field::rationals();
    SpanBuilder s(q, 3);
    CHECK(s.add(Vec{Scalar(q, 1), Scalar(q, 1), Scalar(q, 0)}));
    CHECK(s.add(Vec{Scalar(q, 0), Scalar(q, 1), Scalar(q, 1)}));
    CHECK_FALSE(s.add(Vec{Scalar(q, 1), Scalar(q, 2), Scalar(q, 1)}));
    CHECK(s.rank() == 2);
    const std::vector<Vec> a{{Scalar(q, 1), Scalar(q, 0), Scalar(q, 0)}, {Scalar(q, 0), Scalar(q, 1), Scalar(q, 0)}};
    const std::vector<Vec> b{{Scalar(q, 0), Scalar(q, 1), Scalar(q, 0)}, {Scalar(q, 0), Scalar(q, 0), Scalar(q, 1)}};
    const auto both = intersect_spans(q, 3, a, b);
    REQUIRE(both.size() == 1);
    CHECK(both[0][0].is_zero());
    CHECK(both[0][2].is_zero());
}
