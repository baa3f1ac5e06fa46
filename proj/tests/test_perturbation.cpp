#include <doctest.h>

#include <functional>

#include "ainf/errors.hpp"
#include "ainf/perturbation.hpp"
#include "generators.hpp"

using namespace ainf;
using ainf::testing::aw_coalgebra;
using ainf::testing::face_closure;
using ainf::testing::random_complex;
using ainf::testing::random_invertible;
using ainf::testing::random_matrix;
using ainf::testing::chain_terms;
using ainf::testing::coproduct_of;
using ainf::testing::expand_into;
using ainf::testing::Factors;
using ainf::testing::PerturbedContraction;
using ainf::testing::random_perturbed;
using ainf::testing::random_simplicial;
using ainf::testing::tensor_image;

namespace {


// Δ_i = (-1)^{[i/2]+i+1} f^{⊗i} Δ^{[i]} φ^{[⊗(i-1)]} ... φ^{[⊗2]} Δ^{[2]} g evaluated
// literally, with Δ^{[k]} = Σ_r (-1)^r 1^{⊗r} ⊗ Δ ⊗ 1^{⊗(k-r-2)} and
// φ^{[⊗k]} = Σ_j (gf)^{⊗j} ⊗ φ ⊗ 1^{⊗(k-j-1)}. With koszul set, φ picks up
// (-1)^{Σ_{l<j}|y_l|} passing the first j factors.
TensorTerms printed_formula(const DGCoalgebra& co, const Contraction& c, std::size_t i, BasisRef x, bool koszul) {
    const Field fld = co.field();
    TensorTerms t;
    for (const auto& [b, k] : chain_terms(c.g.apply(x))) add_term(t, {b}, k);
    for (std::size_t k = 2; k <= i; ++k) {
        TensorTerms next;
        for (const auto& [tu, coef] : t)
            for (std::size_t r = 0; r < tu.size(); ++r)
                for (const auto& [pair, c2] : co.coproduct(tu[r])) {
                    Tuple u(tu.begin(), tu.begin() + static_cast<std::ptrdiff_t>(r));
                    u.insert(u.end(), pair.begin(), pair.end());
                    u.insert(u.end(), tu.begin() + static_cast<std::ptrdiff_t>(r + 1), tu.end());
                    add_term(next, u, Scalar::sign(fld, r % 2 != 0) * coef * c2);
                }
        t = std::move(next);
        if (k == i) break;
        TensorTerms h;
        for (const auto& [tu, coef] : t) {
            long e = 0;
            for (std::size_t j = 0; j < tu.size(); ++j) {
                Factors fs;
                for (std::size_t l = 0; l < tu.size(); ++l) {
                    if (l < j)
                        fs.push_back(chain_terms(c.g.apply(c.f.apply(tu[l]))));
                    else if (l == j)
                        fs.push_back(chain_terms(c.phi.apply(tu[l])));
                    else
                        fs.push_back({{tu[l], Scalar::one(fld)}});
                }
                expand_into(fs, Scalar::sign(fld, koszul && e % 2 != 0) * coef, h);
                e += tu[j].degree;
            }
        }
        t = std::move(h);
    }
    TensorTerms out;
    const bool neg = (i / 2 + i + 1) % 2 != 0;
    for (const auto& [tu, coef] : t) {
        Factors fs;
        for (const auto& y : tu) fs.push_back(chain_terms(c.f.apply(y)));
        expand_into(fs, Scalar::sign(fld, neg) * coef, out);
    }
    return out;
}


// N: a, w in degree 0 and b, e in degree 1 with ∂b = a, contracted onto M = {w, e};
// δ(e) = a + w.
PerturbedContraction hand_example() {
    const Field q = Field::rationals();
    GradedBasis nb(0, 1);
    nb.add(0, "a");
    nb.add(0, "w");
    nb.add(1, "b");
    nb.add(1, "e");
    const Scalar o = Scalar::one(q), z = Scalar::zero(q);
    std::map<int, SparseMatrix> d;
    d.emplace(1, SparseMatrix::from_rows(q, 2, {{o, z}, {z, z}}));
    auto big = std::make_shared<ChainComplex>(q, nb, std::move(d));
    GradedBasis mb(0, 1);
    mb.add(0, "w");
    mb.add(1, "e");
    auto small = std::make_shared<ChainComplex>(q, mb);
    ChainMap f(big, small, 0), g(small, big, 0), phi(big, big, 1), delta(big, big, -1);
    f.set_component(0, SparseMatrix::from_rows(q, 2, {{z, o}}));
    f.set_component(1, SparseMatrix::from_rows(q, 2, {{z, o}}));
    g.set_component(0, SparseMatrix::from_rows(q, 1, {{z}, {o}}));
    g.set_component(1, SparseMatrix::from_rows(q, 1, {{z}, {o}}));
    phi.set_component(0, SparseMatrix::from_rows(q, 2, {{o, z}, {z, z}}));
    delta.set_component(1, SparseMatrix::from_rows(q, 2, {{z, o}, {z, o}}));
    return {Contraction{big, small, std::move(f), std::move(g), std::move(phi)}, Perturbation{std::move(delta), {}}};
}


}  // namespace

TEST_CASE("bpl with zero perturbation reproduces the contraction") {
    std::mt19937 rng(7);
    for (Field f : {Field::prime(2), Field::prime(5), Field::rationals()}) {
        const auto hc = homology_contraction(random_complex(f, 0, 3, 4, rng));
        const auto& c = hc.contraction;
        const auto out = bpl(c, Perturbation{ChainMap::zero(c.big, c.big, -1), {}});
        CHECK(out.small_delta.is_zero());
        CHECK(out.contraction.f.same_components(c.f));
        CHECK(out.contraction.g.same_components(c.g));
        CHECK(out.contraction.phi.same_components(c.phi));
        for (int n = c.big->min_degree(); n <= c.big->max_degree(); ++n)
            CHECK(out.contraction.big->differential(n) == c.big->differential(n));
    }
}

TEST_CASE("bpl on a hand-built perturbation") {
    const auto ex = hand_example();
    const auto& c = ex.contraction;
    const Field q = Field::rationals();
    const Scalar o = Scalar::one(q), z = Scalar::zero(q), m = -Scalar::one(q);
    REQUIRE(check_contraction(c));
    REQUIRE(check_perturbation(c, ex.perturbation));
    const auto out = bpl(c, ex.perturbation);
    // S(e) = e - φδ(e) = e - b and S(b) = b, since φδ(b) = 0
    CHECK(out.contraction.g.component(1) == SparseMatrix::from_rows(q, 1, {{m}, {o}}));
    CHECK(out.contraction.g.component(0) == c.g.component(0));
    CHECK(out.contraction.phi.component(0) == c.phi.component(0));
    CHECK(out.contraction.f.component(0) == c.f.component(0));
    CHECK(out.contraction.f.component(1) == c.f.component(1));
    // ∂_δ(e) = f δ (e - b) = f(a + w) = w
    CHECK(out.small_delta.component(1) == SparseMatrix::from_rows(q, 1, {{o}}));
    CHECK(out.contraction.small->differential(1) == SparseMatrix::from_rows(q, 1, {{o}}));
    CHECK(out.contraction.big->differential(1) == SparseMatrix::from_rows(q, 2, {{o, o}, {z, o}}));
    CHECK(check_contraction(out.contraction));
    CHECK(betti_number(*out.contraction.small, 0) == 0);
    CHECK(betti_number(*out.contraction.small, 1) == 0);
}

TEST_CASE("bpl reports perturbations that are not pointwise nilpotent") {
    const Field q = Field::rationals();
    GradedBasis nb(0, 1);
    nb.add(0, "a");
    nb.add(1, "b");
    std::map<int, SparseMatrix> d;
    d.emplace(1, SparseMatrix::from_rows(q, 1, {{Scalar::one(q)}}));
    auto big = std::make_shared<ChainComplex>(q, nb, std::move(d));
    auto small = std::make_shared<ChainComplex>(q, GradedBasis(0, 1));
    ChainMap f(big, small, 0), g(small, big, 0), phi(big, big, 1), delta(big, big, -1);
    phi.set_component(0, SparseMatrix::from_rows(q, 1, {{Scalar::one(q)}}));
    delta.set_component(1, SparseMatrix::from_rows(q, 1, {{Scalar(q, 2)}}));
    const Contraction c{big, small, f, g, phi};
    REQUIRE(check_contraction(c));
    const Perturbation p{delta, {}};
    // φδ(b) = 2b never vanishes
    CHECK_THROWS_AS(bpl(c, p), NilpotenceExceeded);
    const auto r = check_perturbation(c, p);
    CHECK_FALSE(r);
    CHECK(r.failure.find("'b'") != std::string::npos);

    // the hand example needs one nonzero power of φδ
    auto ex = hand_example();
    ex.perturbation.nil_bound = 1;
    CHECK_THROWS_AS(bpl(ex.contraction, ex.perturbation), NilpotenceExceeded);
    ex.perturbation.nil_bound = 2;
    CHECK_NOTHROW(bpl(ex.contraction, ex.perturbation));
}

TEST_CASE("bpl rejects invalid input") {
    const auto ex = hand_example();
    const Field q = Field::rationals();
    const auto& c = ex.contraction;
    CHECK_THROWS_AS(bpl(c, Perturbation{ChainMap::zero(c.big, c.big, 1), {}}), std::invalid_argument);

    // three degrees where (∂ + δ)^2 != 0
    GradedBasis nb(0, 2);
    nb.add(0, "a");
    nb.add(1, "b");
    nb.add(2, "c");
    auto big = std::make_shared<ChainComplex>(q, nb);
    const auto id = identity_contraction(big);
    ChainMap delta(big, big, -1);
    delta.set_component(1, SparseMatrix::from_rows(q, 1, {{Scalar::one(q)}}));
    delta.set_component(2, SparseMatrix::from_rows(q, 1, {{Scalar::one(q)}}));
    CHECK_THROWS_AS(bpl(id, Perturbation{delta, {}}), InvariantViolation);
    CHECK_FALSE(check_perturbation(id, Perturbation{delta, {}}));

    Contraction broken = c;
    broken.phi = ChainMap::zero(c.big, c.big, 1);
    CHECK_THROWS_AS(bpl(broken, ex.perturbation), InvariantViolation);
}

TEST_CASE("bpl on random perturbed contractions") {
    std::mt19937 rng(2024);
    int homology_changed = 0;
    for (Field f : {Field::prime(2), Field::prime(3), Field::rationals()}) {
        for (int trial = 0; trial < 8; ++trial) {
            INFO("characteristic " << f.characteristic() << ", trial " << trial);
            const auto pc = random_perturbed(f, rng);
            REQUIRE(check_contraction(pc.contraction));
            REQUIRE(check_perturbation(pc.contraction, pc.perturbation));
            const auto out = bpl(pc.contraction, pc.perturbation);
            const auto r = check_contraction(out.contraction);
            CHECK_MESSAGE(r.ok, r.failure);
            CHECK(verify_complex(*out.contraction.big));
            CHECK(verify_complex(*out.contraction.small));
            CHECK(verify_chain_map(out.contraction.f));
            CHECK(verify_chain_map(out.contraction.g));
            for (int n = out.contraction.big->min_degree(); n <= out.contraction.big->max_degree(); ++n) {
                CHECK(betti_number(*out.contraction.big, n) == betti_number(*out.contraction.small, n));
                if (betti_number(*out.contraction.small, n) != pc.contraction.small->dim(n)) ++homology_changed;
            }
        }
    }
    CHECK(homology_changed > 0);
}

TEST_CASE("tensor_trick with a zero homotopy") {
    std::mt19937 rng(11);
    const Field q = Field::rationals();
    const auto co = aw_coalgebra(q, face_closure({{0, 1, 2}, {2, 3}, {1, 3}}));
    const auto& n = co.complex();

    // identity, and an isomorphism onto a copy with a changed basis
    std::vector<Contraction> cs{identity_contraction(n)};
    {
        std::map<int, SparseMatrix> p, pinv, d;
        for (int k = n->min_degree() - 1; k <= n->max_degree() + 1; ++k) {
            p.emplace(k, random_invertible(q, n->dim(k), rng));
            pinv.emplace(k, inverse(p.at(k)));
        }
        for (int k = n->min_degree() + 1; k <= n->max_degree(); ++k)
            d.emplace(k, pinv.at(k - 1) * n->differential(k) * p.at(k));
        auto m = std::make_shared<ChainComplex>(q, n->basis(), std::move(d));
        ChainMap f(n, m, 0), g(m, n, 0);
        for (int k = n->min_degree(); k <= n->max_degree(); ++k) {
            f.set_component(k, pinv.at(k));
            g.set_component(k, p.at(k));
        }
        cs.push_back(Contraction{n, m, f, g, ChainMap::zero(n, n, 1)});
    }
    for (const auto& c : cs) {
        REQUIRE(check_contraction(c));
        const auto s = tensor_trick(co, c, 5);
        for (const auto& x : c.small->basis().all_refs()) {
            CHECK(s.coops.at(2).at(x) == tensor_image(c.f, coproduct_of(co, c.g.apply(x))));
            for (std::size_t i = 3; i <= 5; ++i) CHECK(s.coops.at(i).at(x).empty());
        }
        for (std::size_t k = 1; k <= 5; ++k) CHECK(stasheff_defect(s, k).is_zero());
    }
}

TEST_CASE("tensor_trick on the interval") {
    const Field q = Field::rationals();
    const auto co = aw_coalgebra(q, face_closure({{0, 1}}));
    const auto hc = homology_contraction(co.complex());
    REQUIRE(hc.homology->basis().total_dim() == 1);
    const auto s = tensor_trick(co, hc.contraction, 4);
    const BasisRef pt{0, 0};
    const TensorTerms expected{{{pt, pt}, Scalar::one(q)}};
    CHECK(s.coops.at(2).at(pt) == expected);
    for (std::size_t i = 3; i <= 4; ++i) CHECK(s.coops.at(i).at(pt).empty());
    for (std::size_t k = 1; k <= 4; ++k) CHECK(stasheff_defect(s, k).is_zero());
}

TEST_CASE("tensor_trick agrees with the closed formula") {
    struct Case {
        DGCoalgebra co;
        std::size_t arity;
    };
    std::vector<Case> cases;
    cases.push_back({dualize(endomorphism_dga(cyclic_group_resolution(3, 5), 4)), 4});
    std::mt19937 rng(5);
    for (int trial = 0; trial < 3; ++trial)
        cases.push_back({aw_coalgebra(Field::rationals(), random_simplicial(rng, 6, 0.2, 0.4)), 4});
    bool koszul_matters = false;
    for (const auto& [co, arity] : cases) {
        const auto hc = homology_contraction(co.complex());
        const auto s = tensor_trick(co, hc.contraction, arity);
        for (std::size_t i = 2; i <= arity; ++i)
            for (const auto& x : hc.homology->basis().all_refs()) {
                CHECK(s.coops.at(i).at(x) == printed_formula(co, hc.contraction, i, x, true));
                if (s.coops.at(i).at(x) != printed_formula(co, hc.contraction, i, x, false)) koszul_matters = true;
            }
    }
    // dropping the Koszul sign on φ changes the answer on C_3
    CHECK(koszul_matters);
}

TEST_CASE("C_3 coalgebra carries a nonzero third coproduct") {
    const auto co = dualize(endomorphism_dga(cyclic_group_resolution(3, 5), 4));
    REQUIRE(check_dgc(co));
    const auto hc = homology_contraction(co.complex());
    const auto s = tensor_trick(co, hc.contraction, 4);
    CHECK_FALSE(s.coops.at(3).is_zero());
    for (std::size_t k = 1; k <= 4; ++k) CHECK(stasheff_defect(s, k).is_zero());
}

TEST_CASE("tensor_trick satisfies the co-Stasheff identities on random coalgebras") {
    std::mt19937 rng(99);
    for (Field f : {Field::prime(2), Field::prime(3), Field::rationals()}) {
        for (int trial = 0; trial < 4; ++trial) {
            INFO("characteristic " << f.characteristic() << ", trial " << trial);
            const auto co = aw_coalgebra(f, random_simplicial(rng, 6, 0.25, 0.5));
            REQUIRE(check_dgc(co));
            const auto hc = homology_contraction(co.complex());
            const auto s = tensor_trick(co, hc.contraction, 4);
            for (std::size_t k = 1; k <= 4; ++k) CHECK(stasheff_defect(s, k).is_zero());
        }
        const auto co = dualize(endomorphism_dga(random_complex(f, 0, 2, 2, rng), 2));
        const auto hc = homology_contraction(co.complex());
        const auto s = tensor_trick(co, hc.contraction, 4);
        for (std::size_t k = 1; k <= 4; ++k) CHECK(stasheff_defect(s, k).is_zero());
    }
}

TEST_CASE("tensor_trick rejects bad input") {
    const Field q = Field::rationals();
    const auto co = aw_coalgebra(q, face_closure({{0, 1}}));
    const auto hc = homology_contraction(co.complex());
    CHECK_THROWS_AS(tensor_trick(co, hc.contraction, 1), std::invalid_argument);
    const auto other = aw_coalgebra(q, face_closure({{0, 1, 2}}));
    CHECK_THROWS_AS(tensor_trick(other, hc.contraction, 3), std::invalid_argument);

    DGCoalgebra broken(co.complex());
    for (const auto& [x, t] : co.coproducts()) broken.set_coproduct(x, t);
    TensorTerms bad = co.coproduct({1, 0});
    add_term(bad, {{1, 0}, {0, 0}}, Scalar::one(q));
    broken.set_coproduct({1, 0}, bad);
    CHECK_THROWS_AS(tensor_trick(broken, hc.contraction, 3), InvariantViolation);
}
