#pragma once

#include <functional>
#include <map>

#include "ainf/perturbation.hpp"
#include "ainf/persistence.hpp"
#include "test_support.hpp"

// Random inputs and tensor helpers shared by the unit and acceptance tests.
namespace ainf::testing {

using Factors = std::vector<std::vector<std::pair<BasisRef, Scalar>>>;

inline void expand_into(const Factors& factors, const Scalar& scale, TensorTerms& out) {
    Tuple t(factors.size());
    std::function<void(std::size_t, Scalar)> rec = [&](std::size_t l, Scalar k) {
        if (l == factors.size()) return add_term(out, t, k);
        for (const auto& [b, c] : factors[l]) {
            t[l] = b;
            rec(l + 1, k * c);
        }
    };
    rec(0, scale);
}

inline std::vector<std::pair<BasisRef, Scalar>> chain_terms(const Chain& c) {
    std::vector<std::pair<BasisRef, Scalar>> out;
    for (std::size_t i = 0; i < c.coeffs.size(); ++i)
        if (!c.coeffs[i].is_zero()) out.emplace_back(BasisRef{c.degree, i}, c.coeffs[i]);
    return out;
}

inline TensorTerms tensor_image(const ChainMap& m, const TensorTerms& in) {
    TensorTerms out;
    for (const auto& [t, k] : in) {
        Factors fs;
        for (const auto& y : t) fs.push_back(chain_terms(m.apply(y)));
        expand_into(fs, k, out);
    }
    return out;
}

inline TensorTerms coproduct_of(const DGCoalgebra& co, const Chain& c) {
    TensorTerms out;
    for (const auto& [y, k] : chain_terms(c))
        for (const auto& [t, v] : co.coproduct(y)) add_term(out, t, k * v);
    return out;
}

inline std::vector<std::vector<int>> random_simplicial(std::mt19937& rng, int vertices, double triangle_p, double edge_p) {
    std::bernoulli_distribution tri(triangle_p), edge(edge_p);
    std::vector<std::vector<int>> top;
    for (int v = 0; v < vertices; ++v) top.push_back({v});
    for (int i = 0; i < vertices; ++i)
        for (int j = i + 1; j < vertices; ++j) {
            if (edge(rng)) top.push_back({i, j});
            for (int k = j + 1; k < vertices; ++k)
                if (tri(rng)) top.push_back({i, j, k});
        }
    return face_closure(top);
}

inline void place(SparseMatrix& target, const SparseMatrix& m, std::size_t row0, std::size_t col0) {
    for (std::size_t c = 0; c < m.cols(); ++c)
        for (const auto& [r, v] : m.column(c)) target.set(row0 + r, col0 + c, v);
}

inline SparseMatrix block_diag(Field f, const SparseMatrix& a, const SparseMatrix& b) {
    SparseMatrix m(f, a.rows() + b.rows(), a.cols() + b.cols());
    place(m, a, 0, 0);
    place(m, b, a.rows(), a.cols());
    return m;
}

inline SparseMatrix comp_or_zero(const ChainMap& m, int n) {
    const auto& s = *m.source();
    if (n < s.min_degree() || n > s.max_degree()) return SparseMatrix(m.field(), m.target()->dim(n + m.shift()), s.dim(n));
    return m.component(n);
}

struct PerturbedContraction {
    Contraction contraction;
    Perturbation perturbation;
};

// N = A ⊕ B with the direct sum of the homology contractions of A and B, and
// δ : B -> A of the form ∂_A k - k ∂_B + g_A X f_B, so that (∂ + δ)^2 = 0 and
// (φδ)^2 = 0. Everything is then conjugated by a random change of basis of N.
inline PerturbedContraction random_perturbed(Field f, std::mt19937& rng) {
    const int lo = 0, hi = 3;
    const auto a = homology_contraction(random_complex(f, lo, hi, 3, rng));
    const auto b = homology_contraction(random_complex(f, lo, hi, 3, rng));
    const ChainComplex& ca = *a.contraction.big;
    const ChainComplex& cb = *b.contraction.big;
    const ChainComplex& ha = *a.homology;
    const ChainComplex& hb = *b.homology;

    GradedBasis nb(lo, hi), mb(lo, hi);
    for (int n = lo; n <= hi; ++n) {
        for (const auto& l : ca.basis().labels(n)) nb.add(n, "a:" + l);
        for (const auto& l : cb.basis().labels(n)) nb.add(n, "b:" + l);
        for (const auto& l : ha.basis().labels(n)) mb.add(n, "a:" + l);
        for (const auto& l : hb.basis().labels(n)) mb.add(n, "b:" + l);
    }
    std::map<int, SparseMatrix> p, pinv;
    for (int n = lo - 1; n <= hi + 1; ++n) {
        p.emplace(n, random_invertible(f, nb.dim(n), rng));
        pinv.emplace(n, inverse(p.at(n)));
    }
    std::map<int, SparseMatrix> d;
    for (int n = lo + 1; n <= hi; ++n)
        d.emplace(n, p.at(n - 1) * block_diag(f, ca.differential(n), cb.differential(n)) * pinv.at(n));
    auto big = std::make_shared<ChainComplex>(f, nb, std::move(d));
    auto small = std::make_shared<ChainComplex>(f, mb);

    ChainMap fm(big, small, 0), gm(small, big, 0), phim(big, big, 1), delta(big, big, -1);
    std::map<int, SparseMatrix> k;
    for (int n = lo; n <= hi; ++n) k.emplace(n, random_matrix(f, ca.dim(n), cb.dim(n), rng, 0.4));
    auto k_at = [&](int n) { return n < lo || n > hi ? SparseMatrix(f, ca.dim(n), cb.dim(n)) : k.at(n); };
    for (int n = lo; n <= hi; ++n) {
        fm.set_component(n, block_diag(f, a.contraction.f.component(n), b.contraction.f.component(n)) * pinv.at(n));
        gm.set_component(n, p.at(n) * block_diag(f, a.contraction.g.component(n), b.contraction.g.component(n)));
        phim.set_component(n, p.at(n + 1) *
                                  block_diag(f, comp_or_zero(a.contraction.phi, n), comp_or_zero(b.contraction.phi, n)) *
                                  pinv.at(n));
        SparseMatrix dl = ca.differential(n) * k_at(n) - k_at(n - 1) * cb.differential(n);
        if (n - 1 >= lo)
            dl += a.contraction.g.component(n - 1) * random_matrix(f, ha.dim(n - 1), hb.dim(n), rng, 0.5) *
                  b.contraction.f.component(n);
        SparseMatrix full(f, nb.dim(n - 1), nb.dim(n));
        place(full, dl, 0, ca.dim(n));
        delta.set_component(n, p.at(n - 1) * full * pinv.at(n));
    }
    return {Contraction{big, small, std::move(fm), std::move(gm), std::move(phim)}, Perturbation{std::move(delta), {}}};
}

inline std::vector<Point> random_cloud(std::mt19937& rng, std::size_t n, std::size_t dim) {
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<Point> pts(n, Point(dim));
    for (auto& p : pts)
        for (auto& x : p) x = u(rng);
    return pts;
}

// Random face-closed filtration: random top simplices on `vertices` vertices with
// values raised to dominate their faces, declared in a shuffled order.
inline FilteredComplex random_filtration(std::mt19937& rng, int vertices, std::size_t max_simplices) {
    std::uniform_int_distribution<int> vd(0, vertices - 1), size(1, 3), val(0, 9);
    std::map<std::vector<std::size_t>, double> value;
    for (int attempt = 0; attempt < 1000 && value.size() < max_simplices; ++attempt) {
        std::vector<std::size_t> s;
        const int k = size(rng);
        while (static_cast<int>(s.size()) < k) {
            const auto v = static_cast<std::size_t>(vd(rng));
            if (std::find(s.begin(), s.end(), v) == s.end()) s.push_back(v);
        }
        std::sort(s.begin(), s.end());
        const double x = val(rng);
        std::vector<std::vector<std::size_t>> faces;
        for (std::size_t mask = 1; mask < (std::size_t{1} << s.size()); ++mask) {
            std::vector<std::size_t> face;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (mask & (std::size_t{1} << i)) face.push_back(s[i]);
            faces.push_back(face);
        }
        std::size_t added = 0;
        for (const auto& face : faces)
            if (!value.count(face)) ++added;
        if (value.size() + added > max_simplices) continue;
        for (const auto& face : faces) {
            auto it = value.find(face);
            const double v = face == s ? x : std::min(x, static_cast<double>(val(rng)));
            if (it == value.end()) value.emplace(face, v);
        }
    }
    // faces first may carry larger values: push every simplex up to its faces' maximum
    std::vector<std::vector<std::size_t>> keys;
    for (const auto& [k, v] : value) keys.push_back(k);
    std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    for (const auto& k : keys) {
        if (k.size() == 1) continue;
        for (std::size_t i = 0; i < k.size(); ++i) {
            auto face = k;
            face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
            value[k] = std::max(value[k], value.at(face));
        }
    }
    std::shuffle(keys.begin(), keys.end(), rng);
    FilteredComplex f;
    for (const auto& k : keys) f.add(k, value.at(k));
    return f;
}

inline std::size_t count_intervals(const PersistenceDiagram& d, int k, double i, double j) {
    std::size_t n = 0;
    for (const auto& x : d.in_degree(k))
        if (x.birth <= i && j < x.death) ++n;
    return n;
}

}  // namespace ainf::testing
