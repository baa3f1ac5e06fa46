#include "ainf/perturbation.hpp"

#include <functional>
#include <stdexcept>

#include "ainf/errors.hpp"
#include "ainf/linalg.hpp"

namespace ainf {

namespace {

SparseMatrix comp(const ChainMap& m, int n) {
    const ChainComplex& s = *m.source();
    if (n < s.min_degree() || n > s.max_degree()) return SparseMatrix(m.field(), m.target()->dim(n + m.shift()), s.dim(n));
    return m.component(n);
}

int degree_count(const ChainComplex& c) { return c.max_degree() - c.min_degree() + 1; }

std::size_t bound_of(const Contraction& c, const Perturbation& p) {
    return p.nil_bound ? *p.nil_bound : static_cast<std::size_t>(degree_count(*c.big));
}

// S_n = Σ (-1)^i (φδ)^i on N_n, column by column; throws on a basis element whose
// powers outlive the bound.
SparseMatrix series(const Contraction& c, const Perturbation& p, int n) {
    const ChainComplex& big = *c.big;
    const Field f = big.field();
    const SparseMatrix pd = comp(c.phi, n - 1) * comp(p.delta, n);
    const std::size_t bound = bound_of(c, p);
    std::vector<Vec> cols;
    for (std::size_t j = 0; j < big.dim(n); ++j) {
        Vec v = unit_vec(f, big.dim(n), j);
        Vec acc = v;
        for (std::size_t i = 1;; ++i) {
            v = pd.apply(v);
            if (is_zero(v)) break;
            if (i >= bound)
                throw NilpotenceExceeded("(phi delta)^" + std::to_string(i) + " does not vanish on '" +
                                         big.basis().label({n, j}) + "' (bound " + std::to_string(bound) + ")");
            axpy(acc, Scalar::sign(f, i % 2 != 0), v);
        }
        cols.push_back(std::move(acc));
    }
    return SparseMatrix::from_columns(f, big.dim(n), cols);
}

CheckResult check_square_zero(const Contraction& c, const Perturbation& p) {
    const ChainComplex& big = *c.big;
    for (int n = big.min_degree() + 1; n <= big.max_degree(); ++n) {
        const SparseMatrix dn = big.differential(n) + comp(p.delta, n);
        const SparseMatrix dm = big.differential(n - 1) + comp(p.delta, n - 1);
        const SparseMatrix sq = dm * dn;
        for (std::size_t col = 0; col < sq.cols(); ++col)
            if (!sq.column(col).empty())
                return CheckResult::fail("(d + delta)^2 != 0 on '" + big.basis().label({n, col}) + "'");
    }
    return CheckResult::pass();
}

}  // namespace

CheckResult check_perturbation(const Contraction& c, const Perturbation& p) {
    if (p.delta.shift() != -1) return CheckResult::fail("delta must have shift -1");
    if (auto r = check_square_zero(c, p); !r) return r;
    try {
        for (int n = c.big->min_degree(); n <= c.big->max_degree(); ++n) series(c, p, n);
    } catch (const NilpotenceExceeded& e) {
        return CheckResult::fail(e.what());
    }
    return CheckResult::pass();
}

BplResult bpl(const Contraction& c, const Perturbation& p) {
    if (auto r = check_contraction(c); !r) throw InvariantViolation("bpl: input is not a contraction: " + r.failure);
    if (p.delta.shift() != -1) throw std::invalid_argument("bpl: delta must have shift -1");
    if (auto r = check_square_zero(c, p); !r) throw InvariantViolation("bpl: " + r.failure);
    const ChainComplex& big = *c.big;
    const ChainComplex& small = *c.small;
    const Field f = big.field();

    std::map<int, SparseMatrix> s;
    for (int n = big.min_degree() - 1; n <= big.max_degree() + 1; ++n)
        s.emplace(n, n < big.min_degree() || n > big.max_degree() ? SparseMatrix(f, 0, 0) : series(c, p, n));

    std::map<int, SparseMatrix> dbig, dsmall, ddelta;
    for (int n = big.min_degree(); n <= big.max_degree(); ++n) dbig.emplace(n, big.differential(n) + comp(p.delta, n));
    for (int n = small.min_degree(); n <= small.max_degree(); ++n) {
        SparseMatrix dd(f, small.dim(n - 1), small.dim(n));
        if (n >= big.min_degree() && n <= big.max_degree())
            dd = comp(c.f, n - 1) * comp(p.delta, n) * s.at(n) * comp(c.g, n);
        dsmall.emplace(n, small.differential(n) + dd);
        ddelta.emplace(n, std::move(dd));
    }
    auto nbig = std::make_shared<ChainComplex>(f, big.basis(), std::move(dbig));
    auto nsmall = std::make_shared<ChainComplex>(f, small.basis(), std::move(dsmall));

    ChainMap fd(nbig, nsmall, 0), gd(nsmall, nbig, 0), phid(nbig, nbig, 1), sd(nsmall, nsmall, -1);
    for (int n = big.min_degree(); n <= big.max_degree(); ++n) {
        SparseMatrix correction(f, small.dim(n), big.dim(n));
        if (n + 1 <= big.max_degree())
            correction = comp(c.f, n) * comp(p.delta, n + 1) * s.at(n + 1) * comp(c.phi, n);
        fd.set_component(n, comp(c.f, n) - correction);
        if (n + 1 <= big.max_degree())
            phid.set_component(n, s.at(n + 1) * comp(c.phi, n));
        else
            phid.set_component(n, comp(c.phi, n));
    }
    for (int n = small.min_degree(); n <= small.max_degree(); ++n) {
        if (n >= big.min_degree() && n <= big.max_degree())
            gd.set_component(n, s.at(n) * comp(c.g, n));
        sd.set_component(n, ddelta.at(n));
    }
    return BplResult{Contraction{nbig, nsmall, std::move(fd), std::move(gd), std::move(phid)}, std::move(sd)};
}

// ------------------------------------------------------------------ tensor trick

namespace {

using Terms = TensorTerms;

// Expands Π_l factors[l] into tuples, multiplying by `scale`.
void expand(const std::vector<std::vector<std::pair<BasisRef, Scalar>>>& factors, const Scalar& scale, Terms& out) {
    Tuple t(factors.size());
    std::function<void(std::size_t, Scalar)> rec = [&](std::size_t l, Scalar k) {
        if (l == factors.size()) {
            add_term(out, t, k);
            return;
        }
        for (const auto& [b, c] : factors[l]) {
            t[l] = b;
            rec(l + 1, k * c);
        }
    };
    rec(0, scale);
}

std::vector<std::pair<BasisRef, Scalar>> entries(const Chain& c) {
    std::vector<std::pair<BasisRef, Scalar>> out;
    for (std::size_t i = 0; i < c.coeffs.size(); ++i)
        if (!c.coeffs[i].is_zero()) out.emplace_back(BasisRef{c.degree, i}, c.coeffs[i]);
    return out;
}

}  // namespace

AInfinityStructure tensor_trick(const DGCoalgebra& coalgebra, const Contraction& c, std::size_t max_arity) {
    if (max_arity < 2) throw std::invalid_argument("tensor_trick: arity limit must be at least 2");
    if (!(coalgebra.complex()->basis() == c.big->basis()))
        throw std::invalid_argument("tensor_trick: the contraction does not start at the coalgebra");
    if (auto r = check_dgc(coalgebra); !r) throw InvariantViolation("tensor_trick: not a dg-coalgebra: " + r.failure);
    if (auto r = check_contraction(c); !r) throw InvariantViolation("tensor_trick: not a contraction: " + r.failure);
    const ChainComplex& big = *c.big;
    const ComplexPtr& m = c.small;
    const Field fld = big.field();

    // per basis element of N: the derivation form of Δ, φ, gf, f
    std::map<BasisRef, Terms> d2;
    std::map<BasisRef, std::vector<std::pair<BasisRef, Scalar>>> phi, gf, f;
    for (const auto& y : big.basis().all_refs()) {
        Terms t;
        for (const auto& [out, k] : coalgebra.coproduct(y)) add_term(t, out, coalgebra_term_sign(fld, out) * k);
        d2.emplace(y, std::move(t));
        phi.emplace(y, entries(c.phi.apply(y)));
        const Chain fy = c.f.apply(y);
        f.emplace(y, entries(fy));
        gf.emplace(y, entries(c.g.apply(fy)));
    }
    auto single = [&](BasisRef y) { return std::vector<std::pair<BasisRef, Scalar>>{{y, Scalar::one(fld)}}; };

    // Δ as a derivation on desuspended tensors
    auto derive = [&](const Terms& in) {
        Terms out;
        for (const auto& [t, k] : in) {
            long e = 0;
            for (std::size_t r = 0; r < t.size(); ++r) {
                const Scalar sign = Scalar::sign(fld, e % 2 != 0);
                for (const auto& [pair, c2] : d2.at(t[r])) {
                    Tuple u(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(r));
                    u.insert(u.end(), pair.begin(), pair.end());
                    u.insert(u.end(), t.begin() + static_cast<std::ptrdiff_t>(r + 1), t.end());
                    add_term(out, u, sign * k * c2);
                }
                e += t[r].degree - 1;
            }
        }
        return out;
    };
    auto homotopy = [&](const Terms& in) {
        Terms out;
        for (const auto& [t, k] : in) {
            long e = 0;
            for (std::size_t j = 0; j < t.size(); ++j) {
                std::vector<std::vector<std::pair<BasisRef, Scalar>>> factors;
                for (std::size_t l = 0; l < t.size(); ++l)
                    factors.push_back(l < j ? gf.at(t[l]) : l == j ? phi.at(t[l]) : single(t[l]));
                expand(factors, Scalar::sign(fld, e % 2 != 0) * k, out);
                e += t[j].degree - 1;
            }
        }
        return out;
    };
    auto project = [&](const Terms& in) {
        Terms out;
        for (const auto& [t, k] : in) {
            std::vector<std::vector<std::pair<BasisRef, Scalar>>> factors;
            for (const auto& y : t) factors.push_back(f.at(y));
            expand(factors, k, out);
        }
        return out;
    };

    AInfinityStructure s{m, StructureKind::coalgebra, {}, {}, max_arity, {}, std::nullopt};
    CoOperation d1(m, 1, -1);
    for (const auto& x : m->basis().all_refs()) {
        Terms t;
        for (const auto& [b, k] : entries(m->boundary(m->basis_chain(x)))) add_term(t, {b}, k);
        d1.set(x, std::move(t));
    }
    s.coops.emplace(1, std::move(d1));
    for (std::size_t i = 2; i <= max_arity; ++i) s.coops.emplace(i, CoOperation(m, i, static_cast<int>(i) - 2));

    for (const auto& x : m->basis().all_refs()) {
        Terms t;
        for (const auto& [b, k] : entries(c.g.apply(x))) add_term(t, {b}, k);
        for (std::size_t i = 2; i <= max_arity && !t.empty(); ++i) {
            const Terms w = derive(t);
            Terms di;
            for (const auto& [out, k] : project(w))
                add_term(di, out, coalgebra_term_sign(fld, out) * Scalar::sign(fld, i % 2 != 0) * k);
            s.coops.at(i).set(x, std::move(di));
            if (i < max_arity) t = homotopy(w);
        }
    }
    return s;
}

}  // namespace ainf
