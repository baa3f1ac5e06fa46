#include "ainf/contraction.hpp"

#include <stdexcept>

#include "ainf/linalg.hpp"

namespace ainf {

namespace {

CheckResult first_nonzero_column(const SparseMatrix& m, const ChainComplex& source, int degree, const std::string& identity) {
    for (std::size_t col = 0; col < m.cols(); ++col)
        if (!m.column(col).empty())
            return CheckResult::fail(identity + " fails at degree " + std::to_string(degree) + " on basis element '" +
                                     source.basis().label({degree, col}) + "'");
    return CheckResult::pass();
}

SparseMatrix component_or_zero(const ChainMap& m, int n) {
    const auto& s = *m.source();
    if (n < s.min_degree() || n > s.max_degree())
        return SparseMatrix(m.field(), m.target()->dim(n + m.shift()), s.dim(n));
    return m.component(n);
}

}  // namespace

CheckResult check_contraction(const Contraction& c) {
    const ChainComplex& big = *c.big;
    const ChainComplex& small = *c.small;
    const Field fld = big.field();
    if (c.f.shift() != 0 || c.g.shift() != 0 || c.phi.shift() != 1)
        return CheckResult::fail("contraction maps have the wrong shifts (need f, g of shift 0 and phi of shift +1)");
    for (int n = small.min_degree(); n <= small.max_degree(); ++n) {
        const SparseMatrix fg = component_or_zero(c.f, n) * component_or_zero(c.g, n);
        if (auto r = first_nonzero_column(fg - SparseMatrix::identity(fld, small.dim(n)), small, n, "fg = 1"); !r) return r;
    }
    for (int n = big.min_degree(); n <= big.max_degree(); ++n) {
        SparseMatrix lhs = component_or_zero(c.g, n) * component_or_zero(c.f, n);
        lhs += component_or_zero(c.phi, n - 1) * big.differential(n);
        lhs += big.differential(n + 1) * component_or_zero(c.phi, n);
        if (auto r = first_nonzero_column(lhs - SparseMatrix::identity(fld, big.dim(n)), big, n, "gf + phi d + d phi = 1"); !r)
            return r;
        if (auto r = first_nonzero_column(component_or_zero(c.f, n + 1) * component_or_zero(c.phi, n), big, n, "f phi = 0"); !r)
            return r;
        if (auto r = first_nonzero_column(component_or_zero(c.phi, n + 1) * component_or_zero(c.phi, n), big, n, "phi phi = 0");
            !r)
            return r;
    }
    for (int n = small.min_degree(); n <= small.max_degree(); ++n) {
        if (auto r = first_nonzero_column(component_or_zero(c.phi, n) * component_or_zero(c.g, n), small, n, "phi g = 0"); !r)
            return r;
    }
    return CheckResult::pass();
}

Contraction identity_contraction(const ComplexPtr& n) {
    return Contraction{n, n, ChainMap::identity(n), ChainMap::identity(n), ChainMap::zero(n, n, 1)};
}

std::size_t betti_number(const ChainComplex& c, int n) {
    const std::size_t dim = c.dim(n);
    return dim - rank(c.differential(n)) - rank(c.differential(n + 1));
}

HomologyContraction homology_contraction(const ComplexPtr& cp) { return homology_contraction(cp, {}); }

HomologyContraction homology_contraction(const ComplexPtr& cp, const std::vector<PreferredCycle>& preferred) {
    const ChainComplex& c = *cp;
    const Field fld = c.field();
    const int lo = c.min_degree(), hi = c.max_degree();

    struct Split {
        std::vector<Vec> boundaries;        // b_j = d(e_{p_j}), p_j pivots of d_{n+1}
        std::vector<Vec> cycles;            // chosen homology representatives
        std::vector<std::size_t> up_pivots; // p_j
        std::vector<std::size_t> pivots;    // pivot columns of d_n (span L_n)
        std::vector<std::string> labels;
        SparseMatrix coords{Field::rationals(), 0, 0};  // P^{-1}
    };
    std::map<int, Split> splits;
    for (int n = lo; n <= hi; ++n) {
        Split s;
        const SparseMatrix dn = c.differential(n);
        const SparseMatrix dup = c.differential(n + 1);
        s.pivots = rref(dn).pivots;
        s.up_pivots = rref(dup).pivots;
        SpanBuilder span(fld, c.dim(n));
        for (auto j : s.up_pivots) {
            s.boundaries.push_back(dup.column_vec(j));
            span.add(s.boundaries.back());
        }
        for (const auto& pc : preferred) {
            if (pc.cycle.degree != n) continue;
            if (!c.boundary(pc.cycle).is_zero())
                throw std::invalid_argument("homology_contraction: representative " + pc.label + " is not a cycle");
            if (!span.add(pc.cycle.coeffs))
                throw std::invalid_argument("homology_contraction: representative " + pc.label +
                                            " is dependent on the boundaries and earlier representatives");
            s.cycles.push_back(pc.cycle.coeffs);
            s.labels.push_back(pc.label);
        }
        const auto kernel = kernel_basis(dn);
        // kernel_basis emits one vector per free column, in column order
        std::vector<char> is_pivot(c.dim(n), 0);
        for (auto p : s.pivots) is_pivot[p] = 1;
        std::size_t k = 0;
        for (std::size_t col = 0; col < c.dim(n); ++col) {
            if (is_pivot[col]) continue;
            const Vec& z = kernel[k++];
            if (span.add(z)) {
                s.cycles.push_back(z);
                s.labels.push_back("[" + c.basis().label({n, col}) + "]");
            }
        }
        std::vector<Vec> columns = s.boundaries;
        columns.insert(columns.end(), s.cycles.begin(), s.cycles.end());
        for (auto p : s.pivots) columns.push_back(unit_vec(fld, c.dim(n), p));
        if (columns.size() != c.dim(n)) throw std::logic_error("homology_contraction: splitting has the wrong size");
        s.coords = inverse(SparseMatrix::from_columns(fld, c.dim(n), columns));
        splits.emplace(n, std::move(s));
    }

    GradedBasis hbasis(lo, hi);
    for (int n = lo; n <= hi; ++n)
        for (const auto& l : splits.at(n).labels) hbasis.add(n, l);
    auto h = std::make_shared<ChainComplex>(fld, hbasis);

    ChainMap f(cp, h, 0), g(h, cp, 0), phi(cp, cp, 1);
    for (int n = lo; n <= hi; ++n) {
        const Split& s = splits.at(n);
        const std::size_t nb = s.boundaries.size(), nh = s.cycles.size();
        const auto rows = s.coords.to_rows();
        std::vector<Vec> frows(rows.begin() + static_cast<std::ptrdiff_t>(nb),
                               rows.begin() + static_cast<std::ptrdiff_t>(nb + nh));
        f.set_component(n, SparseMatrix::from_rows(fld, c.dim(n), frows));
        g.set_component(n, SparseMatrix::from_columns(fld, c.dim(n), s.cycles));
        SparseMatrix p(fld, c.dim(n + 1), c.dim(n));
        for (std::size_t j = 0; j < nb; ++j)
            for (std::size_t col = 0; col < c.dim(n); ++col)
                if (!rows[j][col].is_zero()) p.set(s.up_pivots[j], col, rows[j][col]);
        phi.set_component(n, std::move(p));
    }
    return HomologyContraction{h, Contraction{cp, h, std::move(f), std::move(g), std::move(phi)}};
}

}  // namespace ainf
