#include "ainf/transfer.hpp"

#include <set>
#include <stdexcept>

#include "ainf/errors.hpp"
#include "ainf/linalg.hpp"

namespace ainf {

namespace {

std::string tuple_label(const ChainComplex& c, const Tuple& t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ", " : "") + c.basis().label(t[i]);
    return s + ")";
}

const MultilinearMap& op(const AInfinityStructure& s, std::size_t k) { return s.ops.at(k); }
const MultilinearMap& comp(const AInfinityMorphism& m, std::size_t k) { return m.components.at(k); }

DegreeWindow range_of(const ChainComplex& c) { return {c.min_degree(), c.max_degree()}; }

Tuple splice(const Tuple& t, std::size_t r, std::size_t s, BasisRef inner) {
    Tuple u(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(r));
    u.push_back(inner);
    u.insert(u.end(), t.begin() + static_cast<std::ptrdiff_t>(r + s), t.end());
    return u;
}

Tuple slice(const Tuple& t, std::size_t from, std::size_t to) {
    return Tuple(t.begin() + static_cast<std::ptrdiff_t>(from), t.begin() + static_cast<std::ptrdiff_t>(to));
}

// U_n on one tuple, as a dense chain of A.
Chain u_value(const TransferState& st, const Tuple& t) {
    const DGAlgebra& a = *st.algebra;
    const ChainComplex& ac = *a.complex();
    const Field f = ac.field();
    const std::size_t n = t.size();
    Chain acc = ac.zero(tuple_degree(t) + static_cast<int>(n) - 2);
    for (std::size_t i = 1; i < n; ++i) {
        const Chain left = comp(st.morphism, i).at(slice(t, 0, i));
        if (left.is_zero()) continue;
        const Chain right = comp(st.morphism, n - i).at(slice(t, i, n));
        if (right.is_zero()) continue;
        const Chain prod = a.multiply(left, right);
        if (prod.degree == acc.degree) axpy(acc.coeffs, Scalar::sign(f, (left.degree + 1) % 2 != 0), prod.coeffs);
    }
    for (std::size_t s = 2; s < n; ++s) {
        const MultilinearMap& inner = op(st.structure, s);
        const MultilinearMap& outer = comp(st.morphism, n - s + 1);
        long sign_exp = 0;
        for (std::size_t r = 0; r + s <= n; ++r) {
            if (r > 0) sign_exp += t[r - 1].degree + 1;
            const Tuple sub = slice(t, r, r + s);
            const SparseChain* val = inner.find(sub);
            if (!val) continue;
            const Scalar sign = Scalar::sign(f, sign_exp % 2 == 0);  // the leading minus folded in
            for (const auto& [j, k] : *val) {
                const SparseChain* o = outer.find(splice(t, r, s, {inner.output_degree(sub), j}));
                if (!o) continue;
                for (const auto& [i, x] : *o) acc.coeffs[i] += sign * k * x;
            }
        }
    }
    return acc;
}

}  // namespace

TransferState begin_transfer(std::shared_ptr<const DGAlgebra> a, const TransferOptions& options) {
    if (options.max_arity < 2) throw std::invalid_argument("transfer: max arity must be at least 2");
    if (auto r = check_dga(*a); !r) throw InvariantViolation("transfer input is not a dg-algebra: " + r.failure);
    TupleWindow window;
    if (options.window_top) {
        const int top = *options.window_top;
        const int need = -(top + static_cast<int>(options.max_arity));
        if (top < 1) throw std::invalid_argument("transfer: window top must be at least 1");
        if (a->complex()->min_degree() > need)
            throw std::invalid_argument("transfer: the algebra must reach degree " + std::to_string(need) +
                                        " to leave slack below the window");
        window.min_total = -(top + static_cast<int>(options.max_arity) - 2);
    }
    TransferState st{a, homology_contraction(a->complex(), options.representatives), {}, {}, 2, options.max_arity};
    const ComplexPtr& h = st.homology.homology;
    st.structure.carrier = h;
    st.structure.kind = StructureKind::algebra;
    st.structure.window = window;
    st.structure.ops.emplace(1, MultilinearMap(h, h, 1, -1));
    st.structure.certified_arity = 1;
    MultilinearMap f1(h, a->complex(), 1, 0);
    for (const Tuple& t : admitted_tuples(*h, 1, window)) f1.set(t, st.homology.contraction.g.apply(t[0]).coeffs);
    st.morphism.components.emplace(1, std::move(f1));
    return extend_step(st);
}

MultilinearMap u_map(const TransferState& st, std::size_t n) {
    if (n < 2 || n > st.frontier)
        throw std::invalid_argument("u_map: arity " + std::to_string(n) + " is not available at frontier " +
                                    std::to_string(st.frontier));
    const ComplexPtr& h = st.homology.homology;
    const ComplexPtr& ac = st.algebra->complex();
    MultilinearMap u(h, ac, n, static_cast<int>(n) - 2);
    for (const Tuple& t : admitted_tuples(*h, n, st.structure.window, static_cast<int>(n) - 2, range_of(*ac)))
        u.set(t, u_value(st, t).coeffs);
    return u;
}

TransferState extend_step(const TransferState& st) {
    const std::size_t n = st.frontier;
    const MultilinearMap u = u_map(st, n);
    const ComplexPtr& h = st.homology.homology;
    const ComplexPtr& ac = st.algebra->complex();
    const Contraction& con = st.homology.contraction;
    MultilinearMap m(h, h, n, static_cast<int>(n) - 2);
    MultilinearMap fn(h, ac, n, static_cast<int>(n) - 1);
    for (const auto& [t, v] : u.values()) {
        const Chain uc{u.output_degree(t), to_dense(ac->field(), ac->dim(u.output_degree(t)), v)};
        if (!ac->boundary(uc).is_zero())
            throw InvariantViolation("U_" + std::to_string(n) + tuple_label(*h, t) +
                                     " is not a cycle; the contraction or the algebra is inconsistent");
        const Chain mv = con.f.apply(uc);
        if (!mv.coeffs.empty()) m.set(t, mv.coeffs);
        Chain fv = con.phi.apply(uc);
        for (auto& x : fv.coeffs) x = -x;
        if (!fv.coeffs.empty()) fn.set(t, fv.coeffs);
    }
    TransferState out = st;
    out.structure.ops.insert_or_assign(n, std::move(m));
    out.morphism.components.insert_or_assign(n, std::move(fn));
    out.structure.certified_arity = n;
    out.frontier = n + 1;
    return out;
}

MultilinearMap morphism_defect(const TransferState& st, std::size_t n) {
    if (n < 2 || n >= st.frontier) throw std::invalid_argument("morphism_defect: arity " + std::to_string(n) + " not built");
    const ComplexPtr& h = st.homology.homology;
    const ComplexPtr& ac = st.algebra->complex();
    const Contraction& con = st.homology.contraction;
    MultilinearMap out(h, ac, n, static_cast<int>(n) - 2);
    for (const Tuple& t : admitted_tuples(*h, n, st.structure.window, static_cast<int>(n) - 2, range_of(*ac))) {
        Chain acc = u_value(st, t);
        const Chain df = ac->boundary(comp(st.morphism, n).at(t));
        if (df.degree == acc.degree && !df.coeffs.empty()) axpy(acc.coeffs, Scalar::one(ac->field()), df.coeffs);
        const Chain gm = con.g.apply(op(st.structure, n).at(t));
        if (gm.degree == acc.degree && !gm.coeffs.empty()) axpy(acc.coeffs, Scalar(ac->field(), -1), gm.coeffs);
        out.set(t, acc.coeffs);
    }
    return out;
}

bool gap_check(const TransferState& st, std::size_t q) {
    if (q < 2) throw std::invalid_argument("gap_check: q must be at least 2");
    if (st.structure.certified_arity < 2 * q - 2)
        throw std::invalid_argument("gap_check: certified arity " + std::to_string(st.structure.certified_arity) +
                                    " is below 2q - 2 = " + std::to_string(2 * q - 2));
    for (std::size_t k = q; k <= 2 * q - 2; ++k)
        if (!op(st.structure, k).is_zero() || !comp(st.morphism, k).is_zero()) return false;
    return true;
}

TransferResult transfer_full(std::shared_ptr<const DGAlgebra> a, const TransferOptions& options) {
    TransferResult res{begin_transfer(std::move(a), options), false, std::nullopt};
    auto search = [&] {
        if (!options.gap_search) return false;
        for (std::size_t q = 2; 2 * q - 2 <= res.state.structure.certified_arity; ++q)
            if (gap_check(res.state, q)) {
                res.complete = true;
                res.gap_q = q;
                res.state.structure.gap_q = q;
                return true;
            }
        return false;
    };
    while (!search() && res.state.frontier <= options.max_arity) res.state = extend_step(res.state);
    return res;
}

// ------------------------------------------------------------- k[z]-linearity

namespace {

struct ZMultiplication {
    const TransferState& st;
    Chain z_chain;
    int period;

    // π(z_chain · ι(h)) for h in H_d.
    Vec apply(int d, const Vec& h) const {
        const ComplexPtr& hc = st.homology.homology;
        const Contraction& con = st.homology.contraction;
        const Chain lifted = con.g.apply(Chain{d, h});
        const Chain prod = st.algebra->multiply(z_chain, lifted);
        const Chain back = con.f.apply(prod);
        if (back.coeffs.empty()) return zero_vec(hc->field(), hc->dim(d + period));
        return back.coeffs;
    }
};

}  // namespace

KzExtension kz_extend(const TransferState& st, const CentralElement& ce) {
    const ComplexPtr& h = st.homology.homology;
    const ChainComplex& hc = *h;
    const DGAlgebra& alg = *st.algebra;
    const Field fld = hc.field();
    const Contraction& con = st.homology.contraction;
    const TupleWindow& w = st.structure.window;
    const int period = ce.z.degree;
    if (period == 0 || period % 2 != 0) throw std::invalid_argument("kz_extend: z must have nonzero even degree");

    Chain zc = ce.z_chain ? *ce.z_chain : con.g.apply(ce.z);
    if (zc.degree != period) throw std::invalid_argument("kz_extend: representative of z has the wrong degree");
    if (!alg.complex()->boundary(zc).is_zero()) throw std::invalid_argument("kz_extend: representative of z is not a cycle");
    if (con.f.apply(zc).coeffs != hc.basis_chain(ce.z).coeffs)
        throw std::invalid_argument("kz_extend: representative does not project to z");
    const ZMultiplication zmul{st, zc, period};

    // window degrees of H
    std::vector<int> degrees;
    for (int d = hc.min_degree(); d <= hc.max_degree(); ++d) {
        if (!w.admits_input(d) || (w.min_total && d < *w.min_total)) continue;
        degrees.push_back(d);
    }
    auto in_window = [&](int d) { return std::find(degrees.begin(), degrees.end(), d) != degrees.end(); };

    for (int d : degrees) {
        if (!in_window(d + period) || hc.dim(d) == 0) continue;
        std::vector<Vec> cols;
        for (std::size_t i = 0; i < hc.dim(d); ++i) cols.push_back(zmul.apply(d, unit_vec(fld, hc.dim(d), i)));
        if (span_rank(fld, hc.dim(d + period), cols) != hc.dim(d))
            throw TorsionFailure("multiplication by " + hc.basis().label(ce.z) + " is not injective on degree " +
                                 std::to_string(d));
    }

    // z^j b_i in each window degree, and coordinates with respect to them
    struct Generator {
        std::size_t basis_index;
        int power;
    };
    std::map<int, std::vector<Generator>> gens;
    std::map<int, SparseMatrix> coords;  // H basis -> generator coordinates
    std::map<int, std::vector<Vec>> gen_vectors;
    for (std::size_t i = 0; i < ce.basis.size(); ++i) {
        const BasisRef b = ce.basis[i];
        if (!in_window(b.degree)) throw FreenessFailure("basis element " + hc.basis().label(b) + " lies outside the window");
        Vec v = unit_vec(fld, hc.dim(b.degree), b.index);
        for (int j = 0, d = b.degree; in_window(d); ++j, d += period) {
            gens[d].push_back({i, j});
            gen_vectors[d].push_back(v);
            if (in_window(d + period)) v = zmul.apply(d, v);
        }
    }
    for (int d : degrees) {
        const auto& vs = gen_vectors[d];
        if (vs.size() != hc.dim(d) || span_rank(fld, hc.dim(d), vs) != hc.dim(d))
            throw FreenessFailure("the powers of " + hc.basis().label(ce.z) + " times the basis do not form a basis of degree " +
                                  std::to_string(d));
        if (hc.dim(d) > 0) coords.emplace(d, inverse(SparseMatrix::from_columns(fld, hc.dim(d), vs)));
    }

    const std::set<BasisRef> basis_set(ce.basis.begin(), ce.basis.end());
    for (const auto& [k, fk] : st.morphism.components) {
        for (const auto& [t, v] : fk.values()) {
            if (!std::all_of(t.begin(), t.end(), [&](BasisRef b) { return basis_set.count(b) != 0; })) continue;
            const Chain c = fk.at(t);
            const Chain left = alg.multiply(zc, c), right = alg.multiply(c, zc);
            if (left.coeffs != right.coeffs)
                throw CommutativityFailure("z does not commute with f_" + std::to_string(k) + tuple_label(hc, t));
        }
    }

    KzExtension ext;
    ext.structure.carrier = h;
    ext.structure.kind = StructureKind::algebra;
    ext.structure.window = w;
    ext.structure.certified_arity = st.structure.certified_arity;
    ext.structure.ops.emplace(1, MultilinearMap(h, h, 1, -1));
    for (const auto& [n, mn] : st.structure.ops) {
        if (n < 2) continue;
        MultilinearMap out(h, h, n, static_cast<int>(n) - 2);
        for (const Tuple& t : admitted_tuples(hc, n, w, static_cast<int>(n) - 2, range_of(hc))) {
            // expand every entry in generator coordinates
            std::vector<std::pair<Tuple, std::pair<Scalar, int>>> terms{{Tuple{}, {Scalar::one(fld), 0}}};
            for (const auto& x : t) {
                std::vector<std::pair<Tuple, std::pair<Scalar, int>>> next;
                const auto& cm = coords.at(x.degree);
                for (const auto& [row, c] : cm.column(x.index)) {
                    const Generator& g = gens.at(x.degree)[row];
                    for (const auto& [prefix, cp] : terms) {
                        Tuple u = prefix;
                        u.push_back(ce.basis[g.basis_index]);
                        next.push_back({std::move(u), {cp.first * c, cp.second + g.power}});
                    }
                }
                terms = std::move(next);
            }
            const int out_deg = mn.output_degree(t);
            Vec total = zero_vec(fld, hc.dim(out_deg));
            for (const auto& [u, cp] : terms) {
                Chain v = mn.at(u);
                for (int j = 0; j < cp.second; ++j) v = Chain{v.degree + period, zmul.apply(v.degree, v.coeffs)};
                if (v.degree != out_deg) throw std::logic_error("kz_extend: degree bookkeeping");
                axpy(total, cp.first, v.coeffs);
            }
            out.set(t, total);
            if (total != mn.at(t).coeffs)
                ext.overlap_mismatches.push_back("m_" + std::to_string(n) + tuple_label(hc, t));
        }
        ext.structure.ops.emplace(n, std::move(out));
    }
    return ext;
}

}  // namespace ainf
