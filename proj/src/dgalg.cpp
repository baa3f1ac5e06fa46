#include "ainf/dgalg.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

#include "ainf/linalg.hpp"

namespace ainf {

SparseChain to_sparse(const Vec& v) {
    SparseChain out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) out.emplace_back(i, v[i]);
    return out;
}

Vec to_dense(Field f, std::size_t n, const SparseChain& s) {
    Vec v = zero_vec(f, n);
    for (const auto& [i, c] : s) v.at(i) = c;
    return v;
}

void add_term(TensorTerms& terms, const Tuple& t, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms.emplace(t, c);
    if (fresh) return;
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
}

int tuple_degree(const Tuple& t) {
    int d = 0;
    for (const auto& b : t) d += b.degree;
    return d;
}

namespace {

std::string tuple_label(const ChainComplex& c, const Tuple& t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ", " : "") + c.basis().label(t[i]);
    return s + ")";
}

bool degree_sign(int d) { return d % 2 != 0; }

// Dense accumulator for one degree of a complex.
struct Accumulator {
    int degree;
    Vec v;
    Accumulator(const ChainComplex& c, int d) : degree(d), v(zero_vec(c.field(), c.dim(d))) {}
    void add(const SparseChain& s, const Scalar& k) {
        for (const auto& [i, x] : s) v[i] += k * x;
    }
    void add(const Chain& ch, const Scalar& k) {
        if (ch.degree != degree) {
            if (!ch.is_zero()) throw std::logic_error("accumulating a chain of the wrong degree");
            return;
        }
        axpy(v, k, ch.coeffs);
    }
};

}  // namespace

// ------------------------------------------------------------------ FlatIndex

FlatIndex::FlatIndex(const GradedBasis& b) : lo_(b.min_degree()) {
    for (int d = b.min_degree(); d <= b.max_degree(); ++d) {
        offsets_.push_back(total_);
        for (std::size_t i = 0; i < b.dim(d); ++i) refs_.push_back({d, i});
        total_ += b.dim(d);
    }
}

BasisRef FlatIndex::ref(std::size_t flat) const { return refs_.at(flat); }

// ------------------------------------------------------------------ DGAlgebra

DGAlgebra::DGAlgebra(ComplexPtr complex) : complex_(std::move(complex)), flat_(complex_->basis()) {
    partners_.resize(flat_.size());
}

const SparseChain* DGAlgebra::lookup(std::size_t a, std::size_t b) const {
    auto it = table_.find(static_cast<std::uint64_t>(a) * flat_.size() + b);
    return it == table_.end() ? nullptr : &it->second;
}

void DGAlgebra::set_product(BasisRef a, BasisRef b, const Vec& value) {
    const int d = a.degree + b.degree;
    if (value.size() != complex_->dim(d))
        throw std::invalid_argument("product " + complex_->basis().label(a) + "·" + complex_->basis().label(b) +
                                    " has the wrong length for degree " + std::to_string(d));
    const std::size_t fa = flat_(a), fb = flat_(b);
    const std::uint64_t key = static_cast<std::uint64_t>(fa) * flat_.size() + fb;
    SparseChain s = to_sparse(value);
    auto& p = partners_[fa];
    if (s.empty()) {
        if (table_.erase(key)) p.erase(std::find(p.begin(), p.end(), fb));
        return;
    }
    if (table_.insert_or_assign(key, std::move(s)).second) p.push_back(fb);
}

Chain DGAlgebra::product(BasisRef a, BasisRef b) const {
    const int d = a.degree + b.degree;
    Chain out = complex_->zero(d);
    if (const auto* s = lookup(flat_(a), flat_(b)))
        for (const auto& [i, c] : *s) out.coeffs[i] = c;
    return out;
}

Chain DGAlgebra::multiply(const Chain& a, const Chain& b) const {
    const int d = a.degree + b.degree;
    Chain out = complex_->zero(d);
    if (a.coeffs.empty() || b.coeffs.empty()) return out;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        if (a.coeffs[i].is_zero()) continue;
        const std::size_t fa = flat_({a.degree, i});
        for (std::size_t fb : partners_[fa]) {
            const BasisRef rb = flat_.ref(fb);
            if (rb.degree != b.degree || b.coeffs[rb.index].is_zero()) continue;
            const Scalar k = a.coeffs[i] * b.coeffs[rb.index];
            for (const auto& [j, c] : *lookup(fa, fb)) out.coeffs[j] += k * c;
        }
    }
    return out;
}

std::map<std::pair<BasisRef, BasisRef>, SparseChain> DGAlgebra::products() const {
    std::map<std::pair<BasisRef, BasisRef>, SparseChain> out;
    for (std::size_t fa = 0; fa < partners_.size(); ++fa)
        for (std::size_t fb : partners_[fa]) out.emplace(std::make_pair(flat_.ref(fa), flat_.ref(fb)), *lookup(fa, fb));
    return out;
}

// ---------------------------------------------------------------- DGCoalgebra

DGCoalgebra::DGCoalgebra(ComplexPtr complex) : complex_(std::move(complex)) {}

void DGCoalgebra::set_coproduct(BasisRef x, const TensorTerms& value) {
    TensorTerms clean;
    for (const auto& [t, c] : value) {
        if (t.size() != 2 || tuple_degree(t) != x.degree)
            throw std::invalid_argument("coproduct of " + complex_->basis().label(x) + " has a term of the wrong shape");
        add_term(clean, t, c);
    }
    if (clean.empty())
        delta_.erase(x);
    else
        delta_[x] = std::move(clean);
}

const TensorTerms& DGCoalgebra::coproduct(BasisRef x) const {
    static const TensorTerms empty;
    auto it = delta_.find(x);
    return it == delta_.end() ? empty : it->second;
}

// ------------------------------------------------------------------- checkers

CheckResult check_dga(const DGAlgebra& a) {
    const ChainComplex& c = *a.complex();
    if (auto r = verify_complex(c); !r) return r;
    const Field f = c.field();
    const auto refs = c.basis().all_refs();
    const auto prods = a.products();
    // right partners of each basis element, for locating candidate triples
    std::map<BasisRef, std::vector<BasisRef>> right;
    for (const auto& [key, v] : prods) right[key.first].push_back(key.second);

    for (const auto& x : refs) {
        const Chain dx = c.boundary(c.basis_chain(x));
        for (const auto& y : refs) {
            const Chain xy = a.product(x, y);
            const Chain lhs = c.boundary(xy);
            Chain rhs = a.multiply(dx, c.basis_chain(y));
            const Chain dy = c.boundary(c.basis_chain(y));
            const Chain x_dy = a.multiply(c.basis_chain(x), dy);
            if (rhs.coeffs.size() == x_dy.coeffs.size())
                axpy(rhs.coeffs, Scalar::sign(f, degree_sign(x.degree)), x_dy.coeffs);
            if (!(lhs.coeffs == rhs.coeffs))
                return CheckResult::fail("Leibniz rule fails on " + tuple_label(c, {x, y}));

            std::set<BasisRef> candidates;
            if (auto it = right.find(y); it != right.end()) candidates.insert(it->second.begin(), it->second.end());
            for (std::size_t i = 0; i < xy.coeffs.size(); ++i)
                if (!xy.coeffs[i].is_zero())
                    if (auto it = right.find({xy.degree, i}); it != right.end())
                        candidates.insert(it->second.begin(), it->second.end());
            for (const auto& z : candidates) {
                const Chain left = a.multiply(xy, c.basis_chain(z));
                const Chain rightp = a.multiply(c.basis_chain(x), a.product(y, z));
                if (!(left.coeffs == rightp.coeffs))
                    return CheckResult::fail("associativity fails on " + tuple_label(c, {x, y, z}));
            }
        }
    }
    return CheckResult::pass();
}

namespace {

// (Δ ⊗ 1) or (1 ⊗ Δ) applied to the pair terms of Δx.
TensorTerms expand_coproduct(const DGCoalgebra& c, const TensorTerms& pairs, std::size_t slot) {
    TensorTerms out;
    for (const auto& [t, k] : pairs) {
        for (const auto& [u, k2] : c.coproduct(t[slot])) {
            Tuple w = slot == 0 ? Tuple{u[0], u[1], t[1]} : Tuple{t[0], u[0], u[1]};
            add_term(out, w, k * k2);
        }
    }
    return out;
}

}  // namespace

CheckResult check_dgc(const DGCoalgebra& dc) {
    const ChainComplex& c = *dc.complex();
    if (auto r = verify_complex(c); !r) return r;
    const Field f = c.field();
    for (const auto& x : c.basis().all_refs()) {
        const TensorTerms& dx = dc.coproduct(x);
        if (expand_coproduct(dc, dx, 0) != expand_coproduct(dc, dx, 1))
            return CheckResult::fail("coassociativity fails on " + c.basis().label(x));
        // Δ∂x
        TensorTerms lhs;
        const Chain bx = c.boundary(c.basis_chain(x));
        for (std::size_t i = 0; i < bx.coeffs.size(); ++i)
            if (!bx.coeffs[i].is_zero())
                for (const auto& [t, k] : dc.coproduct({bx.degree, i})) add_term(lhs, t, bx.coeffs[i] * k);
        // (∂⊗1 + 1⊗∂)Δx
        TensorTerms rhs;
        for (const auto& [t, k] : dx) {
            const Chain da = c.boundary(c.basis_chain(t[0]));
            for (std::size_t i = 0; i < da.coeffs.size(); ++i)
                if (!da.coeffs[i].is_zero()) add_term(rhs, {BasisRef{da.degree, i}, t[1]}, k * da.coeffs[i]);
            const Chain db = c.boundary(c.basis_chain(t[1]));
            const Scalar s = Scalar::sign(f, degree_sign(t[0].degree));
            for (std::size_t i = 0; i < db.coeffs.size(); ++i)
                if (!db.coeffs[i].is_zero()) add_term(rhs, {t[0], BasisRef{db.degree, i}}, s * k * db.coeffs[i]);
        }
        if (lhs != rhs) return CheckResult::fail("co-Leibniz rule fails on " + c.basis().label(x));
    }
    return CheckResult::pass();
}

// ----------------------------------------------------------------- dualizing

namespace {

ComplexPtr dual_complex(const ChainComplex& c) {
    GradedBasis b(-c.max_degree(), -c.min_degree());
    for (int n = -c.max_degree(); n <= -c.min_degree(); ++n)
        for (const auto& l : c.basis().labels(-n)) b.add(n, l);
    std::map<int, SparseMatrix> d;
    // (d_{n})^T : C*_{-(n-1)} -> C*_{-n}, i.e. the differential out of degree -(n-1)
    for (int n = c.min_degree(); n <= c.max_degree(); ++n) {
        if (c.dim(n) == 0 || c.dim(n - 1) == 0) continue;
        if (-(n - 1) > b.max_degree()) continue;
        d.emplace(-(n - 1), c.differential(n).transpose());
    }
    return std::make_shared<ChainComplex>(c.field(), std::move(b), std::move(d));
}

BasisRef negate(BasisRef r) { return {-r.degree, r.index}; }

}  // namespace

DGCoalgebra dualize(const DGAlgebra& a) {
    DGCoalgebra out(dual_complex(*a.complex()));
    std::map<BasisRef, TensorTerms> delta;
    for (const auto& [key, value] : a.products()) {
        const int d = key.first.degree + key.second.degree;
        for (const auto& [i, k] : value) add_term(delta[negate({d, i})], {negate(key.first), negate(key.second)}, k);
    }
    for (const auto& [x, terms] : delta) out.set_coproduct(x, terms);
    return out;
}

DGAlgebra dualize(const DGCoalgebra& c) {
    const ComplexPtr dual = dual_complex(*c.complex());
    DGAlgebra out(dual);
    std::map<std::pair<BasisRef, BasisRef>, Vec> prods;
    for (const auto& [x, terms] : c.coproducts()) {
        for (const auto& [t, k] : terms) {
            auto key = std::make_pair(negate(t[0]), negate(t[1]));
            auto it = prods.find(key);
            if (it == prods.end()) it = prods.emplace(key, zero_vec(c.field(), dual->dim(-x.degree))).first;
            it->second[x.index] += k;
        }
    }
    for (const auto& [key, v] : prods) out.set_product(key.first, key.second, v);
    return out;
}

// --------------------------------------------------------- multilinear maps

MultilinearMap::MultilinearMap(ComplexPtr source, ComplexPtr target, std::size_t arity, int degree)
    : source_(std::move(source)), target_(std::move(target)), arity_(arity), degree_(degree) {}

void MultilinearMap::set(const Tuple& t, const Vec& value) { set(t, to_sparse(value)); }

void MultilinearMap::set(const Tuple& t, SparseChain value) {
    if (t.size() != arity_) throw std::invalid_argument("multilinear map: tuple has the wrong arity");
    if (value.empty()) {
        values_.erase(t);
        return;
    }
    if (!value.empty() && value.back().first >= target_->dim(output_degree(t)))
        throw std::invalid_argument("multilinear map: value outside the target degree");
    values_[t] = std::move(value);
}

Chain MultilinearMap::at(const Tuple& t) const {
    const int d = output_degree(t);
    Chain out = target_->zero(d);
    if (const auto* s = find(t))
        for (const auto& [i, c] : *s) out.coeffs[i] = c;
    return out;
}

const SparseChain* MultilinearMap::find(const Tuple& t) const {
    auto it = values_.find(t);
    return it == values_.end() ? nullptr : &it->second;
}

CoOperation::CoOperation(ComplexPtr carrier, std::size_t arity, int degree)
    : carrier_(std::move(carrier)), arity_(arity), degree_(degree) {}

void CoOperation::set(BasisRef x, TensorTerms value) {
    for (const auto& [t, c] : value)
        if (t.size() != arity_ || tuple_degree(t) != x.degree + degree_)
            throw std::invalid_argument("co-operation: term of the wrong shape on " + carrier_->basis().label(x));
    if (value.empty())
        values_.erase(x);
    else
        values_[x] = std::move(value);
}

const TensorTerms& CoOperation::at(BasisRef x) const {
    static const TensorTerms empty;
    auto it = values_.find(x);
    return it == values_.end() ? empty : it->second;
}

bool TupleWindow::admits(const Tuple& t) const {
    if (!min_total) return true;
    for (const auto& b : t)
        if (b.degree > -1) return false;
    return tuple_degree(t) >= *min_total;
}

std::vector<Tuple> admitted_tuples(const ChainComplex& c, std::size_t arity, const TupleWindow& w, int op_degree,
                                   std::optional<DegreeWindow> outputs) {
    std::vector<BasisRef> inputs;
    for (const auto& r : c.basis().all_refs())
        if (w.admits_input(r.degree)) inputs.push_back(r);
    std::vector<Tuple> out;
    if (inputs.empty() || arity == 0) return out;
    int lo_deg = inputs.front().degree, hi_deg = inputs.back().degree;
    // bounds on the total degree
    long lo = std::numeric_limits<int>::min(), hi = std::numeric_limits<int>::max();
    if (w.min_total) lo = *w.min_total;
    if (outputs) {
        lo = std::max<long>(lo, outputs->lo - op_degree);
        hi = std::min<long>(hi, outputs->hi - op_degree);
    }
    Tuple prefix;
    std::function<void(long)> rec = [&](long sum) {
        const long rem = static_cast<long>(arity - prefix.size());
        if (sum + rem * hi_deg < lo || sum + rem * lo_deg > hi) return;
        if (rem == 0) {
            out.push_back(prefix);
            return;
        }
        for (const auto& r : inputs) {
            prefix.push_back(r);
            rec(sum + r.degree);
            prefix.pop_back();
        }
    };
    rec(0);
    return out;
}

// -------------------------------------------------------------- A∞ structures

AInfinityStructure strict_structure(const DGAlgebra& a, std::size_t max_arity) {
    const ComplexPtr& c = a.complex();
    AInfinityStructure s{c, StructureKind::algebra, {}, {}, std::max<std::size_t>(max_arity, 2), {}, std::nullopt};
    MultilinearMap m1(c, c, 1, -1), m2(c, c, 2, 0);
    for (const auto& x : c->basis().all_refs()) m1.set({x}, c->boundary(c->basis_chain(x)).coeffs);
    for (const auto& [key, v] : a.products()) {
        SparseChain signed_v = v;
        if (!degree_sign(key.first.degree))
            for (auto& e : signed_v) e.second = -e.second;
        m2.set({key.first, key.second}, std::move(signed_v));
    }
    s.ops.emplace(1, std::move(m1));
    s.ops.emplace(2, std::move(m2));
    for (std::size_t n = 3; n <= max_arity; ++n) s.ops.emplace(n, MultilinearMap(c, c, n, static_cast<int>(n) - 2));
    return s;
}

AInfinityStructure strict_structure(const DGCoalgebra& dc, std::size_t max_arity) {
    const ComplexPtr& c = dc.complex();
    AInfinityStructure s{c, StructureKind::coalgebra, {}, {}, std::max<std::size_t>(max_arity, 2), {}, std::nullopt};
    CoOperation d1(c, 1, -1), d2(c, 2, 0);
    for (const auto& x : c->basis().all_refs()) {
        const Chain dx = c->boundary(c->basis_chain(x));
        TensorTerms t;
        for (std::size_t i = 0; i < dx.coeffs.size(); ++i) add_term(t, {BasisRef{dx.degree, i}}, dx.coeffs[i]);
        d1.set(x, std::move(t));
    }
    for (const auto& [x, terms] : dc.coproducts()) d2.set(x, terms);
    s.coops.emplace(1, std::move(d1));
    s.coops.emplace(2, std::move(d2));
    for (std::size_t n = 3; n <= max_arity; ++n) s.coops.emplace(n, CoOperation(c, n, static_cast<int>(n) - 2));
    return s;
}

Scalar coalgebra_term_sign(Field f, const Tuple& output) {
    const std::size_t i = output.size();
    long e = 1;
    for (std::size_t l = 0; l < i; ++l) e += static_cast<long>(i - 1 - l) * output[l].degree;
    return Scalar::sign(f, e % 2 != 0);
}

bool StasheffDefect::is_zero() const {
    if (algebra) return algebra->is_zero();
    if (coalgebra) return coalgebra->is_zero();
    return true;
}

std::string StasheffDefect::witness() const {
    if (algebra && !algebra->is_zero()) return tuple_label(*algebra->source(), algebra->values().begin()->first);
    if (coalgebra && !coalgebra->is_zero())
        return coalgebra->carrier()->basis().label(coalgebra->values().begin()->first);
    return {};
}

namespace {

StasheffDefect algebra_defect(const AInfinityStructure& s, std::size_t n) {
    const ComplexPtr& c = s.carrier;
    const Field f = c->field();
    auto op = [&](std::size_t k) -> const MultilinearMap* {
        auto it = s.ops.find(k);
        return it == s.ops.end() ? nullptr : &it->second;
    };
    const MultilinearMap* m1 = op(1);
    const bool m1_zero = !m1 || m1->is_zero();
    for (std::size_t k = 2; k < n; ++k)
        if (!op(k)) throw std::invalid_argument("stasheff_defect: operation of arity " + std::to_string(k) + " is missing");
    if (!op(n) && !m1_zero) throw std::invalid_argument("stasheff_defect: operation of arity " + std::to_string(n) + " is missing");

    const int degree = static_cast<int>(n) - 3;
    MultilinearMap defect(c, c, n, degree);
    const DegreeWindow range{c->min_degree(), c->max_degree()};
    for (const Tuple& t : admitted_tuples(*c, n, s.window, degree, range)) {
        Accumulator acc(*c, tuple_degree(t) + degree);
        for (std::size_t sz = 1; sz <= n; ++sz) {
            const MultilinearMap* inner = op(sz);
            const MultilinearMap* outer = op(n - sz + 1);
            if (!inner || !outer || inner->is_zero() || outer->is_zero()) continue;
            long sign_exp = 0;
            for (std::size_t r = 0; r + sz <= n; ++r) {
                if (r > 0) sign_exp += t[r - 1].degree + 1;
                const Tuple sub(t.begin() + static_cast<std::ptrdiff_t>(r), t.begin() + static_cast<std::ptrdiff_t>(r + sz));
                const SparseChain* val = inner->find(sub);
                if (!val) continue;
                const int inner_deg = inner->output_degree(sub);
                const Scalar sign = Scalar::sign(f, sign_exp % 2 != 0);
                for (const auto& [i, k] : *val) {
                    Tuple u(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(r));
                    u.push_back({inner_deg, i});
                    u.insert(u.end(), t.begin() + static_cast<std::ptrdiff_t>(r + sz), t.end());
                    if (const SparseChain* o = outer->find(u)) acc.add(*o, sign * k);
                }
            }
        }
        defect.set(t, acc.v);
    }
    return StasheffDefect{std::move(defect), std::nullopt};
}

// D_k(x) in derivation form.
TensorTerms derivation_component(const AInfinityStructure& s, std::size_t k, BasisRef x) {
    TensorTerms out;
    auto it = s.coops.find(k);
    if (it == s.coops.end()) return out;
    const Field f = s.carrier->field();
    for (const auto& [t, c] : it->second.at(x)) out.emplace(t, coalgebra_term_sign(f, t) * c);
    return out;
}

StasheffDefect coalgebra_defect(const AInfinityStructure& s, std::size_t n) {
    const ComplexPtr& c = s.carrier;
    const Field f = c->field();
    auto has = [&](std::size_t k) { return s.coops.count(k) != 0; };
    const bool d1_zero = !has(1) || s.coops.at(1).is_zero();
    for (std::size_t k = 2; k < n; ++k)
        if (!has(k)) throw std::invalid_argument("stasheff_defect: co-operation of arity " + std::to_string(k) + " is missing");
    if (!has(n) && !d1_zero) throw std::invalid_argument("stasheff_defect: co-operation of arity " + std::to_string(n) + " is missing");

    std::map<BasisRef, std::map<std::size_t, TensorTerms>> cache;
    auto component = [&](std::size_t k, BasisRef x) -> const TensorTerms& {
        auto& slot = cache[x];
        auto it = slot.find(k);
        if (it == slot.end()) it = slot.emplace(k, derivation_component(s, k, x)).first;
        return it->second;
    };
    CoOperation defect(c, n, static_cast<int>(n) - 3);
    for (const auto& x : c->basis().all_refs()) {
        TensorTerms acc;
        for (std::size_t outer = 1; outer <= n; ++outer) {
            const std::size_t inner = n - outer + 1;
            for (const auto& [t, k] : component(outer, x)) {
                long sign_exp = 0;
                for (std::size_t r = 0; r < outer; ++r) {
                    if (r > 0) sign_exp += t[r - 1].degree - 1;
                    const Scalar sign = Scalar::sign(f, sign_exp % 2 != 0);
                    for (const auto& [u, k2] : component(inner, t[r])) {
                        Tuple w(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(r));
                        w.insert(w.end(), u.begin(), u.end());
                        w.insert(w.end(), t.begin() + static_cast<std::ptrdiff_t>(r + 1), t.end());
                        add_term(acc, w, sign * k * k2);
                    }
                }
            }
        }
        defect.set(x, std::move(acc));
    }
    return StasheffDefect{std::nullopt, std::move(defect)};
}

}  // namespace

StasheffDefect stasheff_defect(const AInfinityStructure& s, std::size_t n) {
    if (n == 0) throw std::invalid_argument("stasheff_defect: arity must be positive");
    return s.kind == StructureKind::algebra ? algebra_defect(s, n) : coalgebra_defect(s, n);
}

// ------------------------------------------------------ endomorphism algebras

namespace {

// Column-major vectorization of a rows x cols matrix.
Vec vectorize(const SparseMatrix& m) {
    Vec v = zero_vec(m.field(), m.rows() * m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c)
        for (const auto& [r, x] : m.column(c)) v[r + c * m.rows()] = x;
    return v;
}

SparseMatrix unvectorize(Field f, std::size_t rows, std::size_t cols, const Vec& v) {
    SparseMatrix m(f, rows, cols);
    for (std::size_t c = 0; c < cols; ++c)
        for (std::size_t r = 0; r < rows; ++r)
            if (!v[r + c * rows].is_zero()) m.set(r, c, v[r + c * rows]);
    return m;
}

SparseMatrix action_at(const std::map<int, SparseMatrix>& a, Field f, int n, std::size_t dim) {
    auto it = a.find(n);
    return it == a.end() ? SparseMatrix::identity(f, dim) : it->second;
}

// Equivariant maps F_i -> F_j: basis matrices and the vectorized positions that
// read off coordinates (the free columns of the commutation constraints).
struct HomBlock {
    int from = 0, to = 0;
    std::vector<SparseMatrix> basis;
    std::vector<std::size_t> coordinate_positions;
    std::size_t first = 0;  // index of basis[0] in its degree
};

struct HomLayout {
    std::map<std::pair<int, int>, HomBlock> blocks;
    GradedBasis basis;
};

HomLayout hom_layout(const EquivariantComplex& ec, int window_top) {
    const ChainComplex& F = *ec.complex;
    const Field fld = F.field();
    std::map<std::pair<int, int>, HomBlock> blocks;
    GradedBasis basis(-window_top, 0);
    for (int r = 0; r <= window_top; ++r) {
        for (int j = F.min_degree(); j <= F.max_degree(); ++j) {
            const int i = j + r;
            if (i > F.max_degree() || F.dim(i) == 0 || F.dim(j) == 0) continue;
            const std::size_t rows = F.dim(j), cols = F.dim(i), n = rows * cols;
            // a_j M - M a_i = 0 for every action
            std::vector<Vec> constraints;
            for (const auto& act : ec.actions) {
                const SparseMatrix aj = action_at(act, fld, j, rows), ai = action_at(act, fld, i, cols);
                for (std::size_t col = 0; col < n; ++col) {
                    // image of the elementary matrix E_{row,c}
                    const std::size_t row = col % rows, c = col / rows;
                    SparseMatrix e(fld, rows, cols);
                    e.set(row, c, Scalar::one(fld));
                    constraints.push_back(vectorize(aj * e - e * ai));
                }
            }
            SparseMatrix system = constraints.empty() ? SparseMatrix(fld, 0, n)
                                                      : SparseMatrix::from_columns(fld, constraints.front().size(), constraints);
            HomBlock blk;
            blk.from = i;
            blk.to = j;
            const auto piv = rref(system).pivots;
            std::vector<char> is_pivot(n, 0);
            for (auto p : piv) is_pivot[p] = 1;
            for (std::size_t p = 0; p < n; ++p)
                if (!is_pivot[p]) blk.coordinate_positions.push_back(p);
            for (const auto& v : kernel_basis(system)) blk.basis.push_back(unvectorize(fld, rows, cols, v));
            const int deg = j - i;
            blk.first = basis.dim(deg);
            for (std::size_t k = 0; k < blk.basis.size(); ++k)
                basis.add(deg, "h" + std::to_string(i) + ">" + std::to_string(j) + "." + std::to_string(k));
            blocks.emplace(std::make_pair(i, j), std::move(blk));
        }
    }
    return HomLayout{std::move(blocks), std::move(basis)};
}

// coordinates of an equivariant matrix F_i -> F_j in its block
Vec block_coordinates(const HomBlock& b, const SparseMatrix& m) {
    const Vec v = vectorize(m);
    Vec out;
    for (auto p : b.coordinate_positions) out.push_back(v[p]);
    return out;
}

}  // namespace

DGAlgebra endomorphism_dga(const ComplexPtr& f, int window_top) { return endomorphism_dga(EquivariantComplex{f, {}}, window_top); }

DGAlgebra endomorphism_dga(const EquivariantComplex& ec, int window_top) {
    if (window_top < 1) throw std::invalid_argument("endomorphism_dga: window needs at least two degrees");
    const ChainComplex& F = *ec.complex;
    const Field fld = F.field();
    if (auto r = verify_complex(F); !r) throw std::invalid_argument("endomorphism_dga: " + r.failure);
    for (const auto& act : ec.actions)
        for (int n = F.min_degree() + 1; n <= F.max_degree(); ++n) {
            const SparseMatrix lhs = action_at(act, fld, n - 1, F.dim(n - 1)) * F.differential(n);
            const SparseMatrix rhs = F.differential(n) * action_at(act, fld, n, F.dim(n));
            if (!(lhs == rhs))
                throw std::invalid_argument("endomorphism_dga: action does not commute with d in degree " + std::to_string(n));
        }

    const HomLayout layout = hom_layout(ec, window_top);
    const auto& blocks = layout.blocks;
    const GradedBasis& basis = layout.basis;
    auto coordinates = [](const HomBlock& b, const SparseMatrix& m) { return block_coordinates(b, m); };

    std::map<int, SparseMatrix> diff;
    for (int d = basis.min_degree(); d <= basis.max_degree(); ++d) diff.emplace(d, SparseMatrix(fld, basis.dim(d - 1), basis.dim(d)));
    for (const auto& [key, b] : blocks) {
        const int deg = b.to - b.from;
        const Scalar sign = Scalar::sign(fld, !degree_sign(deg));  // -(-1)^{|φ|}
        for (std::size_t k = 0; k < b.basis.size(); ++k) {
            const std::size_t col = b.first + k;
            // ∂φ : F_i -> F_{j-1}
            if (auto it = blocks.find({b.from, b.to - 1}); it != blocks.end()) {
                const Vec co = coordinates(it->second, F.differential(b.to) * b.basis[k]);
                for (std::size_t q = 0; q < co.size(); ++q)
                    if (!co[q].is_zero()) diff.at(deg).add_to(it->second.first + q, col, co[q]);
            }
            // φ∂ : F_{i+1} -> F_j
            if (auto it = blocks.find({b.from + 1, b.to}); it != blocks.end()) {
                const Vec co = coordinates(it->second, b.basis[k] * F.differential(b.from + 1));
                for (std::size_t q = 0; q < co.size(); ++q)
                    if (!co[q].is_zero()) diff.at(deg).add_to(it->second.first + q, col, sign * co[q]);
            }
        }
    }
    auto complex = std::make_shared<ChainComplex>(fld, basis, std::move(diff));
    DGAlgebra alg(complex);
    // a ∘ b with b : F_k -> F_i and a : F_i -> F_j
    for (const auto& [ka, a] : blocks) {
        const int da = a.to - a.from;
        for (const auto& [kb, b] : blocks) {
            if (b.to != a.from) continue;
            auto it = blocks.find({b.from, a.to});
            if (it == blocks.end()) continue;
            const int db = b.to - b.from;
            for (std::size_t x = 0; x < a.basis.size(); ++x)
                for (std::size_t y = 0; y < b.basis.size(); ++y) {
                    const Vec co = coordinates(it->second, a.basis[x] * b.basis[y]);
                    Vec value = zero_vec(fld, basis.dim(da + db));
                    for (std::size_t q = 0; q < co.size(); ++q) value[it->second.first + q] = co[q];
                    alg.set_product({da, a.first + x}, {db, b.first + y}, value);
                }
        }
    }
    return alg;
}

Chain endomorphism_element(const EquivariantComplex& ec, int window_top, int r,
                           const std::map<int, SparseMatrix>& components) {
    if (r < 0 || r > window_top) throw std::invalid_argument("endomorphism_element: degree outside the window");
    const HomLayout layout = hom_layout(ec, window_top);
    const Field fld = ec.complex->field();
    Chain out{-r, zero_vec(fld, layout.basis.dim(-r))};
    for (const auto& [i, m] : components) {
        auto it = layout.blocks.find({i, i - r});
        if (it == layout.blocks.end()) {
            if (m.is_zero()) continue;
            throw std::invalid_argument("endomorphism_element: no maps from degree " + std::to_string(i) + " in this degree");
        }
        const HomBlock& b = it->second;
        const Vec co = block_coordinates(b, m);
        SparseMatrix back(fld, m.rows(), m.cols());
        for (std::size_t k = 0; k < co.size(); ++k) {
            back += b.basis[k].scaled(co[k]);
            out.coeffs[b.first + k] = co[k];
        }
        if (!(back == m))
            throw std::invalid_argument("endomorphism_element: component from degree " + std::to_string(i) +
                                        " does not commute with the actions");
    }
    return out;
}

EquivariantComplex cyclic_group_resolution(std::uint32_t p, int top) {
    if (top < 0) throw std::invalid_argument("cyclic_group_resolution: negative top degree");
    const Field f = Field::prime(p);
    GradedBasis b(0, top);
    for (int n = 0; n <= top; ++n)
        for (std::uint32_t a = 0; a < p; ++a) b.add(n, "T" + std::to_string(a));
    SparseMatrix t_minus_1(f, p, p), norm(f, p, p), t(f, p, p);
    for (std::uint32_t a = 0; a < p; ++a) {
        t_minus_1.add_to((a + 1) % p, a, Scalar::one(f));
        t_minus_1.add_to(a, a, Scalar(f, -1));
        t.set((a + 1) % p, a, Scalar::one(f));
        for (std::uint32_t c = 0; c < p; ++c) norm.set(c, a, Scalar::one(f));
    }
    std::map<int, SparseMatrix> d;
    std::map<int, SparseMatrix> action;
    for (int n = 0; n <= top; ++n) {
        action.emplace(n, t);
        if (n >= 1) d.emplace(n, n % 2 != 0 ? t_minus_1 : norm);
    }
    return EquivariantComplex{std::make_shared<ChainComplex>(f, std::move(b), std::move(d)), {std::move(action)}};
}

std::vector<PreferredCycle> cyclic_group_representatives(const EquivariantComplex& res, int window_top, int up_to) {
    const ChainComplex& F = *res.complex;
    const Field f = F.field();
    if (f.is_rational()) throw std::invalid_argument("cyclic_group_representatives: needs a prime field");
    const std::size_t p = F.dim(0);
    if (up_to > window_top) throw std::invalid_argument("cyclic_group_representatives: degree beyond the window");
    // multiplication by (T - 1)^{p-2} on F_p[C_p] with basis T^0..T^{p-1}
    std::vector<Scalar> poly{Scalar::one(f)};
    for (std::size_t k = 0; k + 2 < p; ++k) {
        std::vector<Scalar> next(poly.size() + 1, Scalar::zero(f));
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= poly[i];
        }
        poly = std::move(next);
    }
    SparseMatrix power(f, p, p);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t k = 0; k < poly.size(); ++k)
            if (!poly[k].is_zero()) power.add_to((a + k) % p, a, poly[k]);
    const SparseMatrix id = SparseMatrix::identity(f, p);

    std::vector<PreferredCycle> out;
    for (int r = 0; r <= up_to; ++r) {
        std::map<int, SparseMatrix> comps;
        for (int i = r; i <= F.max_degree(); ++i) {
            if (r % 2 == 0)
                comps.emplace(i, id);
            else  // X_i = (-1)^i on odd sources, (-1)^i (T - 1)^{p-2} on even ones
                comps.emplace(i, (i % 2 != 0 ? id : power).scaled(Scalar::sign(f, i % 2 != 0)));
        }
        std::string label = r / 2 == 0 ? "" : r / 2 == 1 ? "y" : "y" + std::to_string(r / 2);
        if (r % 2 != 0) label += "x";
        out.push_back({r == 0 ? "1" : label, endomorphism_element(res, window_top, r, comps)});
    }
    return out;
}

}  // namespace ainf
