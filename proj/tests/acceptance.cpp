// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "ainf/transfer.hpp"
#include "generators.hpp"

using namespace ainf;
using namespace ainf::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Records the first failure; later ones only bump the count.
struct Tally {
    std::size_t cases = 0;
    std::size_t failed = 0;
    std::string first;

    void check(bool ok, const std::string& what) {
        ++cases;
        if (ok) return;
        if (failed++ == 0) first = what;
    }
    bool ok() const { return failed == 0; }
    std::string summary() const {
        std::ostringstream s;
        s << cases - failed << "/" << cases << " checks";
        if (!ok()) s << ", first failure: " << first;
        return s.str();
    }
};

const std::vector<Field> fields{Field::prime(2), Field::prime(3), Field::rationals()};

std::string fmt(double v, int precision = 3) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

// ---------------------------------------------------------------- 1

Outcome identity_suites() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(1001);
    Tally t;
    for (int i = 0; i < 200; ++i) {
        const Field f = fields[static_cast<std::size_t>(i) % 3];
        const auto c = random_complex(f, 0, 4, 8, rng);
        const std::string tag = "complex " + std::to_string(i) + " over " + f.name();
        t.check(bool(verify_complex(*c)), tag + ": d^2 != 0");
        const auto h = homology_contraction(c);
        const auto r = check_contraction(h.contraction);
        t.check(r.ok, tag + ": " + r.failure);
        for (int n = 0; n <= 4; ++n)
            t.check(h.homology->dim(n) == betti_number(*c, n), tag + ": Betti number in degree " + std::to_string(n));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {t.ok() && secs < 60, "200 complexes, " + t.summary() + ", " + fmt(secs) + " s (limit 60 s)"};
}

// ---------------------------------------------------------------- 2

Outcome stasheff_certification() {
    std::mt19937 rng(2002);
    Tally t;
    std::size_t nonzero_higher = 0;
    for (int i = 0; i < 50; ++i) {
        const Field f = fields[static_cast<std::size_t>(i) % 3];
        auto a = std::make_shared<DGAlgebra>(endomorphism_dga(random_complex(f, 0, 2, 2, rng), 2));
        const std::string tag = "algebra " + std::to_string(i) + " over " + f.name();
        const auto dga = check_dga(*a);
        t.check(dga.ok, tag + ": " + dga.failure);
        TransferOptions opt;
        opt.max_arity = 6;
        opt.gap_search = false;
        const auto res = transfer_full(a, opt);
        const auto& s = res.state.structure;
        t.check(s.certified_arity == 6, tag + ": certified arity " + std::to_string(s.certified_arity));
        for (std::size_t n = 1; n <= 6; ++n) {
            const auto d = stasheff_defect(s, n);
            t.check(d.is_zero(), tag + ": St_" + std::to_string(n) + " on " + (d.is_zero() ? "" : d.witness()));
        }
        for (std::size_t n = 3; n <= 6; ++n)
            if (!s.ops.at(n).is_zero()) ++nonzero_higher;
    }
    return {t.ok(), "50 algebras to arity 6, " + t.summary() + ", " + std::to_string(nonzero_higher) +
                        " nonzero m_n (n >= 3)"};
}

// ---------------------------------------------------------------- 3

ComplexPtr perturbed_big(const Contraction& c, const Perturbation& p) {
    std::map<int, SparseMatrix> d;
    for (int n = c.big->min_degree(); n <= c.big->max_degree(); ++n)
        d.emplace(n, c.big->differential(n) + comp_or_zero(p.delta, n));
    return std::make_shared<ChainComplex>(c.big->field(), c.big->basis(), std::move(d));
}

Outcome bpl_correctness() {
    std::mt19937 rng(3003);
    Tally t;
    std::size_t changed = 0;
    for (int i = 0; i < 50; ++i) {
        const Field f = fields[static_cast<std::size_t>(i) % 3];
        const auto pc = random_perturbed(f, rng);
        const auto& c = pc.contraction;
        const std::string tag = "contraction " + std::to_string(i) + " over " + f.name();
        const auto pre = check_perturbation(c, pc.perturbation);
        t.check(pre.ok, tag + ": " + pre.failure);
        const auto out = bpl(c, pc.perturbation);
        const auto r = check_contraction(out.contraction);
        t.check(r.ok, tag + ": " + r.failure);
        const auto direct = perturbed_big(c, pc.perturbation);
        for (int n = c.big->min_degree(); n <= c.big->max_degree(); ++n) {
            const std::size_t b = betti_number(*direct, n);
            t.check(b == betti_number(*out.contraction.small, n), tag + ": Betti number in degree " + std::to_string(n));
            if (b != c.small->dim(n)) ++changed;
        }

        const auto same = bpl(c, Perturbation{ChainMap::zero(c.big, c.big, -1), {}});
        bool exact = same.small_delta.is_zero() && same.contraction.f.same_components(c.f) &&
                     same.contraction.g.same_components(c.g) && same.contraction.phi.same_components(c.phi);
        for (int n = c.big->min_degree(); n <= c.big->max_degree(); ++n)
            exact = exact && same.contraction.big->differential(n) == c.big->differential(n) &&
                    same.contraction.small->differential(n) == c.small->differential(n);
        t.check(exact, tag + ": delta = 0 does not reproduce the input");
    }
    return {t.ok(), "50 perturbed contractions, " + t.summary() + ", homology changed in " + std::to_string(changed) +
                        " degrees"};
}

// ---------------------------------------------------------------- 4

Outcome cyclic_groups() {
    Tally t;
    std::string found;
    std::string timing;
    for (std::uint32_t p : {3u, 5u}) {
        const auto start = std::chrono::steady_clock::now();
        const std::size_t n = 2 * p - 2;
        const int top = 2 + static_cast<int>(n);
        const auto res = cyclic_group_resolution(p, top + 1);
        auto a = std::make_shared<DGAlgebra>(endomorphism_dga(res, top));
        TransferOptions opt;
        opt.max_arity = n;
        opt.window_top = 2;
        opt.gap_search = false;
        opt.representatives = cyclic_group_representatives(res, top, top - 1);
        const auto st = transfer_full(a, opt).state;
        const auto& s = st.structure;
        const std::string tag = "p = " + std::to_string(p);
        for (std::size_t k = 3; k < p; ++k)
            t.check(s.ops.at(k).is_zero(), tag + ": m_" + std::to_string(k) + " != 0");
        const auto& mp = s.ops.at(p);
        t.check(!mp.is_zero(), tag + ": m_p vanishes");
        if (!mp.is_zero()) {
            const auto& [tuple, value] = *mp.values().begin();
            std::string in;
            for (const auto& x : tuple) in += (in.empty() ? "" : ",") + s.carrier->basis().label(x);
            found += (found.empty() ? "" : "; ") + std::string("m_") + std::to_string(p) + "(" + in + ") = " +
                     value.front().second.to_string() + "*" + s.carrier->basis().label({mp.output_degree(tuple), value.front().first});
        }
        for (std::size_t k = 1; k <= n; ++k) {
            const auto d = stasheff_defect(s, k);
            t.check(d.is_zero(), tag + ": St_" + std::to_string(k) + " on " + (d.is_zero() ? "" : d.witness()));
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        timing += (timing.empty() ? "" : ", ") + tag + " " + fmt(secs) + " s";
        if (p == 5) t.check(secs < 300, "p = 5 took " + fmt(secs) + " s");
    }
    return {t.ok(), t.summary() + ", " + found + ", " + timing};
}

// ---------------------------------------------------------------- 5

Outcome gap_soundness() {
    std::mt19937 rng(5005);
    Tally t;
    std::size_t instances = 0, tried = 0;
    std::vector<std::pair<std::string, std::shared_ptr<DGAlgebra>>> fixed;
    for (const Field f : fields) {
        fixed.emplace_back("exterior over " + f.name(), std::make_shared<DGAlgebra>(exterior_algebra(f)));
        fixed.emplace_back("truncated polynomial over " + f.name(), std::make_shared<DGAlgebra>(truncated_polynomial(f)));
    }
    std::string qs;
    auto attempt = [&](const std::string& tag, const std::shared_ptr<DGAlgebra>& a) {
        ++tried;
        TransferOptions opt;
        opt.max_arity = 8;
        const auto res = transfer_full(a, opt);
        if (!res.complete) return;
        ++instances;
        qs += (qs.empty() ? "" : ",") + std::to_string(*res.gap_q);
        const std::size_t c = res.state.structure.certified_arity;
        const auto more = extend_step(extend_step(res.state));
        for (std::size_t k = c + 1; k <= c + 2; ++k) {
            t.check(more.structure.ops.at(k).is_zero(), tag + ": m_" + std::to_string(k) + " != 0");
            t.check(more.morphism.components.at(k).is_zero(), tag + ": f_" + std::to_string(k) + " != 0");
        }
    };
    for (const auto& [tag, a] : fixed) attempt(tag, a);
    for (int i = 0; instances < 10 && i < 200; ++i) {
        const Field f = fields[static_cast<std::size_t>(i) % 3];
        attempt("random endomorphism algebra " + std::to_string(i),
                std::make_shared<DGAlgebra>(endomorphism_dga(random_complex(f, 0, 2, 2, rng), 2)));
    }
    t.check(instances >= 10, "only " + std::to_string(instances) + " complete instances");
    return {t.ok(), std::to_string(instances) + " complete structures out of " + std::to_string(tried) + " (gap q: " + qs +
                        "), " + t.summary()};
}

// ---------------------------------------------------------------- 6

Outcome rank_duality() {
    std::mt19937 rng(6006);
    Tally t;
    for (int i = 0; i < 100; ++i) {
        const Field f = fields[static_cast<std::size_t>(i) % 3];
        const auto fc = random_filtration(rng, 8, 50);
        const auto d = barcode(fc, f);
        const auto values = fc.critical_values();
        std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
        for (int pair = 0; pair < 25; ++pair) {
            double a = values[pick(rng)], b = values[pick(rng)];
            if (a > b) std::swap(a, b);
            for (int k = 0; k <= fc.max_dim(); ++k)
                t.check(persistent_rank(fc, f, k, a, b) == count_intervals(d, k, a, b),
                        "filtration " + std::to_string(i) + ", degree " + std::to_string(k) + ", (" + fmt(a) + ", " +
                            fmt(b) + ")");
        }
    }
    return {t.ok(), "100 filtrations x 25 pairs, " + t.summary()};
}

// ---------------------------------------------------------------- 7

// Each point moved by exactly eps in a random direction.
std::vector<Point> jitter(const std::vector<Point>& pts, double eps, std::mt19937& rng) {
    std::uniform_real_distribution<double> angle(0, 2 * M_PI);
    auto out = pts;
    for (auto& p : out) {
        const double a = angle(rng);
        p[0] += eps * std::cos(a);
        p[1] += eps * std::sin(a);
    }
    return out;
}

Outcome bottleneck_sanity() {
    std::mt19937 rng(7007);
    Tally t;
    const Field f2 = Field::prime(2);
    std::vector<PersistenceDiagram> pool;
    for (int i = 0; i < 30; ++i) pool.push_back(barcode(rips(random_cloud(rng, 10, 2), 2, 2), f2));
    for (const auto& d : pool)
        for (int k = 0; k <= 1; ++k) t.check(bottleneck(d, d, k) == 0, "d_B(D, D) != 0");
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int i = 0; i < 100; ++i) {
        const auto &x = pool[pick(rng)], &y = pool[pick(rng)], &z = pool[pick(rng)];
        for (int k = 0; k <= 1; ++k)
            t.check(bottleneck(x, z, k) <= bottleneck(x, y, k) + bottleneck(y, z, k) + 1e-12,
                    "triangle inequality, triple " + std::to_string(i));
    }
    double worst = 0;
    for (double eps : {0.01, 0.05})
        for (int trial = 0; trial < 20; ++trial) {
            const auto pts = random_cloud(rng, 15, 2);
            const auto a = barcode(rips(pts, 10, 2), f2);
            const auto b = barcode(rips(jitter(pts, eps, rng), 10, 2), f2);
            for (int k = 0; k <= 1; ++k) {
                const double d = bottleneck(a, b, k);
                worst = std::max(worst, d / (2 * eps));
                t.check(d <= 2 * eps + 1e-12, "eps " + fmt(eps) + ", trial " + std::to_string(trial) + ", degree " +
                                                 std::to_string(k) + ": " + fmt(d, 6));
            }
        }
    return {t.ok(), t.summary() + ", largest d_B / 2eps = " + fmt(worst)};
}

// ---------------------------------------------------------------- 8

Outcome delta_degeneration() {
    std::mt19937 rng(8008);
    const Field q = Field::rationals();
    Tally t;
    std::vector<FilteredComplex> tests;
    for (int i = 0; i < 6; ++i) tests.push_back(rips(random_cloud(rng, 7, 2), 0.6, 2));
    for (int i = 0; i < 6; ++i) tests.push_back(random_filtration(rng, 6, 22));
    std::size_t vanishing = 0, pairs = 0;
    for (std::size_t i = 0; i < tests.size(); ++i) {
        const auto& fc = tests[i];
        bool zero = true;
        for (double v : fc.critical_values()) zero = zero && ainfty_stage(fc, v, 3).structure.coops.at(3).is_zero();
        for (int k = 0; k <= 1; ++k) {
            const std::string tag = "filtration " + std::to_string(i) + ", degree " + std::to_string(k);
            if (zero) {
                const auto d = delta_barcode(fc, 3, k, 3);
                t.check(d.intervals == barcode(fc, q, k).intervals && d.warnings.empty(), tag + ": Delta_3 barcode differs");
            }
            for (std::size_t n : {2u, 3u})
                for (const auto& e : delta_barcode(fc, n, k, 3).ranks) {
                    ++pairs;
                    t.check(e.rank <= persistent_rank(fc, q, k, e.from, e.to),
                            tag + ": Delta_" + std::to_string(n) + " rank exceeds the classical rank at (" + fmt(e.from) +
                                ", " + fmt(e.to) + ")");
                }
        }
        if (zero) ++vanishing;
    }
    t.check(vanishing > 0, "no filtration with vanishing Delta_3");
    return {t.ok(), std::to_string(vanishing) + "/" + std::to_string(tests.size()) +
                        " filtrations with Delta_3 = 0 compared, monotonicity on " + std::to_string(pairs) +
                        " stage pairs, " + t.summary()};
}

// ---------------------------------------------------------------- 9

// M = N with the differential moved by a random change of basis P; f = P^{-1}, g = P, φ = 0.
Contraction basis_change(const ComplexPtr& n, std::mt19937& rng) {
    const Field f = n->field();
    std::map<int, SparseMatrix> p, pinv, d;
    for (int k = n->min_degree() - 1; k <= n->max_degree() + 1; ++k) {
        p.emplace(k, random_invertible(f, n->dim(k), rng));
        pinv.emplace(k, inverse(p.at(k)));
    }
    for (int k = n->min_degree() + 1; k <= n->max_degree(); ++k) d.emplace(k, pinv.at(k - 1) * n->differential(k) * p.at(k));
    auto m = std::make_shared<ChainComplex>(f, n->basis(), std::move(d));
    ChainMap fm(n, m, 0), gm(m, n, 0);
    for (int k = n->min_degree(); k <= n->max_degree(); ++k) {
        fm.set_component(k, pinv.at(k));
        gm.set_component(k, p.at(k));
    }
    return Contraction{n, m, fm, gm, ChainMap::zero(n, n, 1)};
}

Outcome tensor_trick_specialization() {
    std::mt19937 rng(9009);
    Tally t;
    std::size_t elements = 0;
    for (int i = 0; i < 12; ++i) {
        const Field f = fields[static_cast<std::size_t>(i) % 3];
        const auto co = aw_coalgebra(f, random_simplicial(rng, 5, 0.3, 0.5));
        for (const auto& c : {identity_contraction(co.complex()), basis_change(co.complex(), rng)}) {
            const auto s = tensor_trick(co, c, 5);
            for (const auto& x : c.small->basis().all_refs()) {
                ++elements;
                const std::string tag = "coalgebra " + std::to_string(i) + " at " + c.small->basis().label(x);
                t.check(s.coops.at(2).at(x) == tensor_image(c.f, coproduct_of(co, c.g.apply(x))), tag + ": Delta_2");
                for (std::size_t k = 3; k <= 5; ++k)
                    t.check(s.coops.at(k).at(x).empty(), tag + ": Delta_" + std::to_string(k) + " != 0");
            }
        }
    }
    return {t.ok(), std::to_string(elements) + " basis elements, " + t.summary()};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"identity suites", identity_suites},
        {"Stasheff certification", stasheff_certification},
        {"BPL correctness", bpl_correctness},
        {"cyclic-group higher products", cyclic_groups},
        {"gap criterion soundness", gap_soundness},
        {"barcode/rank duality", rank_duality},
        {"bottleneck sanity and stability", bottleneck_sanity},
        {"Delta_n degeneration", delta_degeneration},
        {"tensor-trick specialization", tensor_trick_specialization},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::cout << "criterion " << i + 1 << " (" << criteria[i].first << "): " << (o.pass ? "PASS" : "FAIL") << " | "
                  << o.detail << " | " << fmt(secs) << " s" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
