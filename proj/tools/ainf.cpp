#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "ainf/errors.hpp"
#include "ainf/io.hpp"
#include "ainf/transfer.hpp"

using namespace ainf;

namespace {

struct JobConfig {
    std::string subcommand;
    std::vector<std::string> inputs;
    std::string field = "rational";
    std::optional<std::size_t> max_arity;
    std::optional<double> max_eps;
    std::optional<int> max_dim;
    std::size_t arity = 3;
    std::optional<int> degree;
    std::string out;
    bool verbose = false;
};

class Job {
public:
    explicit Job(const JobConfig& cfg) : cfg_(cfg), start_(std::chrono::steady_clock::now()) {}

    std::string read(std::size_t i) const {
        const std::string& path = cfg_.inputs.at(i);
        std::ifstream in(path);
        if (!in) throw ParseError(path + ": cannot read file");
        std::ostringstream s;
        s << in.rdbuf();
        log("read " + path);
        return s.str();
    }

    const std::string& path(std::size_t i) const { return cfg_.inputs.at(i); }

    void log(const std::string& msg) const {
        if (!cfg_.verbose) return;
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_);
        std::cerr << "[" << ms.count() << " ms] " << msg << "\n";
    }

    static void require(const CheckResult& r, const std::string& what) {
        if (!r) throw InvariantViolation(what + ": " + r.failure);
    }

    Field field() const { return Field::parse(cfg_.field); }

    const JobConfig& cfg() const { return cfg_; }

private:
    const JobConfig& cfg_;
    std::chrono::steady_clock::time_point start_;
};

void require_stasheff(const AInfinityStructure& s, std::size_t top, const Job& job) {
    for (std::size_t n = 1; n <= top; ++n) {
        const auto d = stasheff_defect(s, n);
        if (!d.is_zero()) throw InvariantViolation("Stasheff identity " + std::to_string(n) + " fails on " + d.witness());
    }
    job.log("Stasheff identities hold through arity " + std::to_string(top));
}

std::string run_homology(const Job& job) {
    const Field f = job.field();
    const auto c = io::parse_complex(job.read(0), f, job.path(0));
    Job::require(verify_complex(*c), "d^2 != 0");
    const auto h = homology_contraction(c);
    Job::require(check_contraction(h.contraction), "homology contraction");
    std::string out = "# Betti numbers over " + f.name() + "\n";
    for (int n = c->min_degree(); n <= c->max_degree(); ++n) {
        const std::size_t b = h.homology->dim(n);
        if (b != betti_number(*c, n))
            throw InvariantViolation("Betti number mismatch in degree " + std::to_string(n));
        out += "# betti " + std::to_string(n) + " " + std::to_string(b) + "\n";
    }
    out += "# contraction onto homology (five identities hold)\n";
    return out + io::write_contraction(h.contraction);
}

std::string run_transfer(const Job& job) {
    const Field f = job.field();
    auto a = std::make_shared<DGAlgebra>(io::parse_dga(job.read(0), f, job.path(0)));
    Job::require(verify_complex(*a->complex()), "d^2 != 0");
    Job::require(check_dga(*a), "not a dg-algebra");
    TransferOptions opt;
    opt.max_arity = job.cfg().max_arity.value_or(8);
    const auto res = transfer_full(a, opt);
    const auto& s = res.state.structure;
    job.log("transferred through arity " + std::to_string(s.certified_arity));
    for (std::size_t n = 2; n <= s.certified_arity; ++n) {
        const auto d = morphism_defect(res.state, n);
        if (!d.is_zero()) throw InvariantViolation("morphism identity " + std::to_string(n) + " fails");
    }
    require_stasheff(s, s.certified_arity, job);
    return "# A-infinity structure on homology over " + f.name() + "\n" + io::write_structure(s);
}

std::string run_bpl(const Job& job) {
    const Field f = job.field();
    const auto c = io::parse_contraction(job.read(0), f, job.path(0));
    const auto p = io::parse_perturbation(job.read(1), c, job.path(1));
    Job::require(verify_complex(*c.big), "big complex: d^2 != 0");
    Job::require(verify_complex(*c.small), "small complex: d^2 != 0");
    Job::require(check_contraction(c), "input contraction");
    Job::require(check_perturbation(c, p), "perturbation");
    const auto r = bpl(c, p);
    Job::require(verify_complex(*r.contraction.big), "perturbed big complex: d^2 != 0");
    Job::require(verify_complex(*r.contraction.small), "perturbed small complex: d^2 != 0");
    Job::require(check_contraction(r.contraction), "perturbed contraction");
    std::string out = "# perturbed contraction (five identities hold)\n";
    for (int n = r.contraction.small->min_degree(); n <= r.contraction.small->max_degree(); ++n) {
        const std::size_t b = betti_number(*r.contraction.big, n);
        if (b != betti_number(*r.contraction.small, n))
            throw InvariantViolation("Betti numbers differ in degree " + std::to_string(n));
        out += "# betti " + std::to_string(n) + " " + std::to_string(b) + "\n";
    }
    return out + io::write_contraction(r.contraction);
}

std::string run_tensor_trick(const Job& job) {
    const Field f = job.field();
    const auto co = io::parse_coalgebra(job.read(0), f, job.path(0));
    const auto c = io::parse_contraction(job.read(1), f, job.path(1), co.complex());
    Job::require(verify_complex(*co.complex()), "d^2 != 0");
    Job::require(check_dgc(co), "not a dg-coalgebra");
    Job::require(check_contraction(c), "contraction");
    const std::size_t top = job.cfg().max_arity.value_or(4);
    if (top < 2) throw std::invalid_argument("--max-arity must be at least 2");
    const auto s = tensor_trick(co, c, top);
    require_stasheff(s, top, job);
    return "# transferred A-infinity coalgebra over " + f.name() + "\n" + io::write_structure(s);
}

std::string run_filtration(const Job& job, bool cech_mode) {
    const auto pts = io::parse_points(job.read(0), job.path(0));
    if (!job.cfg().max_eps) throw std::invalid_argument("--max-eps is required");
    const int dim = job.cfg().max_dim.value_or(2);
    const auto f = cech_mode ? cech(pts, *job.cfg().max_eps, dim) : rips(pts, *job.cfg().max_eps, dim);
    Job::require(check_filtration(f), "filtration");
    job.log(std::to_string(f.size()) + " simplices");
    return io::write_filtration(f);
}

FilteredComplex read_filtration(const Job& job) {
    auto f = io::parse_filtration(job.read(0), job.path(0));
    Job::require(check_filtration(f), "filtration");
    return f;
}

std::string run_barcode(const Job& job) {
    const auto f = read_filtration(job);
    auto d = barcode(f, job.field());
    if (const auto top = job.cfg().max_dim) {
        std::vector<Interval> kept;
        for (const auto& i : d.intervals)
            if (i.degree <= *top) kept.push_back(i);
        d.intervals = std::move(kept);
    }
    return io::write_diagram(d);
}

std::string run_bottleneck(const Job& job) {
    const auto a = io::parse_diagram(job.read(0), job.path(0));
    const auto b = io::parse_diagram(job.read(1), job.path(1));
    std::set<int> degrees;
    if (job.cfg().degree) {
        degrees.insert(*job.cfg().degree);
    } else {
        for (const auto& d : {a, b})
            for (const auto& i : d.intervals) degrees.insert(i.degree);
    }
    double dist = 0;
    for (int k : degrees) {
        const double dk = bottleneck(a, b, k);
        job.log("degree " + std::to_string(k) + ": " + io::format_value(dk));
        dist = std::max(dist, dk);
    }
    return io::format_value(dist) + "\n";
}

std::string run_delta_barcode(const Job& job) {
    if (!job.field().is_rational()) throw std::invalid_argument("delta-barcode is computed over Q");
    const auto f = read_filtration(job);
    const std::size_t n = job.cfg().arity;
    const std::size_t top = job.cfg().max_arity.value_or(n);
    const int max_deg = job.cfg().max_dim.value_or(std::max(0, f.max_dim() - 1));
    PersistenceDiagram all;
    all.kind = DiagramKind::delta;
    all.arity = n;
    for (int k = 0; k <= max_deg; ++k) {
        auto d = delta_barcode(f, n, k, top);
        job.log("degree " + std::to_string(k) + ": " + std::to_string(d.intervals.size()) + " intervals");
        all.intervals.insert(all.intervals.end(), d.intervals.begin(), d.intervals.end());
        all.ranks.insert(all.ranks.end(), d.ranks.begin(), d.ranks.end());
        all.warnings.insert(all.warnings.end(), d.warnings.begin(), d.warnings.end());
        all.zero_length += d.zero_length;
    }
    for (const auto& w : all.warnings) std::cerr << "warning: " << w << "\n";
    return io::write_diagram(all);
}

int run(const JobConfig& cfg) {
    const Job job(cfg);
    std::string out;
    const std::string& s = cfg.subcommand;
    if (s == "homology") out = run_homology(job);
    else if (s == "transfer") out = run_transfer(job);
    else if (s == "bpl") out = run_bpl(job);
    else if (s == "tensor-trick") out = run_tensor_trick(job);
    else if (s == "rips") out = run_filtration(job, false);
    else if (s == "cech") out = run_filtration(job, true);
    else if (s == "barcode") out = run_barcode(job);
    else if (s == "bottleneck") out = run_bottleneck(job);
    else if (s == "delta-barcode") out = run_delta_barcode(job);
    if (cfg.out.empty()) {
        std::cout << out;
    } else {
        std::ofstream file(cfg.out);
        if (!file) throw std::runtime_error(cfg.out + ": cannot write file");
        file << out;
    }
    job.log("done");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    JobConfig cfg;
    CLI::App app{"A-infinity structures, perturbation and persistence on finite complexes"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--field", cfg.field, "Coefficient field: a prime p or 'rational'")->capture_default_str();
    app.add_option("--max-arity", cfg.max_arity, "Largest arity to compute (transfer: 8, tensor-trick: 4)")
        ->check(CLI::Range(std::size_t{2}, std::size_t{64}));
    app.add_option("--max-eps", cfg.max_eps, "Largest filtration value (rips, cech)")->check(CLI::PositiveNumber);
    app.add_option("--max-dim", cfg.max_dim, "Largest simplex dimension (rips, cech) or degree (barcodes)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--arity", cfg.arity, "n for Delta_n persistence")->capture_default_str()->check(CLI::Range(2, 64));
    app.add_option("--degree", cfg.degree, "Single homological degree (bottleneck)");
    app.add_option("--out", cfg.out, "Write the result here instead of stdout");
    app.add_flag("--verbose", cfg.verbose, "Progress on stderr");

    struct Sub {
        const char* name;
        const char* help;
        std::vector<const char*> inputs;
    };
    const std::vector<Sub> subs = {
        {"homology", "Betti numbers and a contraction onto homology", {"complex"}},
        {"transfer", "Transferred A-infinity algebra on homology", {"dga"}},
        {"bpl", "Perturbed contraction by the basic perturbation lemma", {"contraction", "perturbation"}},
        {"tensor-trick", "Transferred A-infinity coalgebra", {"coalgebra", "contraction"}},
        {"rips", "Vietoris-Rips filtration of a point cloud", {"points"}},
        {"cech", "Cech filtration of a point cloud", {"points"}},
        {"barcode", "Persistence barcode of a filtration", {"filtration"}},
        {"bottleneck", "Bottleneck distance between two diagrams", {"diagram", "other"}},
        {"delta-barcode", "Delta_n persistence diagram and rank table", {"filtration"}},
    };
    std::vector<std::vector<std::string>> paths(subs.size());
    for (std::size_t i = 0; i < subs.size(); ++i) {
        auto* sub = app.add_subcommand(subs[i].name, subs[i].help);
        paths[i].resize(subs[i].inputs.size());
        for (std::size_t j = 0; j < subs[i].inputs.size(); ++j)
            sub->add_option(subs[i].inputs[j], paths[i][j], "Input file")->required()->check(CLI::ExistingFile);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    for (std::size_t i = 0; i < subs.size(); ++i)
        if (app.got_subcommand(subs[i].name)) {
            cfg.subcommand = subs[i].name;
            cfg.inputs = paths[i];
        }

    try {
        return run(cfg);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
