// fusionforge command line: corpus access, verification, spectral data, criteria, search, bialgebra suites.

#include <CLI11.hpp>
#include <fmt/core.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "fusion/bialgebra.hpp"
#include "fusion/corpus.hpp"
#include "fusion/criteria.hpp"
#include "fusion/ring.hpp"
#include "fusion/search.hpp"
#include "fusion/spectral.hpp"

using namespace fusion;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kNegative = 1, kUsage = 2;

double sig12(double x) { return std::stod(fmt::format("{:.12g}", x)); }

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

struct Common {
    std::uint64_t seed = 1;
    int threads = 1;
    bool json_out = false;
    bool gate = false;
};

int negative(const Common& c) { return c.gate ? kNegative : kOk; }

// verify
int cmd_verify(const std::string& spec, const Common& c) {
    FusionData fd;
    try {
        fd = load_ring(spec);
    } catch (const Error& e) {
        if (e.code != Error::Code::Validation) throw;
        if (c.json_out)
            print_json({{"ring", spec}, {"pass", false}, {"error", e.what()}});
        else
            fmt::print("{}: FAIL ({})\n", spec, e.what());
        return negative(c);
    }
    auto rep = verify_axioms(fd);
    if (c.json_out) {
        json checks = json::array();
        for (const auto& a : rep.checks) {
            json w = json::array();
            for (int x : a.witness) w.push_back(x + 1);
            checks.push_back({{"name", a.name}, {"pass", a.pass}, {"residual", a.residual}, {"witness", w}});
        }
        print_json({{"ring", spec}, {"rank", fd.rank()}, {"exact", fd.exact()}, {"pass", rep.all_pass()}, {"checks", checks}});
    } else {
        for (const auto& a : rep.checks) {
            std::string w;
            for (int x : a.witness) w += fmt::format(" {}", x + 1);
            fmt::print("{:<20} {}{}\n", a.name, a.pass ? "pass" : "FAIL", a.pass ? "" : " at" + w);
        }
        fmt::print("{}: {}\n", spec, rep.all_pass() ? "all axioms hold" : "FAIL");
    }
    return rep.all_pass() ? kOk : negative(c);
}

// info
int cmd_info(const std::string& spec, long samples, const Common& c) {
    auto fd = load_ring(spec);
    auto rep = obstruction_report(fd, samples, c.seed);
    if (rep.label.empty()) rep.label = spec;
    auto j = rep.to_json();
    if (c.json_out) {
        print_json(j);
    } else {
        fmt::print("ring          {}\n", rep.label);
        fmt::print("rank          {}\n", rep.rank);
        fmt::print("FPdim         {:.12g}\n", rep.mu);
        fmt::print("type          {}\n", rep.type);
        fmt::print("integral      {}\n", rep.integral);
        fmt::print("simple        {}\n", rep.simple);
        fmt::print("perfect       {}\n", rep.perfect);
        fmt::print("commutative   {}\n", rep.commutative);
        fmt::print("frobenius     {}\n", rep.frobenius_type ? (*rep.frobenius_type ? "true" : "false") : "n/a");
        if (rep.schur)
            fmt::print("schur         {} (worst {:.10g} at ({},{},{}))\n", rep.schur->holds ? "holds" : "fails",
                       rep.schur->worst_value, rep.schur->worst_triple[0] + 1, rep.schur->worst_triple[1] + 1,
                       rep.schur->worst_triple[2] + 1);
        if (rep.falsifier) fmt::print("schur         {}\n", rep.falsifier->summary());
        for (const auto& b : rep.bounds.b) fmt::print("bound {:<14} {} (slack {:.6g})\n", b.name, b.holds ? "holds" : "FAIL", b.slack);
    }
    bool bad = (rep.schur && !rep.schur->holds) || (rep.falsifier && rep.falsifier->witness);
    return bad ? negative(c) : kOk;
}

// chartable
int cmd_chartable(const std::string& spec, bool csv, const Common& c) {
    auto fd = load_ring(spec);
    if (!is_commutative(fd)) throw Error(Error::Code::Usage, "character tables need a commutative ring");
    SpectralOptions so;
    so.seed = c.seed;
    auto ct = character_table(fd, so);
    const int m = ct.rank();
    if (csv) {
        std::cout << "basis,character,re,im\n";
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                std::cout << fmt::format("{},{},{:.12g},{:.12g}\n", i + 1, j + 1, sig12(ct.lambda(i, j).real()) + 0.0,
                                         sig12(ct.lambda(i, j).imag()) + 0.0);
        return kOk;
    }
    if (c.json_out) {
        json rows = json::array();
        for (int i = 0; i < m; ++i) {
            json r = json::array();
            for (int j = 0; j < m; ++j) r.push_back({sig12(ct.lambda(i, j).real()) + 0.0, sig12(ct.lambda(i, j).imag()) + 0.0});
            rows.push_back(r);
        }
        print_json({{"ring", spec}, {"rank", m}, {"table", rows}, {"residual", ct.residual}});
        return kOk;
    }
    for (int i = 0; i < m; ++i) {
        std::string line;
        for (int j = 0; j < m; ++j) {
            auto z = ct.lambda(i, j);
            double re = std::abs(z.real()) < 5e-13 ? 0.0 : z.real();
            double im = std::abs(z.imag()) < 5e-13 ? 0.0 : z.imag();
            line += im == 0.0 ? fmt::format("{:>24.10g}", re) : fmt::format("{:>24}", fmt::format("{:.8g}{:+.8g}i", re, im));
        }
        fmt::print("{}\n", line);
    }
    return kOk;
}

// schur
int cmd_schur(const std::string& spec, bool all_triples, long samples, const Common& c) {
    auto fd = load_ring(spec);
    if (!is_commutative(fd)) {
        auto r = schur_noncommutative_falsify(fd, samples, c.seed);
        if (c.json_out)
            print_json({{"ring", spec}, {"commutative", false}, {"samples", r.samples}, {"counterexample", r.witness.has_value()},
                        {"min_value", r.min_value}});
        else
            fmt::print("{}\n", r.summary());
        return r.witness ? negative(c) : kOk;
    }
    SpectralOptions so;
    so.seed = c.seed;
    auto ct = character_table(fd, so);
    SchurOptions opt;
    opt.keep_sums = all_triples;
    auto r = schur_commutative(ct, opt);
    const int m = ct.rank();
    if (c.json_out) {
        json j = {{"ring", spec},
                  {"holds", r.holds},
                  {"inconclusive", r.inconclusive},
                  {"worst_value", r.worst_value},
                  {"worst_triple", {r.worst_triple[0] + 1, r.worst_triple[1] + 1, r.worst_triple[2] + 1}},
                  {"tolerance", r.tolerance},
                  {"triples", r.triples_scanned}};
        if (all_triples) {
            json t = json::array();
            std::size_t n = 0;
            for (int a = 0; a < m; ++a)
                for (int b = a; b < m; ++b)
                    for (int d = b; d < m; ++d) t.push_back({{"triple", {a + 1, b + 1, d + 1}}, {"value", r.all_sums[n++]}});
            j["all_triples"] = t;
        }
        print_json(j);
    } else {
        if (all_triples) {
            std::size_t n = 0;
            for (int a = 0; a < m; ++a)
                for (int b = a; b < m; ++b)
                    for (int d = b; d < m; ++d) fmt::print("({},{},{}) {:.12g}\n", a + 1, b + 1, d + 1, r.all_sums[n++]);
        }
        fmt::print("worst triple ({},{},{}) value {:.12g}\n", r.worst_triple[0] + 1, r.worst_triple[1] + 1, r.worst_triple[2] + 1,
                   r.worst_value);
        fmt::print("schur criterion {}\n", r.holds ? (r.inconclusive ? "holds (within tolerance)" : "holds") : "FAILS");
    }
    return r.holds ? kOk : negative(c);
}

// subrings
int cmd_subrings(const std::string& spec, const Common& c) {
    auto fd = load_ring(spec);
    auto subs = proper_subrings(fd);
    const auto& d = fd.fp_dims();
    json arr = json::array();
    for (const auto& s : subs) {
        double mu = 0;
        json idx = json::array();
        for (int i : s) {
            mu += d[i] * d[i];
            idx.push_back(i + 1);
        }
        arr.push_back({{"basis", idx}, {"fpdim", mu}});
    }
    if (c.json_out) {
        print_json({{"ring", spec}, {"simple", is_simple(fd)}, {"proper_subrings", arr}});
    } else {
        for (const auto& e : arr) fmt::print("{} FPdim {:.12g}\n", e["basis"].dump(), e["fpdim"].get<double>());
        fmt::print("{} proper nontrivial subring(s); {}\n", subs.size(), is_simple(fd) ? "simple" : "not simple");
    }
    return kOk;
}

struct ConstraintFlags {
    std::int64_t fpdim = 0, fpdim_min = 0, fpdim_max = 0;
    int rank = 0, rank_min = 0, rank_max = 0;
    bool perfect = false, frobenius = false, gcd_one = false, exclude_ppp = false, growth_cap = false;
    int min_d2 = 1;
    int max_mult = 0;

    void add(CLI::App* app) {
        app->add_option("--fpdim", fpdim, "exact FPdim");
        app->add_option("--fpdim-min", fpdim_min, "smallest FPdim");
        app->add_option("--fpdim-max", fpdim_max, "largest FPdim");
        app->add_option("--rank", rank, "exact rank");
        app->add_option("--rank-min", rank_min, "smallest rank");
        app->add_option("--rank-max", rank_max, "largest rank");
        app->add_flag("--perfect", perfect, "exactly one invertible object");
        app->add_flag("--frobenius", frobenius, "every dimension divides FPdim");
        app->add_option("--min-d2", min_d2, "smallest non-unit dimension");
        app->add_flag("--gcd-one", gcd_one, "gcd of the non-unit dimensions is 1");
        app->add_flag("--exclude-prime-power-products", exclude_ppp, "skip FPdim of the form p^a q^b or pqr");
        app->add_flag("--growth-cap", growth_cap, "consecutive non-unit dimensions satisfy n' < n^2");
        app->add_option("--max-mult", max_mult, "bound on every fusion coefficient");
    }

    SearchConstraints get() const {
        SearchConstraints c;
        if (fpdim) c.fpdim_min = c.fpdim_max = fpdim;
        if (fpdim_min) c.fpdim_min = fpdim_min;
        if (fpdim_max) c.fpdim_max = fpdim_max;
        if (rank) c.rank_min = c.rank_max = rank;
        if (rank_min) c.rank_min = rank_min;
        if (rank_max) c.rank_max = rank_max;
        c.require_perfect = perfect;
        c.require_divisibility = frobenius;
        c.min_d2 = min_d2;
        c.require_gcd_one = gcd_one;
        c.exclude_prime_power_products = exclude_ppp;
        c.growth_cap = growth_cap;
        if (max_mult > 0) c.max_multiplicity = max_mult;
        return c;
    }
};

int cmd_classify_types(const ConstraintFlags& f, const Common& c) {
    auto types = enumerate_types(f.get());
    if (c.json_out) {
        json arr = json::array();
        for (const auto& t : types) arr.push_back({{"type", t.str()}, {"fpdim", t.fpdim()}});
        print_json({{"constraints", f.get().to_json()}, {"count", types.size()}, {"types", arr}});
    } else {
        for (const auto& t : types) fmt::print("{}\n", t.str());
        fmt::print("{} type(s)\n", types.size());
    }
    return kOk;
}

struct SearchFlags {
    std::int64_t budget_nodes = 1000000000;
    double budget_secs = 0;
    bool no_pruning = false;
    bool commutative_only = false;

    void add(CLI::App* app) {
        app->add_option("--budget-nodes", budget_nodes, "node budget per (type, involution)");
        app->add_option("--budget-secs", budget_secs, "wall budget in seconds, 0 for none");
        app->add_flag("--no-pruning", no_pruning, "disable the coefficient bounds");
        app->add_flag("--commutative-only", commutative_only, "search commutative rings only");
    }
    SearchOptions get(const Common& c) const {
        SearchOptions o;
        o.node_budget = budget_nodes;
        o.wall_budget = budget_secs;
        o.pruning = !no_pruning;
        o.commutative_only = commutative_only;
        o.threads = c.threads;
        return o;
    }
};

int cmd_classify(const ConstraintFlags& f, const SearchFlags& s, const std::string& simple, const std::string& schur,
                 const std::string& checkpoint, const std::string& rings_dir, bool timing, const Common& c) {
    ClassifyFilters filt;
    auto tri = [](const std::string& v, const char* name) -> std::optional<bool> {
        if (v.empty() || v == "any") return std::nullopt;
        if (v == "yes") return true;
        if (v == "no") return false;
        throw Error(Error::Code::Usage, fmt::format("--{} takes yes, no or any", name));
    };
    filt.simple = tri(simple, "simple");
    filt.schur = tri(schur, "schur");
    auto rep = classify(f.get(), filt, s.get(c), checkpoint);
    if (!rings_dir.empty()) {
        std::filesystem::create_directories(rings_dir);
        int n = 0;
        for (const auto& r : rep.rings) {
            std::ofstream out(std::filesystem::path(rings_dir) / fmt::format("ring-{:04}.frt", ++n));
            out << serialize_fusion_ring(r.fd);
        }
    }
    if (c.json_out) {
        print_json(rep.to_json(timing));
    } else {
        for (const auto& t : rep.types)
            fmt::print("{:<40} involutions {:>3} rings {:>4} simple {:>4} schur-pass {:>4}{}\n", t.type.str(), t.involutions_tried,
                       t.rings_found, t.simple, t.schur_pass, t.complete ? "" : " (incomplete)");
        fmt::print("types examined {}, rings {}, simple {}, schur-pass {}, nodes {}\n", rep.types_examined, rep.rings.size(),
                   rep.count_simple(), rep.count_schur_pass(), rep.counters.nodes);
        if (!rep.complete) fmt::print("INCOMPLETE: {}\n", rep.stop_reason);
        if (timing) fmt::print("wall {:.3f} s\n", rep.wall_seconds);
    }
    if (!rep.complete) std::cerr << "search incomplete: " << rep.stop_reason << "\n";
    return kOk;
}

int cmd_rank5_family(int K, const Common& c) {
    auto r = rank5_three_selfadjoint_family(K);
    int simple = 0, fail = 0, simple_fail = 0;
    json rings = json::array();
    for (const auto& fd : r.rings) {
        bool s = is_simple(fd);
        bool h = schur_commutative(character_table(fd)).holds;
        simple += s;
        fail += !h;
        simple_fail += s && !h;
        rings.push_back({{"ring", to_json(fd)}, {"simple", s}, {"schur", h}});
    }
    if (c.json_out) {
        print_json({{"max_multiplicity", K},
                    {"rings", r.rings.size()},
                    {"simple", simple},
                    {"schur_fail", fail},
                    {"simple_schur_fail", simple_fail},
                    {"nodes", r.nodes},
                    {"list", rings}});
    } else {
        fmt::print("max multiplicity {}: {} rings, {} simple, schur fails on {} ({} simple), nodes {}\n", K, r.rings.size(), simple,
                   fail, simple_fail, r.nodes);
    }
    return kOk;
}

int cmd_bialg_rank3(double d2, double d3, double a, const Common& c) {
    Rank3Type1Params p{d2, d3, a};
    auto dd = rank3_dual_data(p);
    auto s = rank3_dual_schur(p);
    if (c.json_out) {
        print_json({{"d2", d2},
                    {"d3", d3},
                    {"a", a},
                    {"lambda", {dd.lambda2, dd.lambda3}},
                    {"nu", {dd.nu2, dd.nu3}},
                    {"dual_schur", {{"holds", s.holds}, {"min_value", s.min_value}, {"worst", {s.worst[0] + 1, s.worst[1] + 1, s.worst[2] + 1}}, {"tolerance", s.tolerance}}}});
    } else {
        fmt::print("lambda2 {:.12g} lambda3 {:.12g}\n", dd.lambda2, dd.lambda3);
        fmt::print("nu2 {:.12g} nu3 {:.12g}\n", dd.nu2, dd.nu3);
        fmt::print("dual schur minimum {:.12g} at ({},{},{}): {}\n", s.min_value, s.worst[0] + 1, s.worst[1] + 1, s.worst[2] + 1,
                   s.holds ? "holds" : "FAILS");
    }
    return s.holds ? kOk : negative(c);
}

int cmd_ineq_suite(const std::string& spec, long samples, const Common& c) {
    auto fd = load_ring(spec);
    if (!is_commutative(fd)) throw Error(Error::Code::Usage, "the inequality suite needs a commutative ring");
    auto b = canonical_from_fusion_data(fd);
    SuiteOptions o;
    o.samples = samples;
    o.seed = c.seed;
    o.threads = c.threads;
    auto rep = inequality_suite(b, o);
    if (c.json_out) {
        auto j = rep.to_json();
        j["ring"] = spec;
        j["theorem_violations"] = rep.theorem_violations();
        print_json(j);
    } else {
        for (const auto& r : rep.results)
            fmt::print("{:<28} {:<9} worst slack {:>14.6g} {}\n", r.name, r.theorem ? "theorem" : "falsifier", r.worst_slack,
                       r.violated ? (r.theorem ? "VIOLATED" : "counterexample") : "ok");
        fmt::print("theorem violations: {}\n", rep.theorem_violations());
    }
    return rep.theorem_violations() == 0 ? kOk : negative(c);
}

int cmd_corpus_list(const Common& c) {
    json arr = json::array();
    for (const auto& e : corpus()) {
        json j = {{"id", e.id}, {"rank", e.fd.rank()}, {"type", e.type}, {"note", e.note}};
        if (e.simple) j["simple"] = *e.simple;
        if (e.schur) j["schur"] = *e.schur;
        if (!e.group.empty()) j["group"] = e.group;
        arr.push_back(j);
    }
    if (c.json_out) {
        print_json(arr);
    } else {
        for (const auto& e : corpus()) fmt::print("{:<22} rank {:<3} {}\n", e.id, e.fd.rank(), e.type.empty() ? "non-integral" : e.type);
    }
    return kOk;
}

int cmd_corpus_export(const std::string& dir, const std::vector<std::string>& ids, const Common& c) {
    std::vector<const CorpusEntry*> sel;
    if (ids.empty())
        for (const auto& e : corpus()) sel.push_back(&e);
    for (const auto& id : ids) {
        auto* e = find_entry(id);
        if (!e) throw Error(Error::Code::Usage, "no such corpus id: " + id);
        sel.push_back(e);
    }
    if (dir.empty() || dir == "-") {
        for (const auto* e : sel) {
            if (c.json_out) {
                auto j = to_json(e->fd);
                j["label"] = e->id;
                std::cout << j.dump() << "\n";
            } else {
                std::cout << "# " << e->id << "\n" << e->text;
            }
        }
        return kOk;
    }
    std::filesystem::create_directories(dir);
    for (const auto* e : sel) {
        std::ofstream out(std::filesystem::path(dir) / (e->id + (c.json_out ? ".json" : ".frt")));
        if (c.json_out) {
            auto j = to_json(e->fd);
            j["label"] = e->id;
            out << j.dump(2) << "\n";
        } else {
            out << e->text;
        }
    }
    std::cerr << "wrote " << sel.size() << " file(s) to " << dir << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fusion rings, character tables, Schur criteria and classification search"};
    app.require_subcommand(1);
    Common common;

    auto add_common = [&](CLI::App* s, bool seeded, bool gated) {
        s->add_flag("--json", common.json_out, "JSON output");
        if (seeded) s->add_option("--seed", common.seed, "random seed");
        if (gated) s->add_flag("--gate", common.gate, "exit 1 on a negative result");
        s->add_option("--threads", common.threads, "worker threads")->check(CLI::PositiveNumber);
    };

    std::string ring;
    long samples = 1000;
    bool csv = false, all_triples = false;
    ConstraintFlags cf;
    SearchFlags sf;
    std::string simple, schur, checkpoint, rings_dir;
    bool timing = false;
    int max_mult = 4;
    double d2 = 0, d3 = 0, a = 0;
    std::string export_dir;
    std::vector<std::string> export_ids;

    auto* verify = app.add_subcommand("verify", "check the fusion ring axioms");
    verify->add_option("ring", ring, "FRT or JSON file, or corpus id")->required();
    add_common(verify, false, true);

    auto* info = app.add_subcommand("info", "structural flags and obstruction report");
    info->add_option("ring", ring, "FRT or JSON file, or corpus id")->required();
    info->add_option("--samples", samples, "falsifier samples for noncommutative rings");
    add_common(info, true, true);

    auto* chartable = app.add_subcommand("chartable", "character table of a commutative ring");
    chartable->add_option("ring", ring, "FRT or JSON file, or corpus id")->required();
    auto* csv_flag = chartable->add_flag("--csv", csv, "CSV output");
    add_common(chartable, true, false);
    csv_flag->excludes(chartable->get_option("--json"));

    auto* schur_cmd = app.add_subcommand("schur", "Schur product criterion");
    schur_cmd->add_option("ring", ring, "FRT or JSON file, or corpus id")->required();
    schur_cmd->add_flag("--all-triples", all_triples, "list every triple sum");
    schur_cmd->add_option("--samples", samples, "falsifier samples for noncommutative rings");
    add_common(schur_cmd, true, true);

    auto* subrings = app.add_subcommand("subrings", "proper fusion subrings");
    subrings->add_option("ring", ring, "FRT or JSON file, or corpus id")->required();
    add_common(subrings, false, false);

    auto* ctypes = app.add_subcommand("classify-types", "enumerate candidate types");
    cf.add(ctypes);
    add_common(ctypes, false, false);

    auto* cls = app.add_subcommand("classify", "classify fusion rings under constraints");
    cf.add(cls);
    sf.add(cls);
    cls->add_option("--simple", simple, "filter: yes, no or any");
    cls->add_option("--schur", schur, "filter: yes, no or any");
    cls->add_option("--checkpoint,--resume", checkpoint, "JSON-lines checkpoint file, reused and appended");
    cls->add_option("--rings-out", rings_dir, "write the found rings as FRT files into this directory");
    cls->add_flag("--timing", timing, "include wall time in the report");
    add_common(cls, true, false);

    auto* fam = app.add_subcommand("rank5-family", "rank-5 rings with three self-dual objects");
    fam->add_option("--max-mult", max_mult, "bound on the template parameters")->check(CLI::PositiveNumber);
    add_common(fam, false, false);

    auto* b3 = app.add_subcommand("bialg-rank3", "dual Schur data of the rank-3 type I family");
    b3->add_option("--d2", d2, "dimension d2")->required();
    b3->add_option("--d3", d3, "dimension d3")->required();
    b3->add_option("--a", a, "parameter a")->required();
    add_common(b3, false, true);

    auto* ineq = app.add_subcommand("ineq-suite", "Fourier inequality property suite");
    ineq->add_option("ring", ring, "FRT or JSON file, or corpus id")->required();
    ineq->add_option("--samples", samples, "random elements per inequality");
    add_common(ineq, true, true);

    auto* corp = app.add_subcommand("corpus", "embedded corpus");
    corp->require_subcommand(1);
    auto* clist = corp->add_subcommand("list", "list corpus entries");
    add_common(clist, false, false);
    auto* cexp = corp->add_subcommand("export", "write corpus entries");
    cexp->add_option("--dir", export_dir, "output directory, '-' or empty for stdout");
    cexp->add_option("ids", export_ids, "entries to export, default all");
    add_common(cexp, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*verify) return cmd_verify(ring, common);
        if (*info) return cmd_info(ring, samples, common);
        if (*chartable) return cmd_chartable(ring, csv, common);
        if (*schur_cmd) return cmd_schur(ring, all_triples, samples, common);
        if (*subrings) return cmd_subrings(ring, common);
        if (*ctypes) return cmd_classify_types(cf, common);
        if (*cls) return cmd_classify(cf, sf, simple, schur, checkpoint, rings_dir, timing, common);
        if (*fam) return cmd_rank5_family(max_mult, common);
        if (*b3) return cmd_bialg_rank3(d2, d3, a, common);
        if (*ineq) return cmd_ineq_suite(ring, samples, common);
        if (*clist) return cmd_corpus_list(common);
        if (*cexp) return cmd_corpus_export(export_dir, export_ids, common);
    } catch (const Error& e) {
        std::cerr << "error (" << code_name(e.code) << "): " << e.what() << "\n";
        switch (e.code) {
            case Error::Code::Timeout:
                return kNegative;
            default:
                return kUsage;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
