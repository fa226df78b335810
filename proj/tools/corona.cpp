// corona - command line front end: build coronas, compare spectra, certify
// LPST and search for LPGST times.
//
// Exit codes: 0 analysis completed (a negative verdict is still a result),
// 1 internal failure, 2 malformed input or usage, 3 search refused.

#include <vcc/vcc.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

using namespace vcc;

constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitRefused = 3;

struct Config {
    std::string base;
    std::string satellites;
    double tol{kDefaultGroupTol};
    double support_tol{kDefaultSupportTol};
    int u{-1};
    int v{-1};
    long long kappa_max{100'000};
    double target{0.99};
    bool override_hypotheses{false};
    std::string csv;
    double t_max{10.0};
    int steps{100};
    std::string out;
    std::string format{"json"};
};

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Writes to --out when given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw InputError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

void require_format(const Config& c, std::initializer_list<std::string_view> allowed) {
    for (auto f : allowed)
        if (c.format == f) return;
    throw InputError("format '" + c.format + "' is not supported by this command");
}

Graph load_base(const Config& c) {
    try {
        return parse_base_source(c.base);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

std::vector<Graph> load_satellites(const Config& c, const Graph& g) {
    try {
        auto hs = parse_satellites(c.satellites, g.order());
        if (hs.size() != static_cast<std::size_t>(g.order())) {
            throw InputError("satellites: expected " + std::to_string(g.order()) + " satellite graphs, got " +
                             std::to_string(hs.size()));
        }
        return hs;
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

bool uniform_sizes(const std::vector<Graph>& hs) {
    return std::all_of(hs.begin(), hs.end(), [&](const Graph& h) { return h.order() == hs.front().order(); });
}

unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CORONA_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
    }
    return n;
}

// ---------------------------------------------------------------------------

int cmd_build(const Config& c) {
    require_format(c, {"json", "text"});
    const auto g = load_base(c);
    const auto hs = load_satellites(c, g);
    std::vector<std::string> warnings;
    if (!uniform_sizes(hs)) {
        warnings.push_back("satellite sizes are not uniform; closed-form spectra and the LPGST search need equal sizes");
    }
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    const auto corona = vertex_complemented_corona(g, hs);
    Sink sink(c.out);
    auto& os = sink.os();
    if (c.format == "json") {
        json j = corona;
        j["warnings"] = warnings;
        os << j.dump(2) << '\n';
    } else {
        os << "# backbone " << corona.labeling.backbone_size() << '\n';
        for (int i = corona.labeling.backbone_size(); i < corona.labeling.total(); ++i) {
            const auto [owner, w] = corona.labeling.composite(i);
            os << "# satellite " << i << " owner " << owner << " w " << w << '\n';
        }
        write_edge_list(os, corona.graph);
    }
    return 0;
}

int cmd_spectrum(const Config& c) {
    require_format(c, {"json", "text"});
    const auto g = load_base(c);
    const auto hs = load_satellites(c, g);
    const auto corona = vertex_complemented_corona(g, hs);
    const auto numeric = laplacian_decomposition(corona.graph, c.tol);

    std::optional<ClosedFormSpectrum> cf;
    std::string cf_error;
    try {
        cf = closed_form_spectrum(g, hs, c.tol);
    } catch (const std::invalid_argument& e) {
        cf_error = e.what();
        std::cerr << "warning: no closed form: " << cf_error << '\n';
    }
    bool match = false;
    double deviation = 0.0;
    if (cf) {
        match = cf->entries.size() == numeric.distinct();
        for (std::size_t i = 0; match && i < numeric.distinct(); ++i) {
            deviation = std::max(deviation, std::abs(cf->entries[i].value - numeric.eigenvalues[i]));
            match = cf->entries[i].multiplicity == numeric.multiplicities[i];
        }
    }

    Sink sink(c.out);
    auto& os = sink.os();
    if (c.format == "json") {
        json num = json::array();
        for (std::size_t i = 0; i < numeric.distinct(); ++i)
            num.push_back({{"value", numeric.eigenvalues[i]}, {"multiplicity", numeric.multiplicities[i]}});
        json j{{"vertices", corona.graph.order()}, {"numeric", num}};
        if (cf) {
            j["closed_form"] = *cf;
            j["structure_match"] = match;
            j["max_deviation"] = match ? json(deviation) : json(nullptr);
        } else {
            j["closed_form"] = nullptr;
            j["closed_form_error"] = cf_error;
        }
        os << j.dump(2) << '\n';
        return 0;
    }
    os << std::setprecision(12);
    os << "vertices " << corona.graph.order() << '\n';
    if (cf) {
        os << std::left << std::setw(44) << "closed form" << "numeric\n";
        for (std::size_t i = 0; i < std::max(cf->entries.size(), numeric.distinct()); ++i) {
            std::ostringstream left;
            left << std::setprecision(12);
            if (i < cf->entries.size()) {
                const auto& e = cf->entries[i];
                left << e.value << " x" << e.multiplicity << " (" << e.families.to_string() << ") "
                     << e.exact.to_string();
            }
            os << std::left << std::setw(44) << (left.str() + "  ");
            if (i < numeric.distinct()) os << numeric.eigenvalues[i] << " x" << numeric.multiplicities[i];
            os << '\n';
        }
        os << "total multiplicity " << cf->total_multiplicity() << '\n';
        if (match) {
            os << "max deviation " << deviation << '\n';
        } else {
            os << "structure mismatch between closed form and numeric spectrum\n";
        }
    } else {
        for (std::size_t i = 0; i < numeric.distinct(); ++i)
            os << numeric.eigenvalues[i] << " x" << numeric.multiplicities[i] << '\n';
        os << "total multiplicity " << numeric.order() << '\n';
    }
    return 0;
}

int cmd_lpst(const Config& c) {
    require_format(c, {"json", "text"});
    auto g = load_base(c);
    if (!c.satellites.empty()) g = vertex_complemented_corona(g, load_satellites(c, g)).graph;
    if (c.u < 0 || c.v < 0 || c.u >= g.order() || c.v >= g.order()) throw InputError("--u/--v out of range");
    if (c.u == c.v) throw InputError("--u and --v must differ");
    const auto d = laplacian_decomposition(g, c.tol);
    const auto verdict = certify_lpst(d, char_poly_exact(laplacian(g)), c.u, c.v, {c.support_tol, c.support_tol});

    Sink sink(c.out);
    auto& os = sink.os();
    if (c.format == "json") {
        os << json(verdict).dump(2) << '\n';
        return 0;
    }
    os << std::setprecision(12);
    auto flag = [](bool b) { return b ? "pass" : "fail"; };
    os << "vertices " << c.u << " -> " << c.v << '\n';
    os << "support";
    for (double x : verdict.support) os << ' ' << x;
    os << '\n';
    os << "strong cospectrality " << flag(verdict.cospectral) << '\n';
    os << "integral support " << flag(verdict.all_integer);
    if (verdict.non_integer_witness) os << " (witness " << *verdict.non_integer_witness << ')';
    os << '\n';
    if (verdict.parity_evaluated) {
        os << "parity " << flag(verdict.parity_ok) << " gcd " << *verdict.support_gcd;
        if (verdict.parity_witness) os << " (witness " << *verdict.parity_witness << ')';
        os << '\n';
    }
    os << "lpst " << (verdict.has_lpst ? "yes" : "no");
    if (verdict.min_time) os << " min_time " << *verdict.min_time;
    os << '\n';
    return 0;
}

int cmd_pgst(const Config& c) {
    require_format(c, {"json", "text", "csv"});
    const auto g = load_base(c);
    const auto hs = load_satellites(c, g);
    PgstOptions opt;
    opt.support_tol = opt.cospectral_tol = c.support_tol;
    opt.group_tol = c.tol;
    opt.threads = worker_count();
    opt.override_hypotheses = c.override_hypotheses;
    const auto rep = pgst_search(g, hs, c.u, c.v, c.kappa_max, c.target, opt);
    const bool refused = rep.status == PgstReport::Status::refused;
    for (const auto& r : rep.refusals) std::cerr << (refused ? "refused: " : "note: ") << r << '\n';

    auto rows = [&] {
        std::vector<FidelityPoint> pts;
        for (const auto& s : rep.samples) pts.push_back({s.time, s.fidelity});
        return pts;
    };
    if (!c.csv.empty()) {
        std::ofstream f(c.csv);
        if (!f) throw InputError("cannot open csv file '" + c.csv + "'");
        write_fidelity_csv(f, rows());
    }

    Sink sink(c.out);
    auto& os = sink.os();
    if (c.format == "json") {
        os << json(rep).dump(2) << '\n';
    } else if (c.format == "csv") {
        write_fidelity_csv(os, rows());
    } else {
        os << std::setprecision(12);
        os << "status " << (refused ? "refused" : "completed") << '\n';
        for (const auto& r : rep.refusals) os << "reason " << r << '\n';
        if (rep.e) os << "e " << *rep.e << " divisibility " << (rep.divisibility_ok ? "ok" : "fails") << '\n';
        os << "evaluated " << rep.samples.size() << " values of kappa\n";
        if (rep.best) {
            os << "best kappa " << rep.best->kappa << " T " << rep.best->time << " fidelity " << rep.best->fidelity
               << '\n';
        }
        os << "target " << rep.target << (rep.reached_target ? " reached" : " not reached") << '\n';
    }
    return refused ? kExitRefused : 0;
}

int cmd_sweep(const Config& c) {
    require_format(c, {"csv", "json"});
    auto g = load_base(c);
    if (!c.satellites.empty()) g = vertex_complemented_corona(g, load_satellites(c, g)).graph;
    if (c.u < 0 || c.v < 0 || c.u >= g.order() || c.v >= g.order()) throw InputError("--u/--v out of range");
    if (c.steps < 1 || !(c.t_max >= 0.0)) throw InputError("need --steps >= 1 and --t-max >= 0");
    std::vector<double> grid;
    for (int i = 0; i <= c.steps; ++i) grid.push_back(c.t_max * i / c.steps);
    const auto pts = fidelity_sweep(laplacian_decomposition(g, c.tol), c.u, c.v, grid);
    Sink sink(c.out);
    if (c.format == "csv") {
        write_fidelity_csv(sink.os(), pts);
    } else {
        json j = json::array();
        for (const auto& p : pts) j.push_back({{"t", p.t}, {"fidelity", p.fidelity}});
        sink.os() << j.dump(2) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Laplacian spectra and state transfer on vertex complemented coronas"};
    app.require_subcommand(1);
    Config cfg;

    auto common = [&](CLI::App* sub, bool need_satellites) {
        sub->add_option("--base", cfg.base, "g6:<graph6> | edges:<path> | path:<n> | complete:<n> | cycle:<n> | empty:<n>")
            ->required();
        auto* s = sub->add_option("--satellites", cfg.satellites, "uniform:<family>:<size> or a list such as P1,P2,K3");
        if (need_satellites) s->required();
        sub->add_option("--tol", cfg.tol, "eigenvalue grouping tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--out", cfg.out, "output file (default stdout)");
        sub->add_option("--format", cfg.format, "json | text | csv")
            ->check(CLI::IsMember({"json", "text", "csv"}));
    };
    auto vertices = [&](CLI::App* sub) {
        sub->add_option("--u", cfg.u, "source vertex")->required()->check(CLI::NonNegativeNumber);
        sub->add_option("--v", cfg.v, "target vertex")->required()->check(CLI::NonNegativeNumber);
        sub->add_option("--support-tol", cfg.support_tol, "eigenvalue support / cospectrality tolerance")
            ->check(CLI::PositiveNumber);
    };

    auto* build = app.add_subcommand("build", "construct the corona and its vertex labeling");
    common(build, true);
    auto* spectrum = app.add_subcommand("spectrum", "closed-form and numeric Laplacian spectra side by side");
    common(spectrum, true);
    auto* lpst = app.add_subcommand("lpst", "certify Laplacian perfect state transfer (base graph, or corona with --satellites)");
    common(lpst, false);
    vertices(lpst);
    auto* pgst = app.add_subcommand("pgst", "search structured times for pretty good state transfer between backbone vertices");
    common(pgst, true);
    vertices(pgst);
    pgst->add_option("--kappa-max", cfg.kappa_max, "largest kappa searched")->check(CLI::PositiveNumber);
    pgst->add_option("--target", cfg.target, "fidelity target in (0,1)")->check(CLI::Range(0.0, 1.0));
    pgst->add_flag("--override", cfg.override_hypotheses, "search even if the hypotheses fail");
    pgst->add_option("--csv", cfg.csv, "also write the searched (t, fidelity) rows as CSV");
    auto* sweep = app.add_subcommand("sweep", "fidelity on a uniform time grid");
    common(sweep, false);
    vertices(sweep);
    sweep->add_option("--t-max", cfg.t_max, "end of the time grid");
    sweep->add_option("--steps", cfg.steps, "number of grid intervals");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    // sweep defaults to CSV
    if (sweep->parsed() && sweep->count("--format") == 0) cfg.format = "csv";

    try {
        if (build->parsed()) return cmd_build(cfg);
        if (spectrum->parsed()) return cmd_spectrum(cfg);
        if (lpst->parsed()) return cmd_lpst(cfg);
        if (pgst->parsed()) return cmd_pgst(cfg);
        return cmd_sweep(cfg);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const Graph6Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}
