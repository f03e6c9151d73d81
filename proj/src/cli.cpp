#include "detnodes/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "detnodes/config.hpp"
#include "detnodes/errors.hpp"
#include "detnodes/experiments.hpp"

namespace detnodes {

namespace {

namespace fs = std::filesystem;

const char* const kSubcommands[] = {"simulate", "steady",   "verify-lemmas", "estimate-constants", "thresholds",
                                    "theorem1", "theorem2", "theorem3",      "sweep"};

std::string timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y%m%d-%H%M%S");
    return s.str();
}

std::ofstream open_file(const fs::path& path)
{
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path.string());
    return f;
}

ForcingSpec forcing_f(const RunConfig& cfg, const Grid& grid)
{
    const std::string kind = cfg.get("forcing");
    if (kind == "zero") return ForcingSpec::zero(grid);
    const ScalarField base = mode_sum(grid, cfg.modes("forcing_base"));
    if (kind == "constant") return ForcingSpec::constant(base);
    return ForcingSpec::converging(base, mode_sum(grid, cfg.modes("forcing_transient")), cfg.number("forcing_rate"));
}

ForcingSpec forcing_g(const RunConfig& cfg, const Grid& grid, const ForcingSpec& f)
{
    const std::vector<Mode> extra = cfg.modes("g_transient");
    if (extra.empty()) return f;
    const ScalarField transient = f.transient() + mode_sum(grid, extra);
    return ForcingSpec::converging(f.base(), transient, cfg.number("forcing_rate"));
}

ConstantLedger ledger_from(const RunConfig& cfg, const Grid& grid)
{
    ConstantLedger ledger;
    const bool given = cfg.has("C_B") && cfg.has("C4") && cfg.has("C5");
    if (!given) {
        const int cells = cfg.integer("lemma_grid");
        const Grid lemma_grid = make_grid(grid.domain(), cells - 1, cells - 1);
        LedgerOptions opts;
        opts.k = cfg.number("k");
        opts.p = cfg.number("p");
        opts.J = cfg.integer("lemma_J");
        opts.count = cfg.integer("lemma_count");
        opts.seed = static_cast<std::uint64_t>(cfg.integer("seed"));
        opts.ascent = cfg.flag("lemma_ascent");
        ledger = estimate_ledger(lemma_grid, opts);
    }
    ledger.set("a1", exact_a1(grid, cfg.number("k")), Provenance::exact, "first discrete eigenfield");
    if (!ledger.has("a4")) ledger.set("a4", std::sqrt(cfg.number("k")), Provenance::exact, "isotropic coefficient");
    for (const char* name : {"C_B", "C1", "C2", "C3", "C4", "C5", "a1", "a4"}) {
        if (cfg.has(name)) ledger.set(name, cfg.number(name), Provenance::assumed, "config");
    }
    return ledger;
}

void add_ledger_values(ExperimentReport& r, const ConstantLedger& ledger)
{
    for (const auto& [name, e] : ledger.entries()) r.set("ledger." + name, e.value);
}

NodeSet config_nodes(const RunConfig& cfg, const Grid& grid)
{
    const Placement placement = cfg.get("placement") == "closed" ? Placement::closed : Placement::interior;
    return nodes_for_density(grid.domain(), grid, cfg.number("nodes_density"), placement);
}

void write_nodes(ExperimentReport& r, const fs::path& dir, const NodeSet& ns)
{
    fs::create_directories(dir);
    auto f = open_file(dir / "nodes.csv");
    write_nodes_csv(f, ns);
    r.files.push_back((dir / "nodes.csv").string());
}

PairScenario pair_scenario(const RunConfig& cfg, const Grid& grid)
{
    const ForcingSpec f = forcing_f(cfg, grid);
    PairScenario sc{cfg.solver(), f, forcing_g(cfg, grid, f), mode_sum(grid, cfg.modes("u0")),
                    mode_sum(grid, cfg.modes("v0"))};
    sc.sample_every = cfg.integer("sample_every");
    sc.tol_V = cfg.number("tol_V");
    sc.tol_C = cfg.number("tol_C");
    sc.node_tol = cfg.number("node_tol");
    sc.energy_tol = cfg.number("energy_tol");
    sc.gronwall_tol = cfg.number("gronwall_tol");
    return sc;
}

ExperimentReport simulate(const RunConfig& cfg, const fs::path& dir)
{
    const Grid grid = cfg.grid();
    const SolverConfig sc = cfg.solver();
    const Trajectory traj =
        solve(mode_sum(grid, cfg.modes("u0")), forcing_f(cfg, grid), sc, cfg.integer("sample_every"));
    ExperimentReport r;
    r.scenario = "simulate";
    const StepDiagnostics& last = traj.diagnostics.back();
    r.set("final_l2", last.l2);
    r.set("final_h1", last.h1);
    r.set("final_da", last.da);
    r.set("samples", static_cast<double>(traj.size()));
    r.add_check("completed", true);
    fs::create_directories(dir);
    auto d = open_file(dir / "diagnostics.csv");
    write_diagnostics_csv(d, traj);
    Trajectory ends;
    ends.times = {traj.times.front(), traj.times.back()};
    ends.snapshots = {traj.snapshots.front(), traj.snapshots.back()};
    auto s = open_file(dir / "snapshots.csv");
    write_snapshots_csv(s, ends);
    r.files.push_back((dir / "diagnostics.csv").string());
    r.files.push_back((dir / "snapshots.csv").string());
    return r;
}

ExperimentReport steady(const RunConfig& cfg, const fs::path& dir)
{
    const Grid grid = cfg.grid();
    const double k = cfg.number("k");
    const double p = cfg.number("p");
    const double tol = cfg.number("newton_tol");
    StationaryResult res = [&] {
        if (cfg.get("forcing") == "zero") return find_nontrivial(k, p, grid, tol);
        NewtonOptions opts;
        opts.tol = tol;
        return newton_solve(ScalarField(grid), forcing_f(cfg, grid).limit(), k, p, opts);
    }();
    ExperimentReport r;
    r.scenario = "steady";
    r.set("residual", res.residual);
    r.set("iterations", res.iterations);
    r.set("sup", sup_norm(res.field));
    r.set("da_norm", da_norm(res.field, k));
    r.add_check("newton_converged", res.converged, to_string(res.status));
    fs::create_directories(dir);
    Trajectory one;
    one.times = {0.0};
    one.snapshots = {res.field};
    auto f = open_file(dir / "field.csv");
    write_snapshots_csv(f, one);
    r.files.push_back((dir / "field.csv").string());
    return r;
}

ExperimentReport verify_lemmas(const RunConfig& cfg, const fs::path& dir, bool fresh_check)
{
    const int cells = cfg.integer("lemma_grid");
    const Grid grid = make_grid(cfg.grid().domain(), cells - 1, cells - 1);
    const auto seed = static_cast<std::uint64_t>(cfg.integer("seed"));
    const FunctionFamily fam = random_band_limited(grid, cfg.integer("lemma_J"), cfg.integer("lemma_count"), seed);
    const Placement placement = cfg.get("placement") == "closed" ? Placement::closed : Placement::interior;
    std::vector<NodeSet> nodesets;
    std::vector<double> densities;
    for (double d : cfg.list("densities")) {
        nodesets.push_back(nodes_for_density(grid.domain(), grid, d, placement));
        densities.push_back(density(nodesets.back(), grid));
    }
    EstimateOptions eo;
    eo.ascent = cfg.flag("lemma_ascent");
    const LemmaEstimates est = estimate_constants(fam, nodesets, eo);

    ExperimentReport r;
    r.scenario = fresh_check ? "verify-lemmas" : "estimate-constants";
    r.set("C1", est.C1);
    r.set("C2", est.C2);
    r.set("C3", est.C3);
    r.set("C4", est.C4);
    r.set("C5", est.C5);
    r.set("ascended_fields", static_cast<double>(est.ascended));
    fs::create_directories(dir);
    auto f = open_file(dir / "constants.csv");
    write_constants_csv(f, est, fam.spec(), densities);
    r.files.push_back((dir / "constants.csv").string());

    if (fresh_check) {
        ConstantLedger ledger;
        est.record(ledger, fam.spec());
        const FunctionFamily fresh = random_band_limited(grid, fam.J, fam.count, seed + 1000003);
        int violations = 0;
        for (std::size_t s = 0; s < nodesets.size(); ++s) {
            for (const ScalarField& u : fresh.fields) {
                for (Lemma which : {Lemma::sup, Lemma::l2, Lemma::h1}) {
                    if (!check_lemma(u, nodesets[s], densities[s], which, ledger).satisfied) ++violations;
                }
            }
        }
        r.set("fresh_violations", violations);
        r.add_check("fresh_family_no_violations", violations == 0, std::to_string(violations) + " violations");
    } else {
        const ConstantLedger ledger = ledger_from(cfg, cfg.grid());
        auto l = open_file(dir / "ledger.csv");
        l.precision(17);
        l << "name,value,provenance,note\n";
        for (const auto& [name, e] : ledger.entries()) {
            l << name << ',' << e.value << ',' << to_string(e.provenance) << ',' << e.note << '\n';
        }
        r.files.push_back((dir / "ledger.csv").string());
        add_ledger_values(r, ledger);
        r.add_check("constants_finite", std::isfinite(est.C1 + est.C2 + est.C3 + est.C4 + est.C5));
    }
    return r;
}

ExperimentReport thresholds(const RunConfig& cfg, std::ostream& out)
{
    cfg.require({"C_B", "C5", "M_f", "M_g"});
    const double C_B = cfg.number("C_B");
    const double C5 = cfg.number("C5");
    const double p = cfg.number("p");
    const double M_f = cfg.number("M_f");
    const double M_g = cfg.number("M_g");
    const double M_inf = cfg.has("M_finf") ? cfg.number("M_finf") : M_f;
    ExperimentReport r;
    r.scenario = "thresholds";
    const double d1 = delta1(C_B, C5, M_f, p);
    const double d2 = delta2(C_B, C5, M_f, p, delta1(C_B, C5, M_inf, p));
    const double d3 = delta3(C_B, C5, M_f, M_g, p);
    r.set("delta1", d1);
    r.set("delta2", d2);
    r.set("delta3", d3);
    r.add_check("thresholds_positive", d1 > 0.0 && d2 > 0.0 && d3 > 0.0);
    const auto old = out.precision(17);
    out << "delta1=" << d1 << '\n' << "delta2=" << d2 << '\n' << "delta3=" << d3 << '\n';
    out.precision(old);
    return r;
}

ExperimentReport theorem1(const RunConfig& cfg, const fs::path& dir)
{
    const Grid grid = cfg.grid();
    const NodeSet ns = config_nodes(cfg, grid);
    const ConstantLedger ledger = ledger_from(cfg, grid);
    ExperimentReport r = run_theorem1(cfg.number("k"), cfg.number("p"), grid, ns, cfg.number("tol"), ledger);
    write_nodes(r, dir, ns);
    return r;
}

ExperimentReport theorem2(const RunConfig& cfg, const fs::path& dir)
{
    if (cfg.get("forcing") != "converging") throw ConfigError("theorem2 needs forcing = converging");
    const Grid grid = cfg.grid();
    const NodeSet ns = config_nodes(cfg, grid);
    const ConstantLedger ledger = ledger_from(cfg, grid);
    ConvergingScenario sc{cfg.solver(), forcing_f(cfg, grid), mode_sum(grid, cfg.modes("u0"))};
    sc.sample_every = cfg.integer("sample_every");
    sc.tol = cfg.number("tol");
    sc.energy_tol = cfg.number("energy_tol");
    ExperimentReport r = run_theorem2(sc, ns, ledger);
    write_nodes(r, dir, ns);
    return r;
}

ExperimentReport theorem3(const RunConfig& cfg, const fs::path& dir)
{
    const Grid grid = cfg.grid();
    const NodeSet ns = config_nodes(cfg, grid);
    const ConstantLedger ledger = ledger_from(cfg, grid);
    ExperimentReport r = run_theorem3(pair_scenario(cfg, grid), ns, ledger);
    write_nodes(r, dir, ns);
    return r;
}

ExperimentReport sweep(const RunConfig& cfg, const fs::path& dir)
{
    const Grid grid = cfg.grid();
    const ConstantLedger ledger = ledger_from(cfg, grid);
    const Placement placement = cfg.get("placement") == "closed" ? Placement::closed : Placement::interior;
    const std::vector<SweepRow> rows =
        sweep_density(pair_scenario(cfg, grid), cfg.list("densities"), ledger, placement);
    ExperimentReport r;
    r.scenario = "sweep";
    std::size_t ok = 0;
    for (const SweepRow& row : rows) {
        const std::string key = "target_" + std::to_string(row.target);
        r.set(key + ".d_N", row.d_N);
        r.set(key + ".N", row.N);
        r.set(key + ".lambda", row.lambda);
        r.set(key + ".final_h1", row.final_h1);
        r.set(key + ".pass", row.pass ? 1.0 : 0.0);
        if (!row.error.empty()) r.warnings.push_back(key + ": " + row.error);
        if (row.error.empty()) ++ok;
    }
    r.add_check("sweep_rows_computed", ok > 0, std::to_string(ok) + " of " + std::to_string(rows.size()));
    fs::create_directories(dir);
    auto f = open_file(dir / "sweep.csv");
    write_sweep_csv(f, rows);
    r.files.push_back((dir / "sweep.csv").string());
    return r;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Determining-node experiments for a semilinear heat equation"};
    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed override");
    app.require_subcommand(1, 1);
    app.fallthrough();
    for (const char* name : kSubcommands) app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return exit_config_error;
    }
    const std::string sub = app.get_subcommands().front()->get_name();

    try {
        if (config_path.empty()) throw ConfigError("--config is required");
        RunConfig cfg = parse_config(read_file(config_path));
        if (seed >= 0) cfg.set("seed", std::to_string(seed));
        if (sub != "thresholds") cfg.require({"scenario", "grid"});
        const std::string label = cfg.has("scenario") ? cfg.get("scenario") : sub;
        const fs::path dir = out_dir.empty() ? fs::path("runs") / (label + "-" + timestamp()) : fs::path(out_dir);

        ExperimentReport r;
        if (sub == "simulate") r = simulate(cfg, dir);
        else if (sub == "steady") r = steady(cfg, dir);
        else if (sub == "verify-lemmas") r = verify_lemmas(cfg, dir, true);
        else if (sub == "estimate-constants") r = verify_lemmas(cfg, dir, false);
        else if (sub == "thresholds") r = thresholds(cfg, out);
        else if (sub == "theorem1") r = theorem1(cfg, dir);
        else if (sub == "theorem2") r = theorem2(cfg, dir);
        else if (sub == "theorem3") r = theorem3(cfg, dir);
        else r = sweep(cfg, dir);

        r.config = cfg.echo();
        emit(r, dir);
        out << sub << ": " << (r.pass() ? "pass" : "FAIL") << " (" << dir.string() << ")\n";
        for (const Check& c : r.checks) {
            if (!c.passed) out << "  failed check " << c.name << ": " << c.detail << '\n';
        }
        return r.pass() ? exit_ok : exit_check_failure;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const GridMismatch& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const BlowUpError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical_failure;
    } catch (const std::runtime_error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical_failure;
    }
}

}  // namespace detnodes
