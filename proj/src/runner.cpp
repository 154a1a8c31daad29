#include "ezbsde/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ezbsde {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void apply_overrides(ExperimentConfig& cfg, const RunOverrides& ov) {
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.paths) {
        if (*ov.paths < 2) throw std::invalid_argument("--paths must be >= 2");
        cfg.M = *ov.paths;
    }
    if (ov.steps) {
        if (*ov.steps < 1) throw std::invalid_argument("--steps must be >= 1");
        cfg.N = *ov.steps;
    }
    if (ov.out) cfg.out_dir = *ov.out;
}

std::vector<std::pair<double, double>> default_bounds_grid(
    const MarketModel& model, double T) {
    std::vector<double> xs;
    if (model.state_degenerate()) {
        xs.push_back(model.x0);
    } else if (model.kind == ModelKind::Heston) {
        // variance lives on (0, inf); cover deep troughs and spikes
        const double hi = std::max(6.0 * model.l, 4.0 * model.x0);
        for (int i = 0; i <= 24; ++i)
            xs.push_back(1e-4 + (hi - 1e-4) * i / 24.0);
    } else {
        // OU factor: +-0.6 is far outside the stationary range; the r/kappa
        // truncation at +-100 keeps the analytic parts of the bounds exact
        for (int i = 0; i <= 24; ++i) xs.push_back(-0.6 + 1.2 * i / 24.0);
    }
    std::vector<std::pair<double, double>> grid;
    for (double t : {0.0, 0.5 * T, T})
        for (double x : xs) grid.emplace_back(t, x);
    return grid;
}

GeneratorContext context_from_config(const ExperimentConfig& cfg) {
    return make_context(cfg.model, cfg.prefs, cfg.lambda, cfg.chat_set, cfg.T,
                        default_bounds_grid(cfg.model, cfg.T));
}

namespace {

struct CoreArtifacts {
    GeneratorContext ctx;
    TimeGrid grid;
    PathSet paths;
    BsdeSolution sol;
};

CoreArtifacts solve_core(const ExperimentConfig& cfg) {
    CoreArtifacts a;
    a.ctx = context_from_config(cfg);
    a.grid = TimeGrid{cfg.T, cfg.N};
    a.paths = simulate_state(cfg.model, a.grid, cfg.M, cfg.seed);
    SolverConfig scfg;
    scfg.degree = cfg.degree;
    scfg.kz_override = cfg.kz;
    a.sol = solve_bsde(a.ctx, a.grid, a.paths, scfg);
    return a;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
    return out;
}

json report_to_json(const VerificationReport& rep, bool with_bounds) {
    json j;
    j["C1"] = rep.C1;
    j["y_upper"] = rep.y_upper;
    j["C2_0"] = rep.C2_0;
    j["lfo"] = {{"holds", rep.lfo_holds}, {"min_margin", rep.lfo_min}};
    j["lyapunov"] = {{"valid", rep.lyapunov_valid},
                     {"sup", rep.lyapunov_sup},
                     {"sup_refined", rep.lyapunov_sup_refined}};
    j["conditions"] = json::array();
    for (const auto& c : rep.prop_conditions)
        j["conditions"].push_back({{"name", c.name},
                                   {"holds", c.holds},
                                   {"lhs", c.lhs},
                                   {"rhs", c.rhs},
                                   {"note", c.note}});
    if (with_bounds) {
        j["ybounds"] = {{"upper_ok", rep.ybounds.upper_ok},
                        {"worst_upper", rep.ybounds.worst_upper},
                        {"lower_checked", rep.ybounds.lower_checked},
                        {"lower_ok", rep.ybounds.lower_ok},
                        {"worst_lower", rep.ybounds.worst_lower}};
    } else {
        j["ybounds"] = nullptr;
    }
    j["notes"] = rep.notes;
    return j;
}

void print_report(const VerificationReport& rep, bool with_bounds) {
    std::printf("verification report\n");
    std::printf("  C1 = %.6g, Y upper bound C1*T = %.6g, C2(0) = %.6g\n",
                rep.C1, rep.y_upper, rep.C2_0);
    std::printf("  local-Lipschitz margin %.6g (%s)\n", rep.lfo_min,
                rep.lfo_holds ? "positive" : "NOT positive");
    if (rep.lyapunov_valid)
        std::printf("  lyapunov scan sup %.6g (refined %.6g)\n",
                    rep.lyapunov_sup, rep.lyapunov_sup_refined);
    for (const auto& c : rep.prop_conditions)
        std::printf("  %-10s %-5s lhs = %-12.6g rhs = %-12.6g %s\n",
                    c.name.c_str(), c.holds ? "ok" : "FAIL", c.lhs, c.rhs,
                    c.note.c_str());
    if (with_bounds) {
        std::printf("  Y upper bound: %s (worst excess %.3g)\n",
                    rep.ybounds.upper_ok ? "ok" : "VIOLATED",
                    rep.ybounds.worst_upper);
        if (rep.ybounds.lower_checked)
            std::printf("  Y lower bound: %s (worst margin %.3g)\n",
                        rep.ybounds.lower_ok ? "ok" : "VIOLATED",
                        rep.ybounds.worst_lower);
    }
    for (const auto& n : rep.notes) std::printf("  note: %s\n", n.c_str());
}

}  // namespace

SolveArtifacts solve_experiment(const ExperimentConfig& cfg) {
    CoreArtifacts core = solve_core(cfg);
    SolveArtifacts art{std::move(core.ctx), core.grid, std::move(core.paths),
                       std::move(core.sol), StrategyResult{}};
    art.strat = run_optimal(art.ctx, art.grid, art.paths, art.sol, cfg.omega);
    return art;
}

int run_solve(const ExperimentConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    SolveArtifacts art = solve_experiment(cfg);
    VerificationReport rep = verify_all(art.ctx, &art.sol, &art.paths);

    const int N = cfg.N;
    const int M = cfg.M;
    const double x0 = cfg.model.x0;
    const size_t stride = static_cast<size_t>(N) + 1;

    {
        auto out = open_out(fs::path(cfg.out_dir) / "solution.csv");
        out << "step,t,Y0_at_x0,Z0_at_x0,R2_Y,R2_Z,trunc_hits\n";
        for (int i = 0; i <= N; ++i) {
            const BsdeStep& st = art.sol.steps[i];
            out << i << ',' << fmt17(art.grid.t(i)) << ','
                << fmt17(art.sol.y_at(i, x0)) << ','
                << fmt17(art.sol.z_at(i, x0)) << ',' << fmt17(st.r2_y) << ','
                << fmt17(st.r2_z) << ',' << st.trunc_hits << '\n';
        }
    }
    {
        auto out = open_out(fs::path(cfg.out_dir) / "strategy.csv");
        out << "step,t,x,pi_star,c_hat_star\n";
        for (int i = 0; i <= N; ++i) {
            double sx = 0, spi = 0, sch = 0;
            for (int p = 0; p < M; ++p) {
                sx += art.paths.x(p, i);
                spi += art.strat.pi[p * stride + i];
                sch += art.strat.chat[p * stride + i];
            }
            out << i << ',' << fmt17(art.grid.t(i)) << ',' << fmt17(sx / M)
                << ',' << fmt17(spi / M) << ',' << fmt17(sch / M) << '\n';
        }
    }
    {
        // state profile of the controls at mid-horizon, over the visited range
        const int mid = N / 2;
        const double tm = art.grid.t(mid);
        std::vector<double> xs;
        if (cfg.model.state_degenerate()) {
            xs.push_back(x0);
        } else {
            double lo = art.paths.x(0, mid), hi = lo;
            for (int p = 0; p < M; ++p) {
                lo = std::min(lo, art.paths.x(p, mid));
                hi = std::max(hi, art.paths.x(p, mid));
            }
            for (int k = 0; k <= 40; ++k)
                xs.push_back(lo + (hi - lo) * k / 40.0);
        }
        auto out = open_out(fs::path(cfg.out_dir) / "profile.csv");
        out << "x,pi_star,c_hat_star\n";
        for (double x : xs) {
            PortfolioChoice pc =
                optimal_portfolio(tm, x, art.sol.z_at(mid, x), art.ctx);
            double ch = optimal_consumption(art.sol.y_at(mid, x), cfg.prefs,
                                            art.ctx.setC);
            out << fmt17(x) << ',' << fmt17(pc.pi) << ',' << fmt17(ch) << '\n';
        }
    }
    {
        json s;
        s["Y0"] = art.strat.Y0;
        s["V0_closed_form"] = art.strat.V0_closed;
        s["V0_simulated"] = art.strat.V0_sim;
        s["stderr"] = art.strat.se_V0;
        auto out = open_out(fs::path(cfg.out_dir) / "summary.json");
        out << s.dump(2) << '\n';
    }
    {
        auto out = open_out(fs::path(cfg.out_dir) / "verify.json");
        out << report_to_json(rep, true).dump(2) << '\n';
    }

    std::printf("Y0 = %.8g   V0(closed) = %.8g   V0(simulated) = %.8g +- %.2g\n",
                art.strat.Y0, art.strat.V0_closed, art.strat.V0_sim,
                art.strat.se_V0);
    print_report(rep, true);
    const bool bounds_ok = rep.ybounds.upper_ok && rep.ybounds.lower_ok;
    if (!bounds_ok) std::printf("a priori Y bounds violated\n");
    return bounds_ok ? 0 : 2;
}

int run_verify(const ExperimentConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    GeneratorContext ctx = context_from_config(cfg);
    VerificationReport rep = verify_all(ctx, nullptr, nullptr);
    {
        auto out = open_out(fs::path(cfg.out_dir) / "verify.json");
        out << report_to_json(rep, false).dump(2) << '\n';
    }
    print_report(rep, false);
    return 0;
}

int run_sweep(const ExperimentConfig& cfg, const std::string& param,
              const std::vector<double>& values) {
    if (values.empty())
        throw std::invalid_argument("sweep needs at least one value");
    const bool up = param == "pi_upper";
    const bool lo = param == "pi_lower";
    const bool ga = param == "gamma";
    const bool ps = param == "psi";
    if (!(up || lo || ga || ps))
        throw std::invalid_argument(
            "unknown sweep parameter '" + param +
            "' (expected pi_upper / pi_lower / gamma / psi)");

    fs::create_directories(cfg.out_dir);
    auto out = open_out(fs::path(cfg.out_dir) / "sweep.csv");
    out << "param,value,pi_star_0,c_hat_star_0,Y0,V0\n";
    for (double v : values) {
        ExperimentConfig c = cfg;
        const bool base_iv = cfg.lambda.kind == ConstraintSet::Kind::Interval;
        if (up) {
            double l0 = base_iv ? cfg.lambda.ivals[0][0] : 0.0;
            c.lambda = make_interval(std::min(l0, v), v);
        } else if (lo) {
            double h0 = base_iv ? cfg.lambda.ivals[0][1] : 1.0;
            c.lambda = make_interval(v, std::max(h0, v));
        } else if (ga) {
            c.prefs = make_preferences(cfg.prefs.delta, v, cfg.prefs.psi);
        } else {
            c.prefs = make_preferences(cfg.prefs.delta, cfg.prefs.gamma, v);
        }
        CoreArtifacts a = solve_core(c);
        const double z0 = a.sol.z_at(0, c.model.x0);
        const double pi0 = optimal_portfolio(0.0, c.model.x0, z0, a.ctx).pi;
        const double c0 =
            optimal_consumption(a.sol.y_at(0, c.model.x0), c.prefs, a.ctx.setC);
        const double om = 1.0 - c.prefs.gamma;
        // utility at t=0 from the solved Y0: omega^{1-g}/(1-g) e^{Y0}
        const double V0 = std::pow(cfg.omega, om) / om * std::exp(a.sol.Y0);
        out << param << ',' << fmt17(v) << ',' << fmt17(pi0) << ','
            << fmt17(c0) << ',' << fmt17(a.sol.Y0) << ',' << fmt17(V0) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// figure data

namespace {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::string origin;

    int col(const std::string& name) const {
        for (size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        throw std::runtime_error("artifact '" + origin + "' has no column '" +
                                 name + "'");
    }
    std::vector<double> numcol(const std::string& name) const {
        int c = col(name);
        std::vector<double> v;
        v.reserve(rows.size());
        for (const auto& r : rows) {
            const char* s = r[c].c_str();
            char* end = nullptr;
            double x = std::strtod(s, &end);
            if (end == s)
                throw std::runtime_error("artifact '" + origin +
                                         "': non-numeric cell '" + r[c] + "'");
            v.push_back(x);
        }
        return v;
    }
};

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

Table read_table(const fs::path& p) {
    std::ifstream in(p);
    if (!in)
        throw std::runtime_error("missing artifact '" + p.string() +
                                 "' (run plotdata with --generate)");
    Table t;
    t.origin = p.string();
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("artifact '" + p.string() + "' is empty");
    t.header = split_csv(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != t.header.size())
            throw std::runtime_error("artifact '" + p.string() +
                                     "': ragged row");
        t.rows.push_back(std::move(cells));
    }
    return t;
}

void write_dat(const fs::path& p, const std::string& header,
               const std::vector<std::vector<double>>& cols) {
    for (const auto& c : cols)
        if (c.size() != cols[0].size())
            throw std::runtime_error("column length mismatch assembling '" +
                                     p.string() + "'");
    auto out = open_out(p);
    out << header << '\n';
    for (size_t r = 0; r < cols[0].size(); ++r) {
        for (size_t c = 0; c < cols.size(); ++c)
            out << (c ? " " : "") << fmt17(cols[c][r]);
        out << '\n';
    }
}

void write_stub(const fs::path& p, const std::vector<std::string>& lines) {
    auto out = open_out(p);
    for (const auto& l : lines) out << l << '\n';
}

ExperimentConfig plot_bs(int M, int N, std::uint64_t seed) {
    ExperimentConfig c;
    c.model = make_black_scholes(0.03, 0.05, 0.17);
    c.prefs = make_preferences(0.08, 2.0, 1.2);
    c.lambda = make_interval(0.0, 0.5);
    c.T = 30.0;
    c.N = N;
    c.M = M;
    c.seed = seed;
    return c;
}

ExperimentConfig plot_ld(int M, int N, std::uint64_t seed) {
    ExperimentConfig c;
    c.model = make_linear_diffusion(0.0226, 0.0189, 0.0436, 0.0014, 1.0, 0.05,
                                    1.0, -0.935);
    c.prefs = make_preferences(0.0052, 2.0, 1.2);
    c.lambda = make_interval(0.0, 0.5);
    c.T = 1.0;
    c.N = N;
    c.M = M;
    c.seed = seed;
    return c;
}

ExperimentConfig plot_heston(int M, int N, std::uint64_t seed) {
    ExperimentConfig c;
    c.model = make_heston(5.0, 0.0225, 0.25, 0.05, 0.0, 1.0, 0.47, -0.5);
    c.prefs = make_preferences(0.08, 2.0, 1.2);
    c.lambda = make_interval(0.0, 0.1);
    c.T = 10.0;
    c.N = N;
    c.M = M;
    c.seed = seed;
    return c;
}

}  // namespace

int emit_plotdata(const std::string& dir, bool generate, int M, int N,
                  std::uint64_t seed) {
    const fs::path base(dir);
    const fs::path runs = base / "runs";
    fs::create_directories(base);
    int rc = 0;

    if (generate) {
        auto solve_into = [&](ExperimentConfig c, const std::string& name) {
            c.out_dir = (runs / name).string();
            std::printf("-- %s\n", name.c_str());
            rc = std::max(rc, run_solve(c));
        };

        {
            ExperimentConfig c = plot_bs(M, N, seed);
            c.out_dir = (runs / "fig1a").string();
            std::printf("-- fig1a (sweep pi_upper)\n");
            rc = std::max(rc, run_sweep(c, "pi_upper",
                                        {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7,
                                         0.8, 0.9, 1.0}));
        }
        {
            ExperimentConfig c = plot_bs(M, N, seed);
            c.lambda = make_interval(0.0, 1.0);
            c.out_dir = (runs / "fig1b").string();
            std::printf("-- fig1b (sweep pi_lower)\n");
            rc = std::max(rc, run_sweep(c, "pi_lower",
                                        {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6,
                                         0.7, 0.8, 0.9}));
        }

        solve_into(plot_bs(M, N, seed), "fig2a_con");
        {
            ExperimentConfig c = plot_bs(M, N, seed);
            c.lambda = make_full_space(1);
            solve_into(c, "fig2a_unc");
        }
        for (double psi : {1.5, 2.0}) {
            ExperimentConfig c = plot_bs(M, N, seed);
            c.prefs = make_preferences(0.08, 2.0, psi);
            solve_into(c, "fig2b_psi" + std::string(psi == 1.5 ? "1.5" : "2.0"));
        }
        for (double g : {2.0, 5.0, 8.0}) {
            ExperimentConfig c = plot_ld(M, N, seed);
            c.prefs = make_preferences(0.0052, g, 1.2);
            solve_into(c, "fig3_gamma" + std::to_string(static_cast<int>(g)));
        }
        for (double g : {2.0, 5.0, 8.0}) {
            ExperimentConfig c = plot_heston(M, N, seed);
            c.prefs = make_preferences(0.08, g, 1.2);
            solve_into(c, "fig5_gamma" + std::to_string(static_cast<int>(g)));
        }
        for (double psi : {1.5, 2.0}) {
            ExperimentConfig c = plot_heston(M, N, seed);
            c.prefs = make_preferences(0.08, 2.0, psi);
            solve_into(c,
                       "fig5b_psi" + std::string(psi == 1.5 ? "1.5" : "2.0"));
        }
    }

    // ---- assembly (shared by both modes) ----
    {
        Table t = read_table(runs / "fig1a" / "sweep.csv");
        write_dat(base / "fig1a.dat", "Pi pi_star",
                  {t.numcol("value"), t.numcol("pi_star_0")});
        write_stub(base / "fig1a.txt",
                   {"fig1a: optimal stock proportion vs constraint [0, Pi]",
                    "x: Pi (upper bound); y: pi* at t = 0",
                    "expected: increasing in Pi, then flat once Pi passes the",
                    "unconstrained optimum mu/(gamma sigma^2)"});
    }
    {
        Table t = read_table(runs / "fig1b" / "sweep.csv");
        write_dat(base / "fig1b.dat", "Pi pi_star",
                  {t.numcol("value"), t.numcol("pi_star_0")});
        write_stub(base / "fig1b.txt",
                   {"fig1b: optimal stock proportion vs constraint [Pi, 1]",
                    "x: Pi (lower bound); y: pi* at t = 0",
                    "expected: flat at the unconstrained optimum until Pi",
                    "exceeds it, then pi* = Pi"});
    }
    {
        Table con = read_table(runs / "fig2a_con" / "strategy.csv");
        Table unc = read_table(runs / "fig2a_unc" / "strategy.csv");
        write_dat(base / "fig2a.dat", "t pi_constrained pi_unconstrained",
                  {con.numcol("t"), con.numcol("pi_star"),
                   unc.numcol("pi_star")});
        write_stub(base / "fig2a.txt",
                   {"fig2a: pi* over time, constant-coefficient market",
                    "x: t (years); y: pi* with [0, 0.5] vs unconstrained",
                    "expected: both columns constant in t (0.5 and the",
                    "unconstrained optimum)"});
    }
    {
        Table p12 = read_table(runs / "fig2a_con" / "strategy.csv");
        Table p15 = read_table(runs / "fig2b_psi1.5" / "strategy.csv");
        Table p20 = read_table(runs / "fig2b_psi2.0" / "strategy.csv");
        write_dat(base / "fig2b.dat",
                  "t c_hat_psi1.2 c_hat_psi1.5 c_hat_psi2.0",
                  {p12.numcol("t"), p12.numcol("c_hat_star"),
                   p15.numcol("c_hat_star"), p20.numcol("c_hat_star")});
        write_stub(base / "fig2b.txt",
                   {"fig2b: consumption-wealth ratio over time by psi",
                    "x: t (years); y: c_hat* for psi in {1.2, 1.5, 2.0}",
                    "psi = 1.2 column comes from the fig2a_con run",
                    "expected: c_hat* decreases as psi grows"});
    }
    {
        Table g2 = read_table(runs / "fig3_gamma2" / "strategy.csv");
        Table g5 = read_table(runs / "fig3_gamma5" / "strategy.csv");
        Table g8 = read_table(runs / "fig3_gamma8" / "strategy.csv");
        write_dat(base / "fig3a.dat", "t pi_gamma2 pi_gamma5 pi_gamma8",
                  {g2.numcol("t"), g2.numcol("pi_star"), g5.numcol("pi_star"),
                   g8.numcol("pi_star")});
        write_dat(base / "fig3b.dat",
                  "t c_hat_gamma2 c_hat_gamma5 c_hat_gamma8",
                  {g2.numcol("t"), g2.numcol("c_hat_star"),
                   g5.numcol("c_hat_star"), g8.numcol("c_hat_star")});
        write_stub(base / "fig3a.txt",
                   {"fig3a: pi* over time, mean-reverting factor market",
                    "x: t (months as fraction of a year); y: cross-path mean "
                    "pi*",
                    "one column per gamma in {2, 5, 8}; constraint [0, 0.5]"});
        write_stub(base / "fig3b.txt",
                   {"fig3b: c_hat* over time, mean-reverting factor market",
                    "x: t; y: cross-path mean c_hat* per gamma in {2, 5, 8}"});
    }
    {
        // constant-coefficient market: proportional controls do not depend on
        // wealth, so the wealth profiles are flat lines at the t = T/2 values
        Table con = read_table(runs / "fig2a_con" / "strategy.csv");
        Table unc = read_table(runs / "fig2a_unc" / "strategy.csv");
        auto mid_of = [](const Table& t, const char* colname) {
            auto v = t.numcol(colname);
            return v[v.size() / 2];
        };
        std::vector<double> w, pic, piu, ch;
        for (int k = 0; k <= 18; ++k) {
            w.push_back(0.2 + 1.8 * k / 18.0);
            pic.push_back(mid_of(con, "pi_star"));
            piu.push_back(mid_of(unc, "pi_star"));
            ch.push_back(mid_of(con, "c_hat_star"));
        }
        write_dat(base / "fig4a.dat", "w pi_constrained pi_unconstrained",
                  {w, pic, piu});
        write_dat(base / "fig4b.dat", "w c_hat_star", {w, ch});
        write_stub(base / "fig4a.txt",
                   {"fig4a: pi* against current wealth at t = T/2",
                    "x: wealth w; y: pi*",
                    "flat by construction: the optimal controls are",
                    "proportional, so they do not depend on wealth"});
        write_stub(base / "fig4b.txt",
                   {"fig4b: c_hat* against current wealth at t = T/2",
                    "x: wealth w; y: c_hat*", "flat, see fig4a.txt"});
    }
    {
        Table g2 = read_table(runs / "fig5_gamma2" / "strategy.csv");
        Table g5 = read_table(runs / "fig5_gamma5" / "strategy.csv");
        Table g8 = read_table(runs / "fig5_gamma8" / "strategy.csv");
        write_dat(base / "fig5a.dat", "t pi_gamma2 pi_gamma5 pi_gamma8",
                  {g2.numcol("t"), g2.numcol("pi_star"), g5.numcol("pi_star"),
                   g8.numcol("pi_star")});
        Table p15 = read_table(runs / "fig5b_psi1.5" / "strategy.csv");
        Table p20 = read_table(runs / "fig5b_psi2.0" / "strategy.csv");
        write_dat(base / "fig5b.dat",
                  "t c_hat_psi1.2 c_hat_psi1.5 c_hat_psi2.0",
                  {g2.numcol("t"), g2.numcol("c_hat_star"),
                   p15.numcol("c_hat_star"), p20.numcol("c_hat_star")});
        write_stub(base / "fig5a.txt",
                   {"fig5a: pi* over time, stochastic-volatility market",
                    "x: t (years); y: cross-path mean pi* per gamma in",
                    "{2, 5, 8}; constraint [0, 0.1]",
                    "expected: pi* ordered decreasingly in gamma"});
        write_stub(base / "fig5b.txt",
                   {"fig5b: c_hat* over time, stochastic-volatility market",
                    "x: t (years); y: cross-path mean c_hat* per psi in",
                    "{1.2, 1.5, 2.0} (psi = 1.2 from the fig5_gamma2 run)",
                    "expected: c_hat* decreases as psi grows"});
    }
    {
        Table g2 = read_table(runs / "fig5_gamma2" / "profile.csv");
        Table g5 = read_table(runs / "fig5_gamma5" / "profile.csv");
        Table g8 = read_table(runs / "fig5_gamma8" / "profile.csv");
        write_dat(base / "fig6a.dat", "x pi_gamma2 pi_gamma5 pi_gamma8",
                  {g2.numcol("x"), g2.numcol("pi_star"), g5.numcol("pi_star"),
                   g8.numcol("pi_star")});
        write_dat(base / "fig6b.dat",
                  "x c_hat_gamma2 c_hat_gamma5 c_hat_gamma8",
                  {g2.numcol("x"), g2.numcol("c_hat_star"),
                   g5.numcol("c_hat_star"), g8.numcol("c_hat_star")});
        write_stub(base / "fig6a.txt",
                   {"fig6a: pi* against the variance state at t = T/2",
                    "x: variance x; y: pi* per gamma in {2, 5, 8}"});
        write_stub(base / "fig6b.txt",
                   {"fig6b: c_hat* against the variance state at t = T/2",
                    "x: variance x; y: c_hat* per gamma in {2, 5, 8}"});
    }

    std::printf("figure data written to %s\n", base.string().c_str());
    return rc;
}

}  // namespace ezbsde
