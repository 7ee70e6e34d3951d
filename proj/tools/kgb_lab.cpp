// Command-line front end: simulation, scaling scans, and diagnostics.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kgb/ansatz.hpp"
#include "kgb/dispersion.hpp"
#include "kgb/harness.hpp"
#include "kgb/kgb_system.hpp"
#include "kgb/normalform.hpp"
#include "kgb/whitham.hpp"

using nlohmann::json;

namespace {

constexpr int EXIT_THRESHOLD = 2;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = ".";
    int threads = 1;
};

kgb::RunConfig load_config(const GlobalOpts& g) {
    kgb::RunConfig cfg;
    if (g.config_path.empty()) return cfg;
    std::ifstream in(g.config_path);
    if (!in) throw std::runtime_error("cannot open config: " + g.config_path);
    json j;
    in >> j;
    if (j.contains("length_slow")) cfg.length_slow = j["length_slow"];
    if (j.contains("n_slow")) cfg.n_slow = j["n_slow"];
    if (j.contains("dx_fast")) cfg.dx_fast = j["dx_fast"];
    if (j.contains("amp")) cfg.amp = j["amp"];
    if (j.contains("sigma")) cfg.sigma = j["sigma"];
    if (j.contains("s")) cfg.s = j["s"];
    if (j.contains("T0")) cfg.T0 = j["T0"];
    if (j.contains("eps_ladder")) cfg.eps_ladder = j["eps_ladder"].get<std::vector<double>>();
    if (j.contains("drift_ladder")) cfg.drift_ladder = j["drift_ladder"].get<std::vector<double>>();
    if (j.contains("dt_fast")) cfg.dt_fast = j["dt_fast"];
    if (j.contains("dt_slow")) cfg.dt_slow = j["dt_slow"];
    if (j.contains("n_snapshots")) cfg.n_snapshots = j["n_snapshots"];
    if (j.contains("nf_tol")) cfg.nf_tol = j["nf_tol"];
    if (j.contains("trim_tol")) cfg.trim_tol = j["trim_tol"];
    if (j.contains("neumann_tol")) cfg.neumann_tol = j["neumann_tol"];
    return cfg;
}

std::ofstream open_out(const GlobalOpts& g, const std::string& name) {
    std::filesystem::create_directories(g.out_dir);
    std::ofstream out(std::filesystem::path(g.out_dir) / name);
    if (!out) throw std::runtime_error("cannot write " + name);
    return out;
}

void write_json(const GlobalOpts& g, const std::string& name, const json& j) {
    auto out = open_out(g, name);
    out << j.dump(2) << "\n";
}

json fit_json(const kgb::FitResult& f) {
    return {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
}

int cmd_dispersion_scan(const GlobalOpts& g) {
    kgb::GapReport r = kgb::scan_gaps();
    auto csv = open_out(g, "dispersion_gaps.csv");
    csv << "quantity,value\n";
    csv << "cross_gap," << fmt(r.cross_gap) << "\n";
    csv << "cross_gap_argk," << fmt(r.cross_gap_argk) << "\n";
    csv << "gap_12_minus," << fmt(r.gap_12_minus) << "\n";
    csv << "gap_12_plus," << fmt(r.gap_12_plus) << "\n";
    csv << "nonresonance_constant," << fmt(kgb::nonresonance_constant()) << "\n";
    std::cout << "cross_gap=" << fmt(r.cross_gap) << " at k=" << fmt(r.cross_gap_argk)
              << " gap_12_minus=" << fmt(r.gap_12_minus) << " gap_12_plus=" << fmt(r.gap_12_plus)
              << "\n";
    return 0;
}

int cmd_simulate_whitham(const GlobalOpts& g) {
    kgb::RunConfig cfg = load_config(g);
    kgb::WhithamState st = kgb::whitham_initial(cfg);
    st = kgb::whitham_solve(st, cfg.T0, cfg.dt_slow);
    auto u = kgb::transform_inverse_real(st.u);
    auto w = kgb::transform_inverse_real(st.w);
    auto csv = open_out(g, "whitham_final.csv");
    csv << "X,U,W\n";
    for (std::size_t i = 0; i < u.size(); ++i)
        csv << fmt(st.u.grid.x(i)) << "," << fmt(u[i]) << "," << fmt(w[i]) << "\n";
    std::cout << "slow state at T0=" << cfg.T0 << " written (" << u.size() << " points)\n";
    return 0;
}

int cmd_simulate_kgb(const GlobalOpts& g, double eps) {
    kgb::RunConfig cfg = load_config(g);
    kgb::Grid1D fast = kgb::fast_grid(cfg, eps);
    kgb::DiagonalState d = kgb::diagonalize(kgb::theorem_initial_data(cfg, eps, fast));
    d = kgb::kgb_solve(d, cfg.T0 / eps, cfg.dt_fast);
    kgb::KGBState s = kgb::undiagonalize(d);
    auto u = kgb::transform_inverse_real(s.u);
    auto v = kgb::transform_inverse_real(s.v);
    auto csv = open_out(g, "kgb_final.csv");
    csv << "x,u,v\n";
    for (std::size_t i = 0; i < u.size(); ++i)
        csv << fmt(fast.x(i)) << "," << fmt(u[i]) << "," << fmt(v[i]) << "\n";
    std::cout << "fast state at t=" << cfg.T0 / eps << " written (" << u.size() << " points)\n";
    return 0;
}

int cmd_residual_scan(const GlobalOpts& g) {
    kgb::RunConfig cfg = load_config(g);
    kgb::ScalingReport ru = kgb::run_residual_scan(cfg, false, false);
    kgb::ScalingReport rv = kgb::run_residual_scan(cfg, false, true);
    kgb::ScalingReport rw = kgb::run_residual_scan(cfg, true);
    auto csv = open_out(g, "residual_scan.csv");
    csv << "eps,res_u,res_v,res_u_weighted\n";
    for (std::size_t i = 0; i < ru.points.size(); ++i)
        csv << fmt(ru.points[i].eps) << "," << fmt(ru.points[i].value) << ","
            << fmt(rv.points[i].value) << "," << fmt(rw.points[i].value) << "\n";
    write_json(g, "residual_scan.json",
               {{"res_u", fit_json(ru.fit)}, {"res_v", fit_json(rv.fit)},
                {"res_u_weighted", fit_json(rw.fit)}});
    std::cout << "res_u slope=" << ru.fit.slope << " res_v slope=" << rv.fit.slope
              << " weighted slope=" << rw.fit.slope << "\n";
    bool ok = ru.fit.slope >= 3.3 && ru.fit.slope <= 3.7 && rv.fit.slope >= 3.3 &&
              rv.fit.slope <= 3.7 && rw.fit.slope >= 2.3 && rw.fit.slope <= 2.7;
    return ok ? 0 : EXIT_THRESHOLD;
}

int cmd_error_scaling(const GlobalOpts& g) {
    kgb::RunConfig cfg = load_config(g);
    kgb::ErrorScalingReport rep = kgb::run_error_scaling(cfg);
    auto csv = open_out(g, "error_scaling.csv");
    csv << "eps,max_error\n";
    for (auto& p : rep.scaling.points) csv << fmt(p.eps) << "," << fmt(p.value) << "\n";
    write_json(g, "error_scaling.json",
               {{"fit", fit_json(rep.scaling.fit)},
                {"certification_rel_change", rep.certification_rel_change}});
    std::cout << "error slope=" << rep.scaling.fit.slope << " r2=" << rep.scaling.fit.r2
              << " certification=" << rep.certification_rel_change << "\n";
    return (rep.scaling.fit.slope >= 1.3 && rep.scaling.fit.r2 >= 0.98) ? 0 : EXIT_THRESHOLD;
}

int cmd_normalform_iterate(const GlobalOpts& g, double eps) {
    kgb::RunConfig cfg = load_config(g);
    kgb::Grid1D fast = kgb::fast_grid(cfg, eps);
    kgb::WhithamState wh = kgb::whitham_initial(cfg);
    kgb::SpectralField psi = kgb::modulation_profile(wh, eps, fast);
    kgb::NFOptions opt{eps, static_cast<double>(cfg.s), cfg.trim_tol, cfg.neumann_tol};
    kgb::NFResult nf = kgb::nf_iterate(psi, opt, cfg.nf_tol);
    auto csv = open_out(g, "normalform_iterate.csv");
    csv << "stage,f_non_xnorm,f_res_xnorm,pairing_defect,neumann_tail\n";
    for (std::size_t i = 0; i < nf.history.f_non_xnorm.size(); ++i)
        csv << (i + 1) << "," << fmt(nf.history.f_non_xnorm[i]) << ","
            << fmt(nf.history.f_res_xnorm[i]) << "," << fmt(nf.history.pairing_defect[i]) << ","
            << fmt(nf.history.neumann_tail[i]) << "\n";
    std::cout << "stages=" << nf.stages
              << " final f_non=" << nf.history.f_non_xnorm.back() << "\n";
    bool ok = true;
    for (std::size_t i = 1; i < nf.history.f_non_xnorm.size(); ++i)
        ok = ok && nf.history.f_non_xnorm[i] < 0.6 * nf.history.f_non_xnorm[i - 1];
    return ok ? 0 : EXIT_THRESHOLD;
}

int cmd_energy_drift(const GlobalOpts& g, bool ablate) {
    kgb::RunConfig cfg = load_config(g);
    kgb::DriftReport rep = kgb::run_energy_drift(cfg, ablate);
    auto csv = open_out(g, ablate ? "energy_drift_ablated.csv" : "energy_drift.csv");
    csv << "eps,rate,energy0,max_imag_defect,stages\n";
    for (auto& p : rep.points)
        csv << fmt(p.eps) << "," << fmt(p.rate) << "," << fmt(p.energy0) << ","
            << fmt(p.max_imag_defect) << "," << p.stages << "\n";
    write_json(g, ablate ? "energy_drift_ablated.json" : "energy_drift.json",
               {{"fit", fit_json(rep.fit)}, {"ablate", ablate}});
    std::cout << "drift slope=" << rep.fit.slope << (ablate ? " (ablated)" : "") << "\n";
    if (ablate) return 0;
    return rep.fit.slope >= 0.8 ? 0 : EXIT_THRESHOLD;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral laboratory for a coupled long-wave model"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--config", g.config_path, "JSON config file");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--threads", g.threads, "worker threads (computation is sequential)");

    double eps = 0.1;
    bool ablate = false;
    auto* sk = app.add_subcommand("simulate-kgb", "integrate the fast system");
    sk->add_option("--eps", eps, "scaling parameter");
    auto* sw = app.add_subcommand("simulate-whitham", "integrate the slow system");
    auto* rs = app.add_subcommand("residual-scan", "residual scaling over the eps ladder");
    auto* es = app.add_subcommand("error-scaling", "approximation error over the eps ladder");
    auto* ni = app.add_subcommand("normalform-iterate", "stage iteration diagnostics");
    ni->add_option("--eps", eps, "scaling parameter");
    auto* ed = app.add_subcommand("energy-drift", "modified-energy drift over the ladder");
    ed->add_flag("--ablate", ablate, "replace the transform stages by the identity");
    auto* ds = app.add_subcommand("dispersion-scan", "frequency gap report");

    CLI11_PARSE(app, argc, argv);
    try {
        if (sk->parsed()) return cmd_simulate_kgb(g, eps);
        if (sw->parsed()) return cmd_simulate_whitham(g);
        if (rs->parsed()) return cmd_residual_scan(g);
        if (es->parsed()) return cmd_error_scaling(g);
        if (ni->parsed()) return cmd_normalform_iterate(g, eps);
        if (ed->parsed()) return cmd_energy_drift(g, ablate);
        if (ds->parsed()) return cmd_dispersion_scan(g);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
