// Command-line front end: forward solves, resonance extraction,
// reconstruction runs, stability sweeps, and bound evaluation, driven by one
// JSON config so every artifact can be regenerated byte-for-byte.

#include "resinv/bounds.hpp"
#include "resinv/grid.hpp"
#include "resinv/inverse.hpp"
#include "resinv/jost.hpp"
#include "resinv/potential.hpp"
#include "resinv/resonances.hpp"
#include "resinv/serialize.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

using nlohmann::json;
using resinv::format_double;

struct Config {
    double a = 1.0;
    int n_grid = 512;
    std::string q1_spec = "zero";
    std::string q2_spec; // empty: no second potential
    resinv::AprioriParams params;
    double R = 20.0;
    double eps = 0.0;
    std::vector<double> sweep_R;
    std::vector<double> sweep_eps;
    std::vector<std::uint64_t> seeds;
    double stage_tol = 1e-4;
    int axis_samples = 201;
    int circle_samples = 128;
    resinv::ReconstructionConfig rcfg;
    std::string out = "artifacts";
    int threads = 1;
};

resinv::Lp parse_lp(const json& v, const char* key) {
    if (v.is_string()) {
        if (v.get_ref<const std::string&>() == "inf") return resinv::Lp::infinity();
        throw std::invalid_argument(std::string("config: ") + key +
                                    " must be a number or \"inf\"");
    }
    return resinv::Lp::finite(v.get<double>());
}

Config load_config(const std::string& path) {
    const json j = json::parse(resinv::read_text_file(path));
    if (j.value("schema_version", 1) != 1)
        throw std::invalid_argument("config: unsupported schema_version");
    Config c;
    c.a = j.value("a", 1.0);
    c.n_grid = j.value("n_grid", 512);
    c.q1_spec = j.value("q1", std::string("zero"));
    c.q2_spec = j.value("q2", std::string());
    c.R = j.value("R", 20.0);
    c.eps = j.value("eps", 0.0);
    c.out = j.value("out", std::string("artifacts"));
    c.threads = j.value("threads", 1);
    c.params.a = c.a;
    if (j.contains("params")) {
        const json& p = j.at("params");
        c.params.Q1 = p.value("Q1", 1.0);
        if (p.contains("p")) c.params.p = parse_lp(p.at("p"), "p");
        c.params.Dp = p.value("Dp", 1.0);
        c.params.delta = p.value("delta", 0.1);
        if (p.contains("r") && p.contains("Dr_prime") && p.contains("A_inf")) {
            c.params.r = parse_lp(p.at("r"), "r");
            c.params.Dr_prime = p.at("Dr_prime").get<double>();
            c.params.A_inf = p.at("A_inf").get<double>();
        }
        c.params.R1 = p.value("R1", 0.0);
        c.params.R2 = p.value("R2", 0.0);
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        for (const json& v : s.at("R")) c.sweep_R.push_back(v.get<double>());
        for (const json& v : s.at("eps")) c.sweep_eps.push_back(v.get<double>());
        if (s.contains("seeds"))
            for (const json& v : s.at("seeds")) c.seeds.push_back(v.get<std::uint64_t>());
        if (c.seeds.empty()) c.seeds.push_back(1);
    }
    if (j.contains("tolerances")) c.stage_tol = j.at("tolerances").value("stage", 1e-4);
    if (j.contains("forward")) {
        c.axis_samples = j.at("forward").value("axis_samples", 201);
        c.circle_samples = j.at("forward").value("circle_samples", 128);
    }
    if (j.contains("reconstruct")) {
        const json& r = j.at("reconstruct");
        c.rcfg.quad_points = r.value("quad_points", 4096);
        c.rcfg.outer_iters = r.value("outer_iters", 20);
        c.rcfg.outer_damping = r.value("outer_damping", 0.7);
        c.rcfg.outer_tol = r.value("outer_tol", 1e-8);
        c.rcfg.contour_shift = r.value("contour_shift", false);
        c.rcfg.alpha = r.value("alpha", 0.0);
        c.rcfg.cutoff_A = r.value("cutoff_A", 0.0);
        c.rcfg.quad_points = std::max(c.rcfg.quad_points, 16);
        c.rcfg.resonance_tol = r.value("resonance_tol", 1e-9);
    }
    c.params.validate();
    c.rcfg.validate();
    return c;
}

resinv::Potential build_potential(const Config& c, const std::string& spec) {
    return resinv::make_family(spec, c.a, c.n_grid);
}

void ensure_outdir(const std::string& dir) { std::filesystem::create_directories(dir); }

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += '"';
    return out;
}

std::string join_csv(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += fields[i];
    }
    out += '\n';
    return out;
}

std::string psi_samples_csv(const resinv::JostEvaluator& ev,
                            const std::vector<std::complex<double>>& zs) {
    std::string out = "z_re,z_im,psi_re,psi_im\n";
    for (const auto& z : zs) {
        const auto v = ev.psi(z);
        out += format_double(z.real()) + ',' + format_double(z.imag()) + ',' +
               format_double(v.real()) + ',' + format_double(v.imag()) + '\n';
    }
    return out;
}

void write_potential_artifacts(const Config& c, const std::string& outdir,
                               const std::string& name, const std::string& spec,
                               bool with_contours) {
    const resinv::Potential q = build_potential(c, spec);
    const resinv::JostEvaluator ev(q, c.rcfg.search.jost);
    if (with_contours) {
        std::vector<std::complex<double>> axis, circle;
        for (int i = 0; i < c.axis_samples; ++i)
            axis.emplace_back(-c.R + 2.0 * c.R * i / (c.axis_samples - 1), 0.0);
        for (int i = 0; i < c.circle_samples; ++i)
            circle.push_back(std::polar(c.R, 2.0 * std::numbers::pi * i / c.circle_samples));
        resinv::write_text_file(outdir + "/" + name + "_psi_axis.csv", psi_samples_csv(ev, axis));
        resinv::write_text_file(outdir + "/" + name + "_psi_circle.csv",
                                psi_samples_csv(ev, circle));
        resinv::write_text_file(outdir + "/" + name + "_kernel.json",
                                resinv::to_json(ev.kernel()));
    }
    const resinv::ResonanceSet rs =
        resinv::find_resonances(ev, c.R, c.rcfg.resonance_tol, c.rcfg.search);
    resinv::write_text_file(outdir + "/" + name + "_resonances.json", resinv::to_json(rs));
    std::cout << name << ": " << rs.zeros.size() << " zeros listed, n_origin=" << rs.n_origin
              << ", total=" << rs.total() << ", R=" << format_double(rs.R) << "\n";
}

int cmd_forward(const Config& c, const std::string& outdir, bool with_contours) {
    ensure_outdir(outdir);
    write_potential_artifacts(c, outdir, "q1", c.q1_spec, with_contours);
    if (!c.q2_spec.empty()) write_potential_artifacts(c, outdir, "q2", c.q2_spec, with_contours);
    return 0;
}

int cmd_bounds(const Config& c, double R, double eps, const std::string& format) {
    const resinv::BoundBreakdown b = c.params.has_derivative_data()
                                         ? resinv::pointwise_stability_bound(R, eps, c.params)
                                         : resinv::primitive_stability_bound(R, eps, c.params);
    if (format == "json") {
        std::cout << resinv::to_json(b) << "\n";
    } else {
        for (const auto& [k, v] : b.entries) std::cout << k << " = " << format_double(v) << "\n";
        std::cout << "in_force = " << (b.in_force ? "true" : "false") << "\n";
        std::cout << "note = " << b.note << "\n";
    }
    return 0;
}

int cmd_validate(const Config& c) {
    const auto q1 = build_potential(c, c.q1_spec);
    const auto q2 = c.q2_spec.empty() ? q1 : build_potential(c, c.q2_spec);
    const resinv::ValidationReport rep = resinv::validate_apriori(q1, q2, c.params);
    for (const auto& item : rep.checks)
        std::cout << (item.pass ? "pass " : "FAIL ") << item.name
                  << "  measured=" << format_double(item.measured)
                  << "  allowed=" << format_double(item.allowed) << "\n";
    std::cout << (rep.all_pass() ? "valid" : "invalid") << "\n";
    return rep.all_pass() ? 0 : 2;
}

int cmd_reconstruct(const Config& c, const std::string& outdir, const std::string& res_path,
                    double eps, std::uint64_t seed) {
    ensure_outdir(outdir);
    const auto q1 = build_potential(c, c.q1_spec);
    std::optional<resinv::Potential> q2;
    resinv::ResonanceSet target;
    if (!res_path.empty()) {
        target = resinv::resonances_from_json(resinv::read_text_file(res_path));
    } else {
        if (c.q2_spec.empty())
            throw std::invalid_argument("reconstruct: config needs q2 or --resonances FILE");
        q2 = build_potential(c, c.q2_spec);
        target = resinv::find_resonances(*q2, c.R, c.rcfg.resonance_tol, c.rcfg.search);
    }
    if (eps > 0.0) target = resinv::perturb_resonances(target, eps, seed);

    resinv::ReconstructionConfig rc = c.rcfg;
    rc.R = c.R;
    const resinv::ReconstructionResult res = resinv::reconstruct(q1, target, c.params, rc);
    resinv::write_text_file(outdir + "/reconstruction.json", resinv::to_json(res));

    const auto& est = res.primitive_estimate;
    std::vector<double> dv;
    if (q2) dv = resinv::sub(*q2, q1).values;
    std::string csv = q2 ? "x,estimate,truth,error\n" : "x,estimate\n";
    double sup_err = 0.0;
    for (int j = 0; j <= est.n_grid; ++j) {
        const double x = j * est.a / est.n_grid;
        csv += format_double(x) + ',' + format_double(est.values[j]);
        if (q2) {
            const double truth = resinv::pwl_integral(est.a, dv, x, est.a);
            sup_err = std::max(sup_err, std::abs(est.values[j] - truth));
            csv += ',' + format_double(truth) + ',' + format_double(est.values[j] - truth);
        }
        csv += '\n';
    }
    resinv::write_text_file(outdir + "/primitive.csv", csv);
    if (res.pointwise_estimate) {
        const auto& pw = *res.pointwise_estimate;
        std::string pcsv = q2 ? "x,estimate,truth,error\n" : "x,estimate\n";
        for (int j = 0; j <= pw.n_grid; ++j) {
            const double x = j * pw.a / pw.n_grid;
            pcsv += format_double(x) + ',' + format_double(pw.values[j]);
            if (q2) {
                const double truth = resinv::pwl_eval(pw.a, dv, x);
                pcsv += ',' + format_double(truth) + ',' + format_double(pw.values[j] - truth);
            }
            pcsv += '\n';
        }
        resinv::write_text_file(outdir + "/pointwise.csv", pcsv);
    }
    std::cout << "pairing_epsilon = " << format_double(res.diagnostics.pairing_epsilon) << "\n";
    if (q2) std::cout << "sup_primitive_error = " << format_double(sup_err) << "\n";
    std::cout << "bound_total = " << format_double(res.bound.total())
              << (res.bound.in_force ? " (in force)" : " (below threshold)") << "\n";
    return 0;
}

template <typename Fn>
void run_pool(Fn body, int threads) {
    const int nt = std::max(1, threads);
    if (nt == 1) {
        body();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int i = 0; i < nt; ++i) pool.emplace_back(body);
    for (auto& t : pool) t.join();
}

struct SweepRow {
    double R = 0.0, eps = 0.0;
    std::uint64_t seed = 0;
    bool ok = false;
    bool has_pointwise = false;
    double eps_measured = 0.0, err_primitive = 0.0, err_pointwise = 0.0;
    double th2 = 0.0, th3 = 0.0;
    bool in_force2 = false, in_force3 = false;
    long long wall_ms = 0;
    std::string status;
};

std::string row_json(const SweepRow& r) {
    std::string out = "{\"R\":" + format_double(r.R) + ",\"eps\":" + format_double(r.eps) +
                      ",\"seed\":" + std::to_string(r.seed) + ",\"status\":" + json(r.status).dump();
    if (r.ok) {
        out += ",\"eps_measured\":" + format_double(r.eps_measured);
        out += ",\"err_primitive\":" + format_double(r.err_primitive);
        if (r.has_pointwise) out += ",\"err_pointwise\":" + format_double(r.err_pointwise);
        out += ",\"th2_total\":" + format_double(r.th2);
        if (r.has_pointwise) out += ",\"th3_total\":" + format_double(r.th3);
        out += ",\"in_force_primitive\":" + std::string(r.in_force2 ? "true" : "false");
        if (r.has_pointwise)
            out += ",\"in_force_pointwise\":" + std::string(r.in_force3 ? "true" : "false");
    }
    out += "}";
    return out;
}

int cmd_sweep(const Config& c, const std::string& outdir, int threads) {
    if (c.sweep_R.empty() || c.sweep_eps.empty() || c.seeds.empty())
        throw std::invalid_argument("sweep: config must provide non-empty sweep.R and sweep.eps");
    if (c.q2_spec.empty()) throw std::invalid_argument("sweep: config needs q2");
    ensure_outdir(outdir);
    ensure_outdir(outdir + "/rows");
    const auto q1 = build_potential(c, c.q1_spec);
    const auto q2 = build_potential(c, c.q2_spec);
    const auto dpot = resinv::sub(q2, q1);

    // both zero inventories depend only on R: search once per radius
    std::vector<double> uniqR;
    for (double R : c.sweep_R)
        if (std::find(uniqR.begin(), uniqR.end(), R) == uniqR.end()) uniqR.push_back(R);
    struct RCache {
        resinv::ResonanceSet s1, s2;
        std::string error;
    };
    std::vector<RCache> cache(uniqR.size());
    {
        std::atomic<std::size_t> next{0};
        run_pool(
            [&] {
                for (std::size_t i; (i = next.fetch_add(1)) < uniqR.size();) {
                    try {
                        cache[i].s1 = resinv::find_resonances(q1, uniqR[i], c.rcfg.resonance_tol,
                                                              c.rcfg.search);
                        cache[i].s2 = resinv::find_resonances(q2, uniqR[i], c.rcfg.resonance_tol,
                                                              c.rcfg.search);
                    } catch (const std::exception& e) {
                        cache[i].error = e.what();
                    }
                }
            },
            threads);
    }

    std::vector<SweepRow> rows;
    std::vector<std::size_t> cache_idx;
    for (double R : c.sweep_R)
        for (double eps : c.sweep_eps)
            for (std::uint64_t seed : c.seeds) {
                SweepRow r;
                r.R = R;
                r.eps = eps;
                r.seed = seed;
                rows.push_back(r);
                cache_idx.push_back(static_cast<std::size_t>(
                    std::find(uniqR.begin(), uniqR.end(), R) - uniqR.begin()));
            }

    std::atomic<std::size_t> next{0};
    run_pool(
        [&] {
            for (std::size_t i; (i = next.fetch_add(1)) < rows.size();) {
                SweepRow& r = rows[i];
                const RCache& rc = cache[cache_idx[i]];
                const auto t0 = std::chrono::steady_clock::now();
                try {
                    if (!rc.error.empty()) throw std::runtime_error(rc.error);
                    resinv::ResonanceSet target = rc.s2;
                    if (r.eps > 0.0) {
                        target = resinv::perturb_resonances(rc.s2, r.eps, r.seed);
                        r.eps_measured = resinv::pair_resonances(rc.s2, target).epsilon;
                    }
                    resinv::ReconstructionConfig cfgR = c.rcfg;
                    cfgR.R = r.R;
                    const auto res = resinv::reconstruct(q1, rc.s1, target, c.params, cfgR);
                    const auto& est = res.primitive_estimate;
                    for (int jn = 0; jn <= est.n_grid; ++jn) {
                        const double x = jn * est.a / est.n_grid;
                        r.err_primitive =
                            std::max(r.err_primitive,
                                     std::abs(est.values[static_cast<std::size_t>(jn)] -
                                              resinv::pwl_integral(est.a, dpot.values, x, est.a)));
                    }
                    if (res.pointwise_estimate) {
                        r.has_pointwise = true;
                        const auto& pw = *res.pointwise_estimate;
                        for (int jn = 0; jn <= pw.n_grid; ++jn)
                            r.err_pointwise = std::max(
                                r.err_pointwise, std::abs(pw.values[static_cast<std::size_t>(jn)] -
                                                          dpot(jn * pw.a / pw.n_grid)));
                        r.th2 = res.bound.at("total_primitive");
                        r.th3 = res.bound.at("total");
                        r.in_force2 = r.R > res.bound.at("R0");
                        r.in_force3 = res.bound.in_force;
                    } else {
                        r.th2 = res.bound.at("total");
                        r.in_force2 = res.bound.in_force;
                    }
                    r.ok = true;
                    r.status = "ok";
                } catch (const std::exception& e) {
                    r.ok = false;
                    r.status = e.what();
                }
                r.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
                resinv::write_text_file(outdir + "/rows/row_R" + format_double(r.R) + "_eps" +
                                            format_double(r.eps) + "_seed" +
                                            std::to_string(r.seed) + ".json",
                                        row_json(r));
            }
        },
        threads);

    // CSV in config axis order: deterministic regardless of pool scheduling.
    // wall_ms is environment, not config+seed; every other column is stable.
    std::string csv = "R,eps,seed,eps_measured,err_primitive,err_pointwise,th2_total,th3_total,"
                      "in_force_primitive,in_force_pointwise,wall_ms,status\n";
    int ok_count = 0;
    for (const auto& r : rows) {
        std::vector<std::string> f{format_double(r.R), format_double(r.eps),
                                   std::to_string(r.seed)};
        if (r.ok) {
            f.push_back(format_double(r.eps_measured));
            f.push_back(format_double(r.err_primitive));
            f.push_back(r.has_pointwise ? format_double(r.err_pointwise) : "");
            f.push_back(format_double(r.th2));
            f.push_back(r.has_pointwise ? format_double(r.th3) : "");
            f.push_back(r.in_force2 ? "1" : "0");
            f.push_back(r.has_pointwise ? (r.in_force3 ? "1" : "0") : "");
            ++ok_count;
        } else {
            for (int k = 0; k < 7; ++k) f.push_back("");
        }
        f.push_back(std::to_string(r.wall_ms));
        f.push_back(csv_quote(r.status));
        csv += join_csv(f);
    }
    resinv::write_text_file(outdir + "/sweep.csv", csv);

    // summary: per-axis error paths and their monotonicity, no timings
    std::string s = "{\"schema_version\":1,\"rows\":" + std::to_string(rows.size()) +
                    ",\"ok\":" + std::to_string(ok_count) +
                    ",\"failed\":" + std::to_string(rows.size() - ok_count) +
                    ",\"stage_tol\":" + format_double(c.stage_tol);
    const auto find_row = [&](double R, double eps, std::uint64_t seed) -> const SweepRow* {
        for (const auto& r : rows)
            if (r.R == R && r.eps == eps && r.seed == seed) return &r;
        return nullptr;
    };
    s += ",\"primitive_vs_R\":[";
    bool first = true;
    for (double eps : c.sweep_eps)
        for (std::uint64_t seed : c.seeds) {
            if (!first) s += ',';
            first = false;
            s += "{\"eps\":" + format_double(eps) + ",\"seed\":" + std::to_string(seed) +
                 ",\"err\":[";
            bool complete = true, mono = true;
            double prev = 0.0;
            bool have_prev = false;
            for (std::size_t k = 0; k < c.sweep_R.size(); ++k) {
                if (k) s += ',';
                const SweepRow* r = find_row(c.sweep_R[k], eps, seed);
                if (r && r->ok) {
                    s += format_double(r->err_primitive);
                    if (have_prev && r->err_primitive > prev) mono = false;
                    prev = r->err_primitive;
                    have_prev = true;
                } else {
                    s += "null";
                    complete = false;
                }
            }
            s += "],\"nonincreasing\":";
            s += complete && mono ? "true" : "false";
            s += '}';
        }
    s += "],\"primitive_vs_eps\":[";
    first = true;
    for (double R : c.sweep_R)
        for (std::uint64_t seed : c.seeds) {
            if (!first) s += ',';
            first = false;
            s += "{\"R\":" + format_double(R) + ",\"seed\":" + std::to_string(seed) + ",\"err\":[";
            bool complete = true, mono = true;
            double prev = 0.0;
            bool have_prev = false;
            for (std::size_t k = 0; k < c.sweep_eps.size(); ++k) {
                if (k) s += ',';
                const SweepRow* r = find_row(R, c.sweep_eps[k], seed);
                if (r && r->ok) {
                    s += format_double(r->err_primitive);
                    if (have_prev && r->err_primitive < prev) mono = false;
                    prev = r->err_primitive;
                    have_prev = true;
                } else {
                    s += "null";
                    complete = false;
                }
            }
            s += "],\"nondecreasing\":";
            s += complete && mono ? "true" : "false";
            s += '}';
        }
    s += "]}";
    resinv::write_text_file(outdir + "/summary.json", s);
    std::cout << "sweep: " << ok_count << "/" << rows.size() << " rows ok, artifacts in " << outdir
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"resonance toolkit: forward solves, zero inventories, reconstruction, bounds"};
    app.require_subcommand(1);

    std::string config_path, out_override, format = "text", resonances_path;
    int threads = 0;
    std::uint64_t seed = 1;
    double R_cli = 0.0, eps_cli = -1.0;
    app.add_option("--config", config_path, "experiment config JSON file");
    app.add_option("--out", out_override, "output directory (overrides config)");
    app.add_option("--threads", threads, "worker threads for sweeps (overrides config)");
    app.add_option("--seed", seed, "perturbation seed for reconstruct");
    app.add_option("--R", R_cli, "disk radius (overrides config)");
    app.add_option("--eps", eps_cli, "resonance perturbation size (overrides config)");
    app.add_option("--format", format, "bounds output: text or json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* sc_forward = app.add_subcommand(
        "forward", "solve both potentials: psi contours, kernel snapshot, resonance set");
    auto* sc_find = app.add_subcommand("find-resonances", "zero inventory inside |z| <= R");
    auto* sc_rec =
        app.add_subcommand("reconstruct", "recover the potential difference from resonances");
    sc_rec->add_option("--resonances", resonances_path, "target resonance-set JSON file");
    auto* sc_sweep = app.add_subcommand("sweep", "stability grid over (R, eps, seed)");
    auto* sc_bounds = app.add_subcommand("bounds", "print the stability constant breakdown");
    auto* sc_validate = app.add_subcommand("validate", "check the pair against a-priori data");
    for (auto* sc : {sc_forward, sc_find, sc_rec, sc_sweep, sc_bounds, sc_validate})
        sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    Config c;
    try {
        if (config_path.empty()) throw std::invalid_argument("--config is required");
        c = load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    if (R_cli > 0.0) c.R = R_cli;
    if (eps_cli >= 0.0) c.eps = eps_cli;
    if (threads > 0) c.threads = threads;
    const std::string outdir = out_override.empty() ? c.out : out_override;

    try {
        if (*sc_forward) return cmd_forward(c, outdir, true);
        if (*sc_find) return cmd_forward(c, outdir, false);
        if (*sc_rec) return cmd_reconstruct(c, outdir, resonances_path, c.eps, seed);
        if (*sc_sweep) return cmd_sweep(c, outdir, c.threads);
        if (*sc_bounds) return cmd_bounds(c, c.R, c.eps, format);
        if (*sc_validate) return cmd_validate(c);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
