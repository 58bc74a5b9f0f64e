// kslab command line: space generation, Korevaar-Schoen energy experiments,
// and machine-readable JSON reports.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "kslab/bv.hpp"
#include "kslab/covers.hpp"
#include "kslab/io.hpp"
#include "kslab/laplacian.hpp"
#include "kslab/lipschitz.hpp"
#include "kslab/measures.hpp"
#include "kslab/version.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace kslab;

namespace {

struct CommonOpts {
    std::string space_spec;
    std::string field_expr = "sine";
    std::string out_path;
    std::string csv_path;
    Real p = 2.0;
    std::uint64_t seed = 1;
    int threads = 0;
};

std::vector<Real> parse_list(const std::string& csv) {
    std::vector<Real> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw config_error("bad number in list: '" + tok + "'");
        }
    }
    if (out.empty()) throw config_error("empty number list");
    return out;
}

void apply_threads(int threads) {
    if (threads <= 0) {
        if (const char* env = std::getenv("KSLAB_THREADS")) threads = std::atoi(env);
    }
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

// The resolution rule is validated up front so a bad radius list fails with
// exit code 2 before any computation starts.
void validate_scales(const PointCloudSpace& space, const std::vector<Real>& values,
                     const char* what) {
    for (Real v : values) {
        if (!(v > 0.0)) throw config_error(std::string(what) + ": values must be positive");
        space.require_scale(v, what);
    }
}

json base_report(const std::string& command, const json& config) {
    json j;
    j["schema"] = report_schema;
    j["version"] = version;
    j["command"] = command;
    j["config"] = config;
    return j;
}

void emit(json& report, std::chrono::steady_clock::time_point t0, const std::string& out_path) {
    const auto dt = std::chrono::steady_clock::now() - t0;
    report["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(dt).count();
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(out_path, text);
    }
}

void write_rv_csv(const std::string& path, const std::vector<Real>& radii,
                  const std::vector<Real>& values) {
    std::ostringstream os;
    os.precision(17);
    os << "r,value\n";
    for (std::size_t k = 0; k < radii.size(); ++k) os << radii[k] << ',' << values[k] << '\n';
    write_text_file(path, os.str());
}

json solve_report_json(const SolveReport& rep) {
    json j;
    j["converged"] = rep.converged;
    j["iterations"] = rep.iterations;
    j["final_energy"] = rep.final_energy;
    j["final_grad_norm"] = rep.final_grad_norm;
    j["final_rel_decrease"] = rep.final_rel_decrease;
    j["stop_reason"] = rep.stop_reason;
    j["smoothing_delta"] = rep.smoothing_delta;
    j["energy_history"] = rep.energy_history;
    return j;
}

IndexSet load_cell_csv(const PointCloudSpace& space, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error(path + ": cannot open");
    std::vector<Index> ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "id") continue;
        try {
            ids.push_back(static_cast<Index>(std::stol(line)));
        } catch (...) {
            throw config_error(path + ":" + std::to_string(lineno) + ": bad point id '" + line +
                               "'");
        }
    }
    return IndexSet::from_unsorted(std::move(ids), space.size());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Korevaar-Schoen p-energy laboratory on weighted point clouds"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string radii_csv, eps_csv, boundary_path, ends_csv, cells_json, reference_expr;
    std::vector<std::string> cell_files, field_exprs, arcs;
    Real r_single = 0.0, big_r = 0.0, lambda = 2.0, tol = 1e-8, eps_cvx = 0.5, collar = 0.0;
    int max_iters = 10000, count = 50, samples = 64, fit_window = 4, arcs_cells = 0;
    std::string mode = "lip";

    auto add_common = [&](CLI::App* cmd, bool with_field = true) {
        cmd->add_option("--space", o.space_spec,
                        "generator spec (circle:N, interval:N, torus2:NxM, random:N:seed[:sampler]) "
                        "or a space file")
            ->required();
        if (with_field)
            cmd->add_option("--field", o.field_expr,
                            "catalog expression (constant[:c], ramp, sine, indicator:a:b, "
                            "bump:a:b:w, random[:seed]) or a CSV field file");
        cmd->add_option("--out", o.out_path, "write the JSON report here (default: stdout)");
        cmd->add_option("--threads", o.threads, "cap OpenMP workers (env KSLAB_THREADS)");
        cmd->add_option("--seed", o.seed, "seed for randomized experiments");
    };

    auto* sweep_cmd = app.add_subcommand("energy-sweep", "E_{p,r} sweep with extrapolated limit");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--p", o.p, "exponent p >= 1");
    sweep_cmd->add_option("--radii", radii_csv, "decreasing radius list")->required();
    sweep_cmd->add_option("--fit-window", fit_window, "trailing radii used for the fit");
    sweep_cmd->add_option("--csv", o.csv_path, "also write r,value CSV");

    auto* pair_cmd = app.add_subcommand("pair-check",
                                        "weak-form identity of the p-Laplacian on random pairs");
    add_common(pair_cmd, false);
    pair_cmd->add_option("--p", o.p);
    pair_cmd->add_option("--r", r_single)->required();
    pair_cmd->add_option("--count", count, "number of random (f,g) pairs");

    auto* solve_cmd = app.add_subcommand("solve", "Dirichlet minimization of E_{p,r}");
    add_common(solve_cmd, false);
    solve_cmd->add_option("--p", o.p);
    solve_cmd->add_option("--r", r_single)->required();
    solve_cmd->add_option("--boundary", boundary_path, "CSV id,value with pinned points");
    solve_cmd->add_option("--ends", ends_csv,
                          "v0,v1: pin end collars with affine data (coordinate spaces)");
    solve_cmd->add_option("--collar-width", collar, "collar width for --ends (default r)");
    solve_cmd->add_option("--tol", tol, "relative energy decrease tolerance");
    solve_cmd->add_option("--max-iters", max_iters);

    auto* msweep_cmd = app.add_subcommand("minimizer-sweep",
                                          "Dirichlet solves across decreasing radii");
    add_common(msweep_cmd, false);
    msweep_cmd->add_option("--p", o.p);
    msweep_cmd->add_option("--radii", radii_csv)->required();
    msweep_cmd->add_option("--ends", ends_csv)->required();
    msweep_cmd->add_option("--reference", reference_expr, "catalog field compared against");
    msweep_cmd->add_option("--tol", tol);
    msweep_cmd->add_option("--max-iters", max_iters);

    auto* measure_cmd = app.add_subcommand("measure", "localized energies per cell + density");
    add_common(measure_cmd);
    measure_cmd->add_option("--p", o.p);
    measure_cmd->add_option("--r", r_single)->required();
    measure_cmd->add_option("--cells", cells_json, "JSON list-of-lists of point ids");
    measure_cmd->add_option("--cell", cell_files, "CSV of point ids, one file per cell");
    measure_cmd->add_option("--cells-arcs", arcs_cells, "split into k contiguous index blocks");

    auto* poincare_cmd = app.add_subcommand("poincare", "(p,p)-Poincare ratio over sampled balls");
    add_common(poincare_cmd);
    poincare_cmd->add_option("--p", o.p);
    poincare_cmd->add_option("--R", big_r)->required();
    poincare_cmd->add_option("--lambda", lambda, "dilation of the right-hand ball");
    poincare_cmd->add_option("--mode", mode)->check(CLI::IsMember({"lip", "energy-measure"}));
    poincare_cmd->add_option("--samples", samples);

    auto* fund_cmd = app.add_subcommand("fundamental",
                                        "calibrate + verify the gluing estimate on random sets");
    add_common(fund_cmd, false);
    fund_cmd->add_option("--p", o.p);
    fund_cmd->add_option("--r", r_single)->required();
    fund_cmd->add_option("--eps-cvx", eps_cvx);
    fund_cmd->add_option("--count", count, "configurations per phase");

    auto* tv_cmd = app.add_subcommand("tv", "nonlocal total variation sweep (p = 1)");
    add_common(tv_cmd);
    tv_cmd->add_option("--radii", radii_csv)->required();
    tv_cmd->add_option("--csv", o.csv_path);

    auto* perim_cmd = app.add_subcommand("perimeter", "perimeter of indicator sets");
    add_common(perim_cmd, false);
    perim_cmd->add_option("--radii", radii_csv)->required();
    perim_cmd->add_option("--arc", arcs, "a,b arc on the first coordinate (repeatable)")
        ->required();
    perim_cmd->add_option("--csv", o.csv_path);

    auto* compare_cmd = app.add_subcommand("compare-bv",
                                           "extrapolated E_{1,r} vs Miranda upper bound");
    add_common(compare_cmd, false);
    compare_cmd->add_option("--fields", field_exprs, "catalog field expressions")->required();
    compare_cmd->add_option("--radii", radii_csv)->required();
    compare_cmd->add_option("--eps", eps_csv)->required();
    compare_cmd->add_option("--csv", o.csv_path, "also write the comparability table as CSV");

    auto* info_cmd = app.add_subcommand("space-info", "size, mass, resolution, doubling estimate");
    add_common(info_cmd, false);

    auto* net_cmd = app.add_subcommand("net", "maximal eps-net and partition of unity");
    add_common(net_cmd, false);
    net_cmd->add_option("--eps", eps_csv, "net radius")->required();
    net_cmd->add_option("--partition-csv", o.csv_path, "sparse partition export");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        apply_threads(o.threads);
        const PointCloudSpace space = make_space(o.space_spec);

        auto field_or_file = [&](const std::string& expr) {
            if (space.metric() == MetricKind::DistanceTable) return load_field(space, expr);
            if (expr.find(".csv") != std::string::npos) return load_field(space, expr);
            return make_catalog_field(space, expr);
        };

        json config;
        config["space"] = o.space_spec;
        config["seed"] = o.seed;
        config["threads"] = o.threads;

        if (*sweep_cmd) {
            const auto radii = parse_list(radii_csv);
            validate_scales(space, radii, "energy-sweep --radii");
            config["field"] = o.field_expr;
            config["p"] = o.p;
            config["radii"] = radii;
            config["fit_window"] = fit_window;
            json rep = base_report("energy-sweep", config);
            const auto sw = ks_sweep(space, field_or_file(o.field_expr), o.p, radii, fit_window);
            rep["result"] = sweep_to_json(sw);
            rep["constants"] = {{"resolution_h", space.resolution()}};
            emit(rep, t0, o.out_path);
            if (!o.csv_path.empty()) write_rv_csv(o.csv_path, sw.radii, sw.values);
        } else if (*pair_cmd) {
            validate_scales(space, {r_single}, "pair-check --r");
            if (!(o.p > 1.0)) throw config_error("pair-check: requires p > 1");
            config["p"] = o.p;
            config["r"] = r_single;
            config["count"] = count;
            json rep = base_report("pair-check", config);
            std::mt19937_64 rng(o.seed);
            Real worst = 0.0;
            for (int t = 0; t < count; ++t) {
                const auto f = make_random(space, rng());
                const auto g = make_random(space, rng());
                const auto lap = p_laplacian(space, f, o.p, r_single);
                CompensatedSum lhs;
                for (Index i = 0; i < space.size(); ++i)
                    lhs.add(space.weight(i) * lap[i] * g[i]);
                const Real rhs = -ks_pair(space, f, g, o.p, r_single);
                worst = std::max(worst,
                                 std::abs(lhs.get() - rhs) / std::max(std::abs(rhs), 1e-30));
            }
            rep["result"] = {{"max_rel_error", worst}, {"tolerance", 1e-12},
                             {"pass", worst <= 1e-12}};
            emit(rep, t0, o.out_path);
            if (worst > 1e-12) return 1;
        } else if (*solve_cmd) {
            validate_scales(space, {r_single}, "solve --r");
            config["p"] = o.p;
            config["r"] = r_single;
            config["tol"] = tol;
            config["max_iters"] = max_iters;
            DirichletProblem prob;
            if (!boundary_path.empty()) {
                std::ifstream in(boundary_path);
                if (!in) throw config_error(boundary_path + ": cannot open");
                std::string line;
                std::size_t lineno = 0;
                std::vector<std::pair<Index, Real>> rows;
                while (std::getline(in, line)) {
                    ++lineno;
                    if (line.empty() || line.rfind("id", 0) == 0) continue;
                    const auto comma = line.find(',');
                    if (comma == std::string::npos)
                        throw config_error(boundary_path + ":" + std::to_string(lineno) +
                                           ": expected id,value");
                    try {
                        rows.emplace_back(static_cast<Index>(std::stol(line.substr(0, comma))),
                                          std::stod(line.substr(comma + 1)));
                    } catch (const config_error&) {
                        throw;
                    } catch (...) {
                        throw config_error(boundary_path + ":" + std::to_string(lineno) +
                                           ": expected id,value");
                    }
                }
                std::sort(rows.begin(), rows.end());
                std::vector<Index> ids;
                for (auto& [id, v] : rows) {
                    if (!ids.empty() && ids.back() == id)
                        throw config_error(boundary_path + ": duplicate point id " +
                                           std::to_string(id));
                    ids.push_back(id);
                    prob.boundary_values.push_back(v);
                }
                prob.boundary = IndexSet(std::move(ids));
                prob.p = o.p;
                prob.r = r_single;
                config["boundary"] = boundary_path;
            } else if (!ends_csv.empty()) {
                const auto vals = parse_list(ends_csv);
                if (vals.size() != 2) throw config_error("--ends needs exactly v0,v1");
                prob = end_collar_problem(space, vals[0], vals[1], o.p, r_single, collar);
                config["ends"] = ends_csv;
                config["collar_width"] = collar > 0.0 ? collar : r_single;
            } else {
                throw config_error("solve: needs --boundary or --ends");
            }
            SolveConfig cfg;
            cfg.tol = tol;
            cfg.grad_tol = tol;
            cfg.max_iters = max_iters;
            json rep = base_report("solve", config);
            const auto sr = dirichlet_solve(space, prob, cfg);
            rep["result"] = solve_report_json(sr);
            rep["constants"] = {{"armijo", 1e-4}, {"smoothing_delta", sr.smoothing_delta}};
            emit(rep, t0, o.out_path);
            if (!sr.converged) return 1;
        } else if (*msweep_cmd) {
            const auto radii = parse_list(radii_csv);
            validate_scales(space, radii, "minimizer-sweep --radii");
            const auto vals = parse_list(ends_csv);
            if (vals.size() != 2) throw config_error("--ends needs exactly v0,v1");
            config["p"] = o.p;
            config["radii"] = radii;
            config["ends"] = ends_csv;
            SolveConfig cfg;
            cfg.tol = tol;
            cfg.grad_tol = tol;
            cfg.max_iters = max_iters;
            std::optional<ScalarField> reference;
            if (!reference_expr.empty()) {
                reference = field_or_file(reference_expr);
                config["reference"] = reference_expr;
            }
            json rep = base_report("minimizer-sweep", config);
            const auto sweep = minimizer_sweep(
                space,
                [&](Real r) { return end_collar_problem(space, vals[0], vals[1], o.p, r); },
                radii, cfg, reference ? &*reference : nullptr);
            json entries = json::array();
            bool all_ok = true;
            for (const auto& e : sweep) {
                json je;
                je["r"] = e.r;
                je["dist_prev"] = e.dist_prev;
                if (e.dist_reference) je["dist_reference"] = *e.dist_reference;
                je["solve"] = solve_report_json(e.report);
                all_ok = all_ok && e.report.converged;
                entries.push_back(std::move(je));
            }
            rep["result"] = {{"entries", entries}};
            emit(rep, t0, o.out_path);
            if (!all_ok) return 1;
        } else if (*measure_cmd) {
            validate_scales(space, {r_single}, "measure --r");
            config["field"] = o.field_expr;
            config["p"] = o.p;
            config["r"] = r_single;
            std::vector<IndexSet> cells;
            if (!cells_json.empty()) {
                std::ifstream in(cells_json);
                if (!in) throw config_error(cells_json + ": cannot open");
                json jc;
                try {
                    in >> jc;
                } catch (const std::exception& e) {
                    throw config_error(cells_json + ": invalid JSON (" + std::string(e.what()) +
                                       ")");
                }
                for (const auto& arr : jc) {
                    std::vector<Index> ids;
                    for (const auto& v : arr) ids.push_back(v.get<Index>());
                    cells.push_back(IndexSet::from_unsorted(std::move(ids), space.size()));
                }
                config["cells"] = cells_json;
            } else if (!cell_files.empty()) {
                for (const auto& f : cell_files) cells.push_back(load_cell_csv(space, f));
                config["cells"] = cell_files;
            } else if (arcs_cells > 0) {
                const Index n = space.size();
                for (int c = 0; c < arcs_cells; ++c) {
                    std::vector<Index> ids;
                    for (Index i = static_cast<Index>(static_cast<long>(n) * c / arcs_cells);
                         i < static_cast<Index>(static_cast<long>(n) * (c + 1) / arcs_cells); ++i)
                        ids.push_back(i);
                    cells.emplace_back(std::move(ids));
                }
                config["cells_arcs"] = arcs_cells;
            } else {
                cells.push_back(IndexSet::full(space.size()));
            }
            json rep = base_report("measure", config);
            const auto f = field_or_file(o.field_expr);
            const auto mr = energy_measure(space, f, o.p, r_single, cells);
            const auto dr = density_vs_mu(space, f, o.p, r_single);
            rep["result"] = {{"masses", mr.masses},
                             {"total", mr.total},
                             {"max_density", dr.max_density},
                             {"p1_warning", dr.p1_warning}};
            emit(rep, t0, o.out_path);
        } else if (*poincare_cmd) {
            validate_scales(space, {big_r}, "poincare --R");
            config["field"] = o.field_expr;
            config["p"] = o.p;
            config["R"] = big_r;
            config["lambda"] = lambda;
            config["mode"] = mode;
            config["samples"] = samples;
            json rep = base_report("poincare", config);
            const auto pr = poincare_check(
                space, field_or_file(o.field_expr), o.p, big_r, lambda,
                mode == "lip" ? PoincareMode::Lip : PoincareMode::EnergyMeasure,
                static_cast<Index>(samples));
            rep["result"] = {{"worst_ratio", pr.worst_ratio},
                             {"centers", pr.centers},
                             {"ratios", pr.ratios}};
            emit(rep, t0, o.out_path);
        } else if (*fund_cmd) {
            validate_scales(space, {r_single}, "fundamental --r");
            config["p"] = o.p;
            config["r"] = r_single;
            config["eps_cvx"] = eps_cvx;
            config["count"] = count;
            json rep = base_report("fundamental", config);
            std::mt19937_64 rng(o.seed);
            auto random_config = [&]() {
                struct Cfg {
                    ScalarField f, g;
                    IndexSet a, ap, b;
                } c;
                c.f = make_random(space, rng());
                c.g = make_random(space, rng());
                const auto ca =
                    static_cast<Index>(rng() % static_cast<std::uint64_t>(space.size()));
                const Real ra = 0.15 + 0.15 * (static_cast<Real>(rng() >> 11) * 0x1.0p-53);
                c.a = space.ball(ca, ra);
                c.ap = space.ball(ca, ra * (0.3 + 0.3 * (static_cast<Real>(rng() >> 11) * 0x1.0p-53)));
                const auto cb =
                    static_cast<Index>(rng() % static_cast<std::uint64_t>(space.size()));
                c.b = space.ball(cb, 0.1 + 0.15 * (static_cast<Real>(rng() >> 11) * 0x1.0p-53));
                return c;
            };
            Real c_geom = 1.0;
            for (int t = 0; t < count; ++t) {
                const auto c = random_config();
                c_geom = std::max(c_geom, fundamental_required_constant(space, c.f, c.g, c.a, c.ap,
                                                                        c.b, eps_cvx, o.p,
                                                                        r_single));
            }
            int violations = 0;
            Real min_slack = 1e300;
            for (int t = 0; t < count; ++t) {
                const auto c = random_config();
                const auto est = fundamental_estimate_check(space, c.f, c.g, c.a, c.ap, c.b,
                                                            eps_cvx, o.p, r_single, c_geom);
                min_slack = std::min(min_slack, est.slack);
                if (est.slack < 0.0) ++violations;
            }
            rep["result"] = {{"calibrated_c_geom", c_geom},
                             {"violations", violations},
                             {"min_slack", min_slack}};
            emit(rep, t0, o.out_path);
            if (violations > 0) return 1;
        } else if (*tv_cmd) {
            const auto radii = parse_list(radii_csv);
            validate_scales(space, radii, "tv --radii");
            config["field"] = o.field_expr;
            config["radii"] = radii;
            json rep = base_report("tv", config);
            const auto tvr = total_variation(space, field_or_file(o.field_expr), radii);
            rep["result"] = sweep_to_json(tvr.sweep);
            emit(rep, t0, o.out_path);
            if (!o.csv_path.empty()) write_rv_csv(o.csv_path, tvr.sweep.radii, tvr.sweep.values);
        } else if (*perim_cmd) {
            const auto radii = parse_list(radii_csv);
            validate_scales(space, radii, "perimeter --radii");
            config["radii"] = radii;
            config["arcs"] = arcs;
            IndexSet set;
            for (const auto& arc : arcs) {
                const auto ab = parse_list(arc);
                if (ab.size() != 2) throw config_error("--arc needs a,b");
                std::vector<Index> ids;
                for (Index i = 0; i < space.size(); ++i) {
                    const Real x = space.coord(i, 0);
                    if (x >= ab[0] && x < ab[1]) ids.push_back(i);
                }
                set = set.set_union(IndexSet(std::move(ids)));
            }
            json rep = base_report("perimeter", config);
            const auto pr = perimeter(space, set, radii);
            rep["result"] = sweep_to_json(pr.sweep);
            if (pr.jump_reference) rep["result"]["jump_reference"] = *pr.jump_reference;
            emit(rep, t0, o.out_path);
            if (!o.csv_path.empty()) write_rv_csv(o.csv_path, pr.sweep.radii, pr.sweep.values);
        } else if (*compare_cmd) {
            const auto radii = parse_list(radii_csv);
            const auto eps_list = parse_list(eps_csv);
            validate_scales(space, radii, "compare-bv --radii");
            validate_scales(space, eps_list, "compare-bv --eps");
            config["fields"] = field_exprs;
            config["radii"] = radii;
            config["eps"] = eps_list;
            json rep = base_report("compare-bv", config);
            std::vector<std::pair<std::string, ScalarField>> fields;
            for (const auto& expr : field_exprs)
                fields.emplace_back(expr, field_or_file(expr));
            const auto cr = comparability_report(space, fields, radii, eps_list);
            json rows = json::array();
            for (const auto& row : cr.rows)
                rows.push_back({{"field", row.name},
                                {"tv_extrapolated", row.tv_extrapolated},
                                {"miranda_upper", row.miranda_upper},
                                {"ratio", row.ratio},
                                {"degenerate", row.degenerate}});
            rep["result"] = {{"rows", rows}, {"band", cr.band}};
            emit(rep, t0, o.out_path);
            if (!o.csv_path.empty()) {
                std::ostringstream os;
                os.precision(17);
                os << "field,tv_extrapolated,miranda_upper,ratio,degenerate\n";
                for (const auto& row : cr.rows)
                    os << row.name << ',' << row.tv_extrapolated << ',' << row.miranda_upper
                       << ',' << row.ratio << ',' << (row.degenerate ? 1 : 0) << '\n';
                write_text_file(o.csv_path, os.str());
            }
        } else if (*info_cmd) {
            json rep = base_report("space-info", config);
            json result;
            result["n"] = space.size();
            result["dim"] = space.dim();
            result["total_mass"] = space.total_mass();
            result["resolution_h"] = space.resolution();
            result["min_spacing"] = space.min_spacing();
            result["diameter_bound"] = space.diameter_bound();
            if (space.size() > 1) {
                std::vector<Real> radii;
                const Real lo = std::max(5.0 * space.resolution(), space.min_spacing());
                const Real hi = std::max(2.0 * lo, 0.2 * space.diameter_bound());
                for (int k = 0; k < 4; ++k) radii.push_back(lo + (hi - lo) * k / 3.0);
                std::vector<Index> pts;
                const Index stride = std::max<Index>(1, space.size() / 16);
                for (Index i = 0; i < space.size(); i += stride) pts.push_back(i);
                const auto [chat, qhat] = doubling_estimate(space, radii, pts);
                result["doubling_C_hat"] = chat;
                result["doubling_Q_hat"] = qhat;
            } else {
                result["doubling_C_hat"] = 1.0;
                result["doubling_Q_hat"] = 0.0;
            }
            rep["result"] = result;
            emit(rep, t0, o.out_path);
        } else if (*net_cmd) {
            const auto eps = parse_list(eps_csv);
            validate_scales(space, eps, "net --eps");
            config["eps"] = eps[0];
            json rep = base_report("net", config);
            const auto net = maximal_eps_net(space, eps[0]);
            rep["result"] = net_to_json(net);
            rep["result"]["covering_ok"] = net.covering_ok;
            rep["result"]["overlap_at_5"] = overlap_count(space, net, 5.0);
            if (!o.csv_path.empty()) {
                const auto pou = partition_of_unity(space, net);
                save_partition_csv(pou, o.csv_path);
                rep["result"]["partition_lip_bound"] = pou.lip_bound;
            }
            emit(rep, t0, o.out_path);
        }
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
