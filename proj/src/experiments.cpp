#include "parhom/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "json.hpp"
#include "parhom/errors.hpp"

namespace parhom {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kFamilies = {"identity", "percolation", "trig_multiscale",
                                         "fourier_modes", "fractal", "channel"};
const std::set<std::string> kSources = {"one", "travelling_sine"};
const std::set<std::string> kDumps = {"u", "u_comp", "grad_u", "grad_u_comp", "F", "a"};

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw ConfigError("cannot open output file " + p.string());
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (fine_n < 2) throw ConfigError("fine_n must be at least 2");
    if (!(T > 0.0)) throw ConfigError("T must be positive");
    if (coarse_n.empty()) throw ConfigError("coarse_n must be nonempty");
    for (const int nc : coarse_n) {
        if (nc < 2) throw ConfigError("coarse_n entries must be at least 2");
        if (fine_n % nc != 0) throw ConfigError("fine_n must be divisible by every coarse_n");
        if (nc >= fine_n) throw ConfigError("coarse_n entries must be smaller than fine_n");
    }
    if (!kFamilies.count(medium_family)) throw ConfigError("unknown medium family " + medium_family);
    if (!kSources.count(source)) throw ConfigError("unknown source " + source);
    if (!(solver_tol > 0.0)) throw ConfigError("solver tol must be positive");
    if (coarse_element != "p1") throw ConfigError("unsupported coarse element " + coarse_element);
    if (n_fine_steps < 0 || coarse_steps < 0) throw ConfigError("step counts must be nonnegative");
    if (n_fine_steps > 0 && coarse_steps > n_fine_steps)
        throw ConfigError("coarse_steps must not exceed n_fine_steps");
    if (n_fine_steps > 0 && coarse_steps > 0 && n_fine_steps % coarse_steps != 0)
        throw ConfigError("coarse_steps must divide n_fine_steps");
    for (const auto& d : dumps)
        if (!kDumps.count(d)) throw ConfigError("unknown dump field " + d);
}

void ExperimentConfig::resolve_steps(int& n_fine, int& m_steps) const {
    n_fine = n_fine_steps;
    if (n_fine == 0) {
        const double dt = 1.2e-4 * 128.0 / fine_n;
        n_fine = static_cast<int>(std::ceil(T / dt));
    }
    m_steps = coarse_steps;
    if (m_steps == 0) m_steps = std::max(1, n_fine / 20);
    // round the fine count up so coarse boundaries land on fine levels
    n_fine = ((n_fine + m_steps - 1) / m_steps) * m_steps;
}

namespace {

ExperimentConfig from_json(const json& j) {
    ExperimentConfig cfg;
    const std::set<std::string> top = {"medium",      "fine_n",        "coarse_n", "T",
                                       "n_fine_steps", "coarse_steps",  "source",   "output_dir",
                                       "diagnostics",  "solver",        "coarse_element", "dumps"};
    for (const auto& [key, _] : j.items())
        if (!top.count(key)) throw ConfigError("unknown config key " + key);
    if (j.contains("medium")) {
        const json& m = j.at("medium");
        if (m.contains("family")) cfg.medium_family = m.at("family").get<std::string>();
        if (m.contains("seed")) cfg.seed = m.at("seed").get<std::uint64_t>();
    }
    if (j.contains("fine_n")) cfg.fine_n = j.at("fine_n").get<int>();
    if (j.contains("coarse_n")) cfg.coarse_n = j.at("coarse_n").get<std::vector<int>>();
    if (j.contains("T")) cfg.T = j.at("T").get<double>();
    if (j.contains("n_fine_steps")) cfg.n_fine_steps = j.at("n_fine_steps").get<int>();
    if (j.contains("coarse_steps")) cfg.coarse_steps = j.at("coarse_steps").get<int>();
    if (j.contains("source")) cfg.source = j.at("source").get<std::string>();
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("diagnostics")) {
        const json& d = j.at("diagnostics");
        if (d.contains("cordes")) cfg.diagnostics.cordes = d.at("cordes").get<bool>();
        if (d.contains("compensation"))
            cfg.diagnostics.compensation = d.at("compensation").get<bool>();
        if (d.contains("det_check")) cfg.diagnostics.det_check = d.at("det_check").get<bool>();
    }
    if (j.contains("solver") && j.at("solver").contains("tol"))
        cfg.solver_tol = j.at("solver").at("tol").get<double>();
    if (j.contains("coarse_element")) cfg.coarse_element = j.at("coarse_element").get<std::string>();
    if (j.contains("dumps")) cfg.dumps = j.at("dumps").get<std::vector<std::string>>();
    cfg.validate();
    return cfg;
}

json to_json(const ExperimentConfig& cfg) {
    json j;
    j["medium"] = {{"family", cfg.medium_family}, {"seed", cfg.seed}};
    j["fine_n"] = cfg.fine_n;
    j["coarse_n"] = cfg.coarse_n;
    j["T"] = cfg.T;
    j["n_fine_steps"] = cfg.n_fine_steps;
    j["coarse_steps"] = cfg.coarse_steps;
    j["source"] = cfg.source;
    j["output_dir"] = cfg.output_dir;
    j["diagnostics"] = {{"cordes", cfg.diagnostics.cordes},
                        {"compensation", cfg.diagnostics.compensation},
                        {"det_check", cfg.diagnostics.det_check}};
    j["solver"] = {{"tol", cfg.solver_tol}};
    j["coarse_element"] = cfg.coarse_element;
    j["dumps"] = cfg.dumps;
    return j;
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    try {
        return from_json(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config schema error: ") + e.what());
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config_json(text);
}

std::string config_json(const ExperimentConfig& cfg) { return to_json(cfg).dump(2); }

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    // FNV-1a over the canonical dump
    const std::string s = to_json(cfg).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

SourceFn make_source(const std::string& name) {
    if (name == "one") return [](Vec2, double) { return 1.0; };
    if (name == "travelling_sine")
        return [](Vec2 x, double t) {
            return std::sin(2.4 * x.x - 1.8 * x.y + 2.0 * std::numbers::pi * t);
        };
    throw ConfigError("unknown source " + name);
}

Medium make_medium(const ExperimentConfig& cfg, const Mesh& mesh) {
    if (cfg.medium_family == "identity") return Medium::identity();
    if (cfg.medium_family == "percolation") return Medium::site_percolation(mesh, cfg.seed);
    if (cfg.medium_family == "trig_multiscale") return Medium::trig_multiscale();
    if (cfg.medium_family == "fourier_modes") return Medium::random_fourier(cfg.seed);
    if (cfg.medium_family == "fractal") return Medium::random_fractal(cfg.seed);
    if (cfg.medium_family == "channel") return Medium::channel(mesh, cfg.seed);
    throw ConfigError("unknown medium family " + cfg.medium_family);
}

namespace {

double source_l2(const Mesh& mesh, const SourceFn& g, double t) {
    double s = 0.0;
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const auto& tri = mesh.triangles[k];
        double q = 0.0;
        for (int v = 0; v < 3; ++v) {
            const double gv = g(mesh.nodes[tri[v]], t);
            q += gv * gv;
        }
        s += mesh.tri_area[k] / 3.0 * q;
    }
    return std::sqrt(s);
}

double min_lambda(const Mesh& mesh, const Medium& medium, double T) {
    std::vector<double> ts = medium.time_dependent() ? std::vector<double>{0.0, 0.5 * T, T}
                                                     : std::vector<double>{0.0};
    double lmin = std::numeric_limits<double>::max();
    for (const double t : ts)
        for (std::size_t k = 0; k < mesh.triangles.size(); ++k)
            lmin = std::min(lmin, medium.sample(mesh.centroid(static_cast<int>(k)), t).lambda_min());
    return lmin;
}

void write_error_series_csv(const fs::path& p, const std::vector<double>& times,
                            const std::vector<ErrorNorms>& series) {
    std::ofstream out = open_out(p);
    out << "t,L1,L2,Linf,H1\n";
    char buf[160];
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g\n", times[i], series[i].l1,
                      series[i].l2, series[i].linf, series[i].h1);
        out << buf;
    }
}

}  // namespace

namespace {

void run_experiment_impl(const ExperimentConfig& cfg, RunResult& r, std::string& stage,
                         std::vector<std::string>& outputs);

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();
    RunResult r;
    r.config = cfg;
    std::string stage = "setup";
    std::vector<std::string> outputs;
    try {
        run_experiment_impl(cfg, r, stage, outputs);
    } catch (const std::exception& e) {
        if (!cfg.output_dir.empty()) {
            fs::create_directories(cfg.output_dir);
            json m;
            m["config"] = to_json(cfg);
            m["failed_stage"] = stage;
            m["error"] = e.what();
            auto out = open_out(fs::path(cfg.output_dir) / "manifest.json");
            out << m.dump(2) << "\n";
        }
        throw;
    }
    r.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    if (!cfg.output_dir.empty()) {
        json m;
        m["config"] = to_json(cfg);
        char hex[32];
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(config_hash(cfg)));
        m["config_hash"] = hex;
        m["version"] = "parhom 1.0.0";
        m["seed"] = cfg.seed;
        m["n_fine_steps"] = r.n_fine;
        m["coarse_steps"] = r.m_steps;
        m["lambda_min"] = r.lambda_min;
        m["min_det"] = r.min_det;
        m["degenerate_level_count"] = r.degenerate_levels.size();
        if (r.has_cordes) {
            m["cordes_beta"] = r.cordes.beta;
            m["condition_1_1"] = r.cordes.condition_1_1;
        }
        if (r.has_compensation) m["compensation_ratio"] = r.compensation;
        if (!r.diagnostics_error.empty()) m["diagnostics_error"] = r.diagnostics_error;
        json per;
        for (const auto& cr : r.coarse) {
            json c;
            c["coarse_n"] = cr.coarse_n;
            c["dofs"] = cr.dofs;
            c["final_fine_l2"] = cr.final_fine.l2;
            c["final_coarse_l2"] = cr.final_coarse.l2;
            c["stability_c"] = cr.stability_c;
            c["compression"] = cr.compression;
            if (cr.has_semidiscrete) c["semidiscrete_final_fine_l2"] = cr.semidiscrete_final_fine.l2;
            per.push_back(c);
        }
        m["coarse_runs"] = per;
        outputs.push_back("manifest.json");
        m["outputs"] = outputs;
        m["wall_seconds"] = r.wall_seconds;
        auto out = open_out(fs::path(cfg.output_dir) / "manifest.json");
        out << m.dump(2) << "\n";
    }
    return r;
}

namespace {

void run_experiment_impl(const ExperimentConfig& cfg, RunResult& r, std::string& stage,
                         std::vector<std::string>& outputs) {
    cfg.resolve_steps(r.n_fine, r.m_steps);
    const int stride = r.n_fine / r.m_steps;

    stage = "medium";
    const Mesh mesh = build_uniform_mesh(cfg.fine_n);
    const Medium medium = make_medium(cfg, mesh);
    const SourceFn g = make_source(cfg.source);

    stage = "fine_reference";
    FineSolveOptions fopts;
    fopts.tol = cfg.solver_tol;
    fopts.store_stride = stride;
    const Trajectory fine = fine_reference_solve(mesh, medium, g, cfg.T, r.n_fine, fopts);

    stage = "harmonic_map";
    const HarmonicMap map = evolve_F(mesh, medium, cfg.T, r.n_fine, cfg.solver_tol);
    r.degenerate_levels = map.degenerate_levels;

    std::vector<int> sample_levels = {0};
    if (!map.time_independent) {
        sample_levels.push_back(r.n_fine / 2);
        sample_levels.push_back(r.n_fine);
    }
    if (cfg.diagnostics.det_check) {
        r.min_det = std::numeric_limits<double>::max();
        for (const int lvl : sample_levels) r.min_det = std::min(r.min_det, map.min_det(lvl));
    }

    fs::path out_dir;
    if (!cfg.output_dir.empty()) {
        out_dir = cfg.output_dir;
        fs::create_directories(out_dir);
    }

    stage = "diagnostics";
    SigmaField sigma;
    if (cfg.diagnostics.cordes) {
        sigma = compute_sigma(mesh, medium, map, sample_levels);
        r.cordes = cordes_report(sigma);
        r.has_cordes = true;
        if (!out_dir.empty()) {
            auto cj = open_out(out_dir / "cordes.json");
            write_cordes_json(r.cordes, cj);
            outputs.push_back("cordes.json");
            auto bc = open_out(out_dir / "beta.csv");
            write_beta_csv(mesh, sigma, bc);
            outputs.push_back("beta.csv");
        }
    }
    if (cfg.diagnostics.compensation) {
        try {
            const int final_level = map.time_independent ? 0 : r.n_fine;
            r.compensation = compensation_ratio(mesh, fine.fields.back(), map.at_level(final_level),
                                                cfg.fine_n + 1);
            r.has_compensation = true;
        } catch (const std::exception& e) {
            r.diagnostics_error = e.what();
        }
    }

    r.lambda_min = min_lambda(mesh, medium, cfg.T);
    const bool const_source = (cfg.source == "one");
    const double g_l2_0 = source_l2(mesh, g, 0.0);

    std::vector<std::pair<int, ErrorNorms>> finals_fine, finals_coarse;
    for (const int nc : cfg.coarse_n) {
        stage = "coarse_nc" + std::to_string(nc);
        const CoarseSpace space(nc, map, mesh);
        const CoarseTrajectory traj = run_coarse_solver(space, medium, g, cfg.T, r.m_steps);

        CoarseRunResult cr;
        cr.coarse_n = nc;
        cr.dofs = space.n_dof();
        cr.compression = static_cast<double>(r.n_fine) * mesh.n_interior /
                         (static_cast<double>(r.m_steps) * cr.dofs);

        double prev_energy = 0.0;
        for (int n = 1; n <= r.m_steps; ++n) {
            const int level = n * stride;
            const std::vector<double> rec = reconstruct(space, traj.c[n], level);
            const double en = l2_norm(mesh, rec);
            const double energy = en * en;
            const double gl2 = const_source ? g_l2_0 : source_l2(mesh, g, traj.times[n]);
            const double supply = traj.dt * gl2 * gl2;
            if (supply > 0.0)
                cr.stability_c =
                    std::max(cr.stability_c, (energy - prev_energy) * r.lambda_min / supply);
            prev_energy = energy;

            const int si = fine.stored_index(level);
            if (si < 0) continue;
            cr.times.push_back(traj.times[n]);
            cr.fine_series.push_back(relative_errors_fine(mesh, fine.fields[si], rec));
            cr.coarse_series.push_back(
                relative_errors_coarse(space.coarse_mesh(), mesh, fine.fields[si], rec));
        }
        if (cr.fine_series.empty())
            throw ConfigError("no stored fine levels align with coarse boundaries");
        cr.final_fine = cr.fine_series.back();
        cr.final_coarse = cr.coarse_series.back();

        if (!medium.time_dependent()) {
            const CoarseTrajectory semi =
                solve_coarse_semidiscrete(space, medium, g, cfg.T, r.m_steps);
            const std::vector<double> rec = reconstruct(space, semi.c.back(), 0);
            cr.semidiscrete_final_fine =
                relative_errors_fine(mesh, fine.fields.back(), rec);
            cr.has_semidiscrete = true;
        }

        if (!out_dir.empty()) {
            char name[64];
            std::snprintf(name, sizeof(name), "errors_nc%d_fine.csv", nc);
            write_error_series_csv(out_dir / name, cr.times, cr.fine_series);
            outputs.emplace_back(name);
            std::snprintf(name, sizeof(name), "errors_nc%d_coarse.csv", nc);
            write_error_series_csv(out_dir / name, cr.times, cr.coarse_series);
            outputs.emplace_back(name);
        }
        finals_fine.emplace_back(nc, cr.final_fine);
        finals_coarse.emplace_back(nc, cr.final_coarse);
        r.coarse.push_back(std::move(cr));
    }

    stage = "tables";
    if (!out_dir.empty()) {
        {
            auto out = open_out(out_dir / "table_fine.csv");
            write_error_table_csv(convergence_table(finals_fine), out);
            outputs.emplace_back("table_fine.csv");
        }
        {
            auto out = open_out(out_dir / "table_coarse.csv");
            write_error_table_csv(convergence_table(finals_coarse), out);
            outputs.emplace_back("table_coarse.csv");
        }
        if (!cfg.dumps.empty()) {
            stage = "dumps";
            emit_field_dumps(mesh, fine, map, medium, cfg.dumps, cfg.fine_n + 1,
                             out_dir.string());
            for (const auto& d : cfg.dumps) outputs.push_back("dump_" + d + ".csv");
        }
    }
}

}  // namespace

namespace {

ExperimentConfig suite_config(const std::string& name, const SuiteOptions& opts) {
    ExperimentConfig cfg;
    cfg.fine_n = opts.fine_n;
    cfg.seed = opts.seed;
    cfg.coarse_n.clear();
    for (int nc = 4; nc <= opts.fine_n / 4; nc *= 2) cfg.coarse_n.push_back(nc);
    cfg.output_dir = (fs::path(opts.output_dir) / name).string();
    if (name == "percolation") {
        cfg.medium_family = "percolation";
        cfg.T = 1.0;
    } else if (name == "channel") {
        cfg.medium_family = "channel";
        cfg.T = 1.0;
    } else if (name == "trig") {
        cfg.medium_family = "trig_multiscale";
        cfg.T = 0.1;
    } else if (name == "fourier") {
        cfg.medium_family = "fourier_modes";
        cfg.T = 1.0;
    } else if (name == "fractal") {
        cfg.medium_family = "fractal";
        cfg.T = 1.0;
    } else {
        throw ConfigError("unknown suite " + name);
    }
    return cfg;
}

}  // namespace

std::vector<RunResult> run_suite(const std::string& name, const SuiteOptions& opts) {
    std::vector<std::string> names;
    if (name == "all")
        names = {"percolation", "channel", "trig", "fourier", "fractal"};
    else
        names = {name};

    std::vector<RunResult> results;
    json summary;
    for (const auto& nm : names) {
        json entry;
        entry["suite"] = nm;
        try {
            const ExperimentConfig cfg = suite_config(nm, opts);
            RunResult r = run_experiment(cfg);
            json per;
            for (const auto& cr : r.coarse)
                per.push_back({{"dofs", cr.dofs},
                               {"final_fine_l2", cr.final_fine.l2},
                               {"final_coarse_l2", cr.final_coarse.l2},
                               {"compression", cr.compression}});
            entry["coarse_runs"] = per;
            entry["wall_seconds"] = r.wall_seconds;
            entry["ok"] = true;
            results.push_back(std::move(r));
        } catch (const std::exception& e) {
            entry["ok"] = false;
            entry["error"] = e.what();
        }
        summary.push_back(entry);
    }
    fs::create_directories(opts.output_dir);
    auto out = open_out(fs::path(opts.output_dir) / "summary.json");
    out << summary.dump(2) << "\n";
    return results;
}

namespace {

using GridFn = std::function<void(Vec2, std::ostream&)>;

void dump_grid(const fs::path& p, int m, const char* header, const GridFn& fn) {
    std::ofstream out = open_out(p);
    out << header << "\n";
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            const Vec2 x{-1.0 + 2.0 * i / (m - 1), -1.0 + 2.0 * j / (m - 1)};
            char buf[48];
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,", x.x, x.y);
            out << buf;
            fn(x, out);
            out << "\n";
        }
}

Vec2 p1_gradient(const Mesh& mesh, std::span<const double> nodal, int tri) {
    Vec2 g{0.0, 0.0};
    const auto& t = mesh.triangles[tri];
    for (int v = 0; v < 3; ++v) g = g + nodal[t[v]] * mesh.tri_grad[tri][v];
    return g;
}

}  // namespace

void emit_field_dumps(const Mesh& mesh, const Trajectory& fine, const HarmonicMap& map,
                      const Medium& medium, const std::vector<std::string>& which, int m,
                      const std::string& out_dir) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const std::set<std::string> want(which.begin(), which.end());
    const std::vector<double>& u = fine.fields.back();
    const double t_final = fine.times.back();
    const int final_level = map.time_independent ? 0 : map.n_levels() - 1;
    const std::vector<Vec2>& f = map.at_level(final_level);

    auto val = [](std::ostream& out, double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        out << buf;
    };

    if (want.count("u"))
        dump_grid(dir / "dump_u.csv", m, "x,y,u", [&](Vec2 x, std::ostream& out) {
            val(out, p1_interpolate(mesh, u, locate_point(mesh, x)));
        });
    if (want.count("grad_u"))
        dump_grid(dir / "dump_grad_u.csv", m, "x,y,gx,gy", [&](Vec2 x, std::ostream& out) {
            const Vec2 g = p1_gradient(mesh, u, locate_point(mesh, x).triangle);
            val(out, g.x);
            out << ",";
            val(out, g.y);
        });
    if (want.count("F"))
        dump_grid(dir / "dump_F.csv", m, "x,y,F1,F2", [&](Vec2 x, std::ostream& out) {
            const PointLocation loc = locate_point(mesh, x);
            Vec2 fx{0.0, 0.0};
            for (int v = 0; v < 3; ++v)
                fx = fx + loc.bary[v] * f[mesh.triangles[loc.triangle][v]];
            val(out, fx.x);
            out << ",";
            val(out, fx.y);
        });
    if (want.count("a"))
        dump_grid(dir / "dump_a.csv", m, "x,y,a11,a12,a22", [&](Vec2 x, std::ostream& out) {
            const TensorSample a = medium.sample(x, t_final);
            val(out, a.a11);
            out << ",";
            val(out, a.a12);
            out << ",";
            val(out, a.a22);
        });
    if (want.count("u_comp") || want.count("grad_u_comp")) {
        std::vector<Vec2> grid;
        grid.reserve(static_cast<std::size_t>(m) * m);
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i)
                grid.push_back({-1.0 + 2.0 * i / (m - 1), -1.0 + 2.0 * j / (m - 1)});
        const std::vector<PointLocation> locs = invert_map(mesh, f, grid);
        if (want.count("u_comp")) {
            std::ofstream out = open_out(dir / "dump_u_comp.csv");
            out << "x,y,u_comp\n";
            char buf[96];
            for (std::size_t q = 0; q < grid.size(); ++q) {
                double v = 0.0;
                for (int k = 0; k < 3; ++k)
                    v += locs[q].bary[k] * u[mesh.triangles[locs[q].triangle][k]];
                std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", grid[q].x, grid[q].y, v);
                out << buf;
            }
        }
        if (want.count("grad_u_comp")) {
            // P1 gradient of u o F^{-1} on the deformed (image) triangles
            std::ofstream out = open_out(dir / "dump_grad_u_comp.csv");
            out << "x,y,gx,gy\n";
            char buf[128];
            for (std::size_t q = 0; q < grid.size(); ++q) {
                const auto& tri = mesh.triangles[locs[q].triangle];
                const Vec2 p0 = f[tri[0]], p1 = f[tri[1]], p2 = f[tri[2]];
                const double det =
                    (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
                const Vec2 g0{(p1.y - p2.y) / det, (p2.x - p1.x) / det};
                const Vec2 g1{(p2.y - p0.y) / det, (p0.x - p2.x) / det};
                const Vec2 g2{(p0.y - p1.y) / det, (p1.x - p0.x) / det};
                const Vec2 g = u[tri[0]] * g0 + u[tri[1]] * g1 + u[tri[2]] * g2;
                std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g\n", grid[q].x, grid[q].y,
                              g.x, g.y);
                out << buf;
            }
        }
    }
}

}  // namespace parhom
