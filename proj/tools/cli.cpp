#include "cli.hpp"

#include "invevo/augment.hpp"
#include "invevo/config.hpp"
#include "invevo/errors.hpp"
#include "invevo/io.hpp"
#include "invevo/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace invevo::cli {

namespace {

struct SharedFlags {
    std::optional<std::string> pde, disc, preprocess, config, source, ref_method;
    std::optional<double> nu, epsilon, dt, ref_dt, t_final, save_every;
    std::optional<int> resolution, order, threads;
    std::optional<std::uint64_t> seed, count;
    std::string out;
};

void add_shared(CLI::App& app, SharedFlags& f) {
    app.add_option("--pde", f.pde, "heat | burgers | allen-cahn | navier-stokes")
        ->check(CLI::IsMember({"heat", "burgers", "allen-cahn", "navier-stokes"}));
    app.add_option("--nu", f.nu, "viscosity / diffusion coefficient");
    app.add_option("--epsilon", f.epsilon, "Allen-Cahn interface width");
    app.add_option("--resolution", f.resolution, "grid points per axis");
    app.add_option("--dt", f.dt, "time gap of each pair");
    app.add_option("--order", f.order, "inverse scheme order")->check(CLI::IsMember({1, 2, 3}));
    app.add_option("--disc", f.disc, "fd | spectral")->check(CLI::IsMember({"fd", "spectral"}));
    app.add_option("--seed", f.seed, "generation seed");
    app.add_option("--count", f.count, "pairs (trajectories for generate)");
    app.add_option("--preprocess", f.preprocess, "enable rescaling: a,cmin,cmax");
    app.add_option("--config", f.config, "config file or .meta sidecar; its keys override flags");
    app.add_option("--ref-method", f.ref_method, "oracle method: euler | cn")
        ->check(CLI::IsMember({"euler", "cn"}));
    app.add_option("--ref-dt", f.ref_dt, "oracle step");
    app.add_option("--threads", f.threads, "worker threads (0 = runtime default)");
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

// Flags become config lines; the config file is appended so that it wins.
RunConfig resolve(const SharedFlags& f, bool count_is_trajectories) {
    std::string text;
    auto line = [&](const char* key, const std::string& value) { text += std::string(key) + " = " + value + "\n"; };
    if (f.pde) line("pde", *f.pde);
    if (f.nu) line("nu", fmt(*f.nu));
    if (f.epsilon) line("epsilon", fmt(*f.epsilon));
    if (f.disc) line("disc", *f.disc);
    if (f.resolution) line("resolution", std::to_string(*f.resolution));
    if (f.dt) line("dt", fmt(*f.dt));
    if (f.order) line("order", std::to_string(*f.order));
    if (f.seed) line("seed", std::to_string(*f.seed));
    if (f.count) line(count_is_trajectories ? "source.count" : "count", std::to_string(*f.count));
    if (f.source) line("source.path", *f.source);
    if (f.ref_method) line("ref.method", *f.ref_method);
    if (f.ref_dt) line("ref.dt_ref", fmt(*f.ref_dt));
    if (f.t_final) line("source.t_final", fmt(*f.t_final));
    if (f.save_every) line("source.save_every", fmt(*f.save_every));
    if (f.threads) line("threads", std::to_string(*f.threads));
    if (f.preprocess) {
        std::vector<std::string> parts;
        std::stringstream ss(*f.preprocess);
        for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
        if (parts.size() != 3) throw ArgumentError("--preprocess expects a,cmin,cmax");
        line("preprocess.enabled", "true");
        line("preprocess.a", parts[0]);
        line("preprocess.c_min", parts[1]);
        line("preprocess.c_max", parts[2]);
    }
    if (f.config) {
        std::string cfg_text = read_text(*f.config);
        const auto parsed = nlohmann::json::parse(cfg_text, nullptr, false);
        if (parsed.is_object()) {
            if (!parsed.contains("run_config")) throw ArgumentError(*f.config + " has no run_config entry");
            cfg_text = parsed.at("run_config").get<std::string>();
        }
        text += cfg_text;
        if (!text.empty() && text.back() != '\n') text += '\n';
    }
    RunConfig cfg = parse_run_config(text);
    cfg.augment.validate();
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    return cfg;
}

std::optional<RefConfig> ref_override(const RunConfig& cfg) {
    if (!cfg.ref_dt && !cfg.ref_method) return std::nullopt;
    RefConfig ref;
    if (cfg.ref_method) ref.method = *cfg.ref_method;
    else if (cfg.augment.spec.kind == PdeKind::NavierStokes2D) ref.method = RefMethod::SemiImplicitSpectralCN;
    if (cfg.ref_dt) ref.dt_ref = *cfg.ref_dt;
    ref.cfl_safety = cfg.ref_cfl_safety;
    return ref;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

int cmd_generate(const SharedFlags& f, std::ostream& out) {
    if (f.out.empty()) throw ArgumentError("generate requires --out");
    RunConfig cfg = resolve(f, true);
    Dataset ds = generate_reference_dataset(cfg.augment.spec, cfg.augment.resolution, cfg.source, cfg.seed);
    ds.run_config = to_text(cfg);
    write_dataset(ds, f.out);
    out << "wrote " << ds.pairs.size() << " reference pairs from " << cfg.source.count << " trajectories to "
        << f.out << '\n';
    return kExitOk;
}

int cmd_augment(const SharedFlags& f, std::ostream& out) {
    if (f.out.empty()) throw ArgumentError("augment requires --out");
    RunConfig cfg = resolve(f, false);
    const auto& a = cfg.augment;
    std::optional<Dataset> source;
    std::string digest;
    if (!cfg.source_path.empty()) {
        source = read_dataset(cfg.source_path);
        digest = recorded_checksum(cfg.source_path);
    } else {
        source = generate_reference_dataset(a.spec, a.resolution, cfg.source, cfg.seed);
    }
    Dataset ds = generate_augmented(*source, a, cfg.seed);
    ds.run_config = to_text(cfg);
    ds.source_digest = digest;
    write_dataset(ds, f.out);
    out << "wrote " << ds.pairs.size() << " pairs (" << ds.tally.attempts << " attempts, " << ds.tally.rejected()
        << " rejected) to " << f.out << '\n';
    return kExitOk;
}

int cmd_verify(const std::string& path, const SharedFlags& f, const std::string& plot, std::ostream& out) {
    const Dataset ds = read_dataset(path);
    RunConfig cfg = parse_run_config(ds.run_config.empty() ? "pde = " + std::string(to_string(ds.spec.kind))
                                                           : ds.run_config);
    if (f.ref_method) cfg.ref_method = parse_ref_method(*f.ref_method);
    if (f.ref_dt) cfg.ref_dt = *f.ref_dt;
    if (f.threads && *f.threads > 0) omp_set_num_threads(*f.threads);
    const AccuracyReport report = accuracy_report(ds, ref_override(cfg));
    const std::string json = to_json(report);
    out << json << '\n';
    if (!f.out.empty()) write_text(f.out, json + "\n");
    if (!plot.empty()) write_text(plot, error_histogram_svg(report));
    return report.headline() == "—" ? kExitFailure : kExitOk;
}

int cmd_bench(const SharedFlags& f, std::ostream& out) {
    RunConfig cfg = resolve(f, false);
    BenchConfig b;
    b.spec = cfg.augment.spec;
    b.resolution = cfg.augment.resolution;
    b.count = cfg.augment.count;
    b.dt = cfg.augment.dt;
    b.order = cfg.augment.order;
    b.dt_ref = cfg.ref_dt;
    b.ic = cfg.source.ic;
    b.seed = cfg.seed;
    b.threads = cfg.threads > 0 ? cfg.threads : 1;
    const auto reports = benchmark_generation(b);
    const std::string json = to_json(reports);
    out << json << '\n';
    if (!f.out.empty()) write_text(f.out, json + "\n");
    return kExitOk;
}

int cmd_info(const std::string& path, std::ostream& out) {
    out << format_info(read_header(path));
    std::ifstream side(sidecar_path(path));
    if (side) {
        out << "metadata:\n" << side.rdbuf();
    }
    return kExitOk;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Inverse-evolution data generation for neural PDE surrogates", "invevo"};
    app.require_subcommand(1);

    SharedFlags gen_f, aug_f, ver_f, bench_f;
    auto* gen = app.add_subcommand("generate", "solve reference trajectories");
    add_shared(*gen, gen_f);
    gen->add_option("--t-final", gen_f.t_final, "trajectory length");
    gen->add_option("--save-every", gen_f.save_every, "spacing of saved states");
    gen->add_option("--out", gen_f.out, "output dataset path")->required();

    auto* aug = app.add_subcommand("augment", "inverse-evolution dataset from mixed source states");
    add_shared(*aug, aug_f);
    aug->add_option("--source", aug_f.source, "reference dataset; generated internally when absent");
    aug->add_option("--out", aug_f.out, "output dataset path")->required();

    std::string verify_path, plot_path;
    auto* ver = app.add_subcommand("verify", "accuracy report against the forward oracle");
    ver->add_option("path", verify_path, "dataset")->required();
    ver->add_option("--ref-method", ver_f.ref_method, "oracle method: euler | cn")
        ->check(CLI::IsMember({"euler", "cn"}));
    ver->add_option("--ref-dt", ver_f.ref_dt, "oracle step");
    ver->add_option("--threads", ver_f.threads, "worker threads");
    ver->add_option("--out", ver_f.out, "write the report here");
    ver->add_option("--plot", plot_path, "write an SVG error histogram here");

    auto* bench = app.add_subcommand("bench", "time inverse evolution against explicit Euler");
    add_shared(*bench, bench_f);
    bench->add_option("--out", bench_f.out, "write the report here");

    std::string info_path;
    auto* info = app.add_subcommand("info", "print header and metadata");
    info->add_option("path", info_path, "dataset")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen) return cmd_generate(gen_f, out);
        if (*aug) return cmd_augment(aug_f, out);
        if (*ver) return cmd_verify(verify_path, ver_f, plot_path, out);
        if (*bench) return cmd_bench(bench_f, out);
        if (*info) return cmd_info(info_path, out);
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigurationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed config: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "failed: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

} // namespace invevo::cli
