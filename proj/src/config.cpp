#include "invevo/config.hpp"

#include "invevo/errors.hpp"

#include <charconv>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace invevo {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ArgumentError("config key '" + std::string(key) + "': expected a number, got '" + std::string(v) + "'");
    }
    return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v) {
    Int out{};
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ArgumentError("config key '" + std::string(key) + "': expected an integer, got '" + std::string(v) + "'");
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ArgumentError("config key '" + std::string(key) + "': expected true or false");
}

std::vector<double> parse_list(std::string_view key, std::string_view v) {
    std::vector<double> out;
    if (v.empty()) return out;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        const auto comma = v.find(',', pos);
        const auto item = trim(v.substr(pos, comma == std::string_view::npos ? v.size() - pos : comma - pos));
        out.push_back(parse_double(key, item));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string fmt_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += fmt_double(values[i]);
    }
    return out;
}

struct Key {
    const char* name;
    bool augment_only;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, std::string_view)> set;
};

const std::vector<Key>& keys() {
    static const std::vector<Key> table = [] {
        std::vector<Key> k;
        auto add = [&k](const char* name, bool aug, auto get, auto set) {
            k.push_back(Key{name, aug, get, set});
        };
        add("pde", true, [](const RunConfig& c) { return std::string(to_string(c.augment.spec.kind)); },
            [](RunConfig& c, std::string_view v) { c.augment.spec.kind = parse_pde_kind(v); });
        add("nu", true, [](const RunConfig& c) { return fmt_double(c.augment.spec.nu); },
            [](RunConfig& c, std::string_view v) { c.augment.spec.nu = parse_double("nu", v); });
        add("epsilon", true, [](const RunConfig& c) { return fmt_double(c.augment.spec.epsilon); },
            [](RunConfig& c, std::string_view v) { c.augment.spec.epsilon = parse_double("epsilon", v); });
        add("disc", true, [](const RunConfig& c) { return std::string(to_string(c.augment.spec.disc)); },
            [](RunConfig& c, std::string_view v) { c.augment.spec.disc = parse_disc(v); });
        add("forcing_amplitude", true, [](const RunConfig& c) { return fmt_double(c.augment.spec.forcing_amplitude); },
            [](RunConfig& c, std::string_view v) {
                c.augment.spec.forcing_amplitude = parse_double("forcing_amplitude", v);
            });
        add("resolution", true, [](const RunConfig& c) { return std::to_string(c.augment.resolution); },
            [](RunConfig& c, std::string_view v) { c.augment.resolution = parse_int<int>("resolution", v); });
        add("dt", true, [](const RunConfig& c) { return fmt_double(c.augment.dt); },
            [](RunConfig& c, std::string_view v) { c.augment.dt = parse_double("dt", v); });
        add("order", true, [](const RunConfig& c) { return std::to_string(c.augment.order.value()); },
            [](RunConfig& c, std::string_view v) { c.augment.order = SchemeOrder(parse_int<int>("order", v)); });
        add("count", true, [](const RunConfig& c) { return std::to_string(c.augment.count); },
            [](RunConfig& c, std::string_view v) { c.augment.count = parse_int<std::uint64_t>("count", v); });
        add("blowup_factor", true, [](const RunConfig& c) { return fmt_double(c.augment.blowup_factor); },
            [](RunConfig& c, std::string_view v) { c.augment.blowup_factor = parse_double("blowup_factor", v); });
        add("mix.k", true, [](const RunConfig& c) { return std::to_string(c.augment.mix.k); },
            [](RunConfig& c, std::string_view v) { c.augment.mix.k = parse_int<int>("mix.k", v); });
        add("mix.lambda_mode", true,
            [](const RunConfig& c) {
                return std::string(c.augment.mix.lambda_mode == LambdaMode::Convex ? "convex" : "fixed");
            },
            [](RunConfig& c, std::string_view v) {
                if (v == "convex") {
                    c.augment.mix.lambda_mode = LambdaMode::Convex;
                } else if (v == "fixed") {
                    c.augment.mix.lambda_mode = LambdaMode::Fixed;
                } else {
                    throw ArgumentError("mix.lambda_mode must be convex or fixed");
                }
            });
        add("mix.lambdas", true, [](const RunConfig& c) { return fmt_list(c.augment.mix.lambdas); },
            [](RunConfig& c, std::string_view v) { c.augment.mix.lambdas = parse_list("mix.lambdas", v); });
        add("mix.c_min", true, [](const RunConfig& c) { return fmt_double(c.augment.mix.c_min); },
            [](RunConfig& c, std::string_view v) { c.augment.mix.c_min = parse_double("mix.c_min", v); });
        add("mix.c_max", true, [](const RunConfig& c) { return fmt_double(c.augment.mix.c_max); },
            [](RunConfig& c, std::string_view v) { c.augment.mix.c_max = parse_double("mix.c_max", v); });
        add("preprocess.enabled", true,
            [](const RunConfig& c) { return std::string(c.augment.preprocess.enabled ? "true" : "false"); },
            [](RunConfig& c, std::string_view v) {
                c.augment.preprocess.enabled = parse_bool("preprocess.enabled", v);
            });
        add("preprocess.a", true, [](const RunConfig& c) { return fmt_double(c.augment.preprocess.a); },
            [](RunConfig& c, std::string_view v) { c.augment.preprocess.a = parse_double("preprocess.a", v); });
        add("preprocess.c_min", true, [](const RunConfig& c) { return fmt_double(c.augment.preprocess.c_min); },
            [](RunConfig& c, std::string_view v) {
                c.augment.preprocess.c_min = parse_double("preprocess.c_min", v);
            });
        add("preprocess.c_max", true, [](const RunConfig& c) { return fmt_double(c.augment.preprocess.c_max); },
            [](RunConfig& c, std::string_view v) {
                c.augment.preprocess.c_max = parse_double("preprocess.c_max", v);
            });
        add("ref.method", false,
            [](const RunConfig& c) { return c.ref_method ? std::string(to_string(*c.ref_method)) : "auto"; },
            [](RunConfig& c, std::string_view v) {
                if (v == "auto") {
                    c.ref_method.reset();
                } else {
                    c.ref_method = parse_ref_method(v);
                }
            });
        add("ref.dt_ref", false, [](const RunConfig& c) { return c.ref_dt ? fmt_double(*c.ref_dt) : "auto"; },
            [](RunConfig& c, std::string_view v) {
                if (v == "auto") {
                    c.ref_dt.reset();
                } else {
                    c.ref_dt = parse_double("ref.dt_ref", v);
                }
            });
        add("ref.cfl_safety", false, [](const RunConfig& c) { return fmt_double(c.ref_cfl_safety); },
            [](RunConfig& c, std::string_view v) { c.ref_cfl_safety = parse_double("ref.cfl_safety", v); });
        add("seed", false, [](const RunConfig& c) { return std::to_string(c.seed); },
            [](RunConfig& c, std::string_view v) { c.seed = parse_int<std::uint64_t>("seed", v); });
        add("threads", false, [](const RunConfig& c) { return std::to_string(c.threads); },
            [](RunConfig& c, std::string_view v) { c.threads = parse_int<int>("threads", v); });
        add("source.path", false, [](const RunConfig& c) { return c.source_path; },
            [](RunConfig& c, std::string_view v) { c.source_path = std::string(v); });
        add("source.count", false, [](const RunConfig& c) { return std::to_string(c.source.count); },
            [](RunConfig& c, std::string_view v) { c.source.count = parse_int<std::uint32_t>("source.count", v); });
        add("source.t_start", false, [](const RunConfig& c) { return fmt_double(c.source.t_start); },
            [](RunConfig& c, std::string_view v) { c.source.t_start = parse_double("source.t_start", v); });
        add("source.t_final", false, [](const RunConfig& c) { return fmt_double(c.source.t_final); },
            [](RunConfig& c, std::string_view v) { c.source.t_final = parse_double("source.t_final", v); });
        add("source.save_every", false, [](const RunConfig& c) { return fmt_double(c.source.save_every); },
            [](RunConfig& c, std::string_view v) { c.source.save_every = parse_double("source.save_every", v); });
        add("source.dt_ref", false,
            [](const RunConfig& c) { return c.source.dt_ref ? fmt_double(*c.source.dt_ref) : "auto"; },
            [](RunConfig& c, std::string_view v) {
                if (v == "auto") {
                    c.source.dt_ref.reset();
                } else {
                    c.source.dt_ref = parse_double("source.dt_ref", v);
                }
            });
        add("source.single_precision", false,
            [](const RunConfig& c) { return std::string(c.source.single_precision ? "true" : "false"); },
            [](RunConfig& c, std::string_view v) {
                c.source.single_precision = parse_bool("source.single_precision", v);
            });
        add("source.refine", false, [](const RunConfig& c) { return std::to_string(c.source.refine); },
            [](RunConfig& c, std::string_view v) { c.source.refine = parse_int<int>("source.refine", v); });
        add("ic.alpha", false, [](const RunConfig& c) { return fmt_double(c.source.ic.alpha); },
            [](RunConfig& c, std::string_view v) { c.source.ic.alpha = parse_double("ic.alpha", v); });
        add("ic.tau", false, [](const RunConfig& c) { return fmt_double(c.source.ic.tau); },
            [](RunConfig& c, std::string_view v) { c.source.ic.tau = parse_double("ic.tau", v); });
        add("ic.waves", false, [](const RunConfig& c) { return std::to_string(c.source.ic.waves); },
            [](RunConfig& c, std::string_view v) { c.source.ic.waves = parse_int<int>("ic.waves", v); });
        add("ic.max_wavenumber", false, [](const RunConfig& c) { return std::to_string(c.source.ic.max_wavenumber); },
            [](RunConfig& c, std::string_view v) {
                c.source.ic.max_wavenumber = parse_int<int>("ic.max_wavenumber", v);
            });
        add("ic.amplitude", false, [](const RunConfig& c) { return fmt_double(c.source.ic.amplitude); },
            [](RunConfig& c, std::string_view v) { c.source.ic.amplitude = parse_double("ic.amplitude", v); });
        add("ic.offset", false, [](const RunConfig& c) { return fmt_double(c.source.ic.offset); },
            [](RunConfig& c, std::string_view v) { c.source.ic.offset = parse_double("ic.offset", v); });
        add("ic.tanh_width", false, [](const RunConfig& c) { return fmt_double(c.source.ic.tanh_width); },
            [](RunConfig& c, std::string_view v) { c.source.ic.tanh_width = parse_double("ic.tanh_width", v); });
        return k;
    }();
    return table;
}

} // namespace

RunConfig default_run_config(PdeKind kind) {
    RunConfig cfg;
    cfg.augment.spec = default_spec(kind);
    cfg.augment.resolution = dim_of(kind) == 1 ? 256 : 128;
    cfg.augment.preprocess = default_preprocess(cfg.augment.spec);
    cfg.source = default_source_spec(kind);
    return cfg;
}

bool set_config_key(RunConfig& cfg, std::string_view key, std::string_view value) {
    for (const auto& k : keys()) {
        if (key == k.name) {
            k.set(cfg, value);
            return true;
        }
    }
    return false;
}

RunConfig parse_run_config(std::string_view text, RunConfig base) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ArgumentError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        try {
            if (!set_config_key(base, key, value)) {
                throw ArgumentError("unknown key '" + std::string(key) + "'");
            }
        } catch (const ArgumentError& e) {
            throw ArgumentError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

RunConfig parse_run_config(std::string_view text) {
    // Locate the pde key first so the remaining keys apply over its defaults.
    PdeKind kind = PdeKind::Heat1D;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
        const auto t = trim(line);
        const auto eq = t.find('=');
        if (eq != std::string_view::npos && trim(t.substr(0, eq)) == "pde") {
            kind = parse_pde_kind(trim(t.substr(eq + 1)));
        }
    }
    return parse_run_config(text, default_run_config(kind));
}

std::string to_text(const RunConfig& cfg) {
    std::string out;
    for (const auto& k : keys()) out += std::string(k.name) + " = " + k.get(cfg) + "\n";
    return out;
}

std::string to_text(const AugmentConfig& cfg) {
    RunConfig wrapper;
    wrapper.augment = cfg;
    std::string out;
    for (const auto& k : keys()) {
        if (k.augment_only) out += std::string(k.name) + " = " + k.get(wrapper) + "\n";
    }
    return out;
}

RefConfig resolve_ref(const RunConfig& cfg, const PdeSpec& spec, const Field& state) {
    RefConfig ref = default_ref_config(spec, state);
    if (cfg.ref_method) ref.method = *cfg.ref_method;
    if (cfg.ref_dt) ref.dt_ref = *cfg.ref_dt;
    ref.cfl_safety = cfg.ref_cfl_safety;
    return ref;
}

} // namespace invevo
