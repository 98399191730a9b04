#include "invevo/augment.hpp"

#include "invevo/config.hpp"
#include "invevo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace invevo {

namespace {

enum Stream : std::uint64_t { kPermutation = 0, kMix = 1, kPreprocess = 2, kInitialCondition = 3 };

double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    if (lo == hi) return lo;
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

void check_series(const std::vector<Trajectory>& series) {
    if (series.empty()) throw ArgumentError("mixing requires at least one trajectory");
    const auto& first = series.front();
    if (first.states.empty()) throw ArgumentError("mixing requires non-empty trajectories");
    const Grid grid = first.states.front().grid();
    for (const auto& traj : series) {
        if (traj.times != first.times || traj.states.size() != first.times.size()) {
            throw ArgumentError("mixing requires identical time stamps across trajectories");
        }
        for (const auto& s : traj.states) {
            if (!(s.grid() == grid)) throw ArgumentError("mixing requires a shared grid");
        }
    }
}

} // namespace

std::mt19937_64 split_rng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

void MixSpec::validate() const {
    if (k < 1) throw ArgumentError("mix.k must be >= 1");
    if (!std::isfinite(c_min) || !std::isfinite(c_max) || c_min > c_max) {
        throw ArgumentError("mix constant range must be a finite closed interval");
    }
    if (lambda_mode == LambdaMode::Fixed && lambdas.size() != static_cast<std::size_t>(k) + 1) {
        throw ArgumentError("fixed mixing needs k+1 = " + std::to_string(k + 1) + " weights");
    }
}

void PreprocessSpec::validate() const {
    if (!(a >= 0.0 && a <= 1.0)) throw ArgumentError("preprocess.a must lie in [0, 1]");
    if (!std::isfinite(c_min) || !std::isfinite(c_max) || c_min > c_max) {
        throw ArgumentError("preprocess constant range must be a finite closed interval");
    }
}

Field subsample(const Field& fine, int factor) {
    const int nf = fine.grid().n();
    if (factor < 1 || nf % factor != 0) throw ArgumentError("subsample factor must divide the resolution");
    if (factor == 1) return fine;
    const Grid coarse(fine.grid().dim(), nf / factor);
    const int n = coarse.n();
    Field out(coarse);
    if (coarse.dim() == 1) {
        for (int i = 0; i < n; ++i) out[i] = fine[static_cast<std::size_t>(i) * factor];
    } else {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                out[static_cast<std::size_t>(j) * n + i] =
                    fine[static_cast<std::size_t>(j) * factor * nf + static_cast<std::size_t>(i) * factor];
            }
        }
    }
    return out;
}

PreprocessSpec default_preprocess(const PdeSpec& spec) {
    PreprocessSpec p;
    p.enabled = spec.kind == PdeKind::Burgers1D && spec.nu <= 0.001;
    return p;
}

void AugmentConfig::validate() const {
    spec.validate();
    Grid(dim_of(spec.kind), resolution);
    mix.validate();
    preprocess.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("dt must be positive");
    if (count < 1) throw ArgumentError("count must be >= 1");
    if (!(blowup_factor > 0.0)) throw ArgumentError("blowup_factor must be positive");
}

SourceSpec default_source_spec(PdeKind kind) {
    SourceSpec s;
    switch (kind) {
    case PdeKind::Heat1D:
        s.count = 16;
        s.t_start = 0.01;
        s.t_final = 0.03;
        s.save_every = 0.01;
        s.ic.offset = 1.0;
        s.ic.amplitude = 0.05;
        break;
    case PdeKind::Burgers1D:
        s.count = 16;
        s.t_final = 2.0;
        s.save_every = 0.05;
        s.single_precision = true;
        break;
    case PdeKind::AllenCahn2D:
        s.count = 8;
        s.t_start = 0.5;
        s.t_final = 2.5;
        s.save_every = 0.5;
        break;
    case PdeKind::NavierStokes2D:
        s.count = 8;
        s.t_start = 0.07;
        s.t_final = 5.07;
        s.save_every = 0.5;
        s.dt_ref = 1e-3;
        break;
    }
    return s;
}

Dataset generate_reference_dataset(const PdeSpec& spec, int resolution, const SourceSpec& source,
                                   std::uint64_t seed) {
    spec.validate();
    if (source.count < 1) throw ArgumentError("source.count must be >= 1");
    if (!(source.t_start >= 0.0 && source.t_start < source.t_final)) {
        throw ArgumentError("source.t_start must lie in [0, source.t_final)");
    }
    if (source.refine < 1) throw ArgumentError("source.refine must be >= 1");
    const Grid grid(dim_of(spec.kind), resolution * source.refine);
    std::vector<std::optional<Trajectory>> trajs(source.count);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(source.count); ++t) {
        try {
            auto rng = split_rng(seed, static_cast<std::uint64_t>(t), kInitialCondition);
            const Field u0 = sample_initial_condition(spec, grid, rng, source.ic);
            RefConfig ref = default_ref_config(spec, u0);
            if (source.dt_ref) ref.dt_ref = *source.dt_ref;
            if (source.t_start > 0.0) {
                Trajectory traj = solve_trajectory(spec, forward_evolve(spec, u0, source.t_start, ref),
                                                   source.t_final - source.t_start, source.save_every, ref);
                for (double& time : traj.times) time += source.t_start;
                trajs[t] = std::move(traj);
            } else {
                trajs[t] = solve_trajectory(spec, u0, source.t_final, source.save_every, ref);
            }
            for (Field& state : trajs[t]->states) state = subsample(state, source.refine);
            if (source.single_precision) {
                for (Field& state : trajs[t]->states) {
                    for (double& v : state.data()) v = static_cast<float>(v);
                }
            }
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    std::vector<Trajectory> out;
    out.reserve(trajs.size());
    for (auto& t : trajs) out.push_back(std::move(*t));
    Dataset ds = dataset_from_trajectories(out);
    ds.seed = seed;
    return ds;
}

MixedInit mix_draw(const std::vector<Trajectory>& series, const MixSpec& mix, std::uint64_t draw) {
    mix.validate();
    check_series(series);
    const std::uint64_t n = series.size();
    const std::uint64_t block = draw / n;
    const auto base = static_cast<std::uint32_t>(draw % n);

    Provenance prov;
    prov.augmented = true;
    prov.draw = draw;
    prov.sources.push_back(base);
    auto perm_rng = split_rng(mix.seed, block, kPermutation);
    std::vector<std::uint32_t> perm(n);
    for (int j = 1; j <= mix.k; ++j) {
        std::iota(perm.begin(), perm.end(), 0u);
        std::shuffle(perm.begin(), perm.end(), perm_rng);
        prov.sources.push_back(perm[base]);
    }

    auto rng = split_rng(mix.seed, draw, kMix);
    const std::size_t times = series.front().states.size();
    prov.time_index =
        static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(0, times - 1)(rng));
    if (mix.lambda_mode == LambdaMode::Fixed) {
        prov.lambdas = mix.lambdas;
    } else {
        // Normalized exponentials are uniform on the simplex.
        std::exponential_distribution<double> expo(1.0);
        prov.lambdas.resize(mix.k + 1);
        double total = 0.0;
        for (double& l : prov.lambdas) total += (l = expo(rng));
        for (double& l : prov.lambdas) l /= total;
    }
    prov.mix_constant = uniform_in(rng, mix.c_min, mix.c_max);

    Field state = Field::constant(series.front().states.front().grid(), prov.mix_constant);
    for (std::size_t j = 0; j < prov.sources.size(); ++j) {
        state.add_scaled(prov.lambdas[j], series[prov.sources[j]].states[prov.time_index]);
    }
    return {std::move(state), std::move(prov)};
}

std::vector<MixedInit> mix_initializations(const std::vector<Trajectory>& series, const MixSpec& mix,
                                           std::uint64_t count) {
    if (count < 1) throw ArgumentError("mix_initializations: count must be >= 1");
    std::vector<MixedInit> out;
    out.reserve(count);
    for (std::uint64_t d = 0; d < count; ++d) out.push_back(mix_draw(series, mix, d));
    return out;
}

Field preprocess(const Field& f, double a, double c) {
    if (!(a >= 0.0 && a <= 1.0)) throw ArgumentError("preprocess: a must lie in [0, 1]");
    const double m = mean(f);
    Field out(f.grid());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * (f[i] - m) + c;
    return out;
}

PairFlags stability_filter(const DataPair& pair, std::optional<double> ref_error, double blowup_factor) {
    if (!pair.input.all_finite() || !pair.output.all_finite()) return {RejectReason::NonFinite};
    if (blowup_guard_fired(pair.input, pair.output, blowup_factor)) return {RejectReason::Blowup};
    if (ref_error && !(*ref_error < 1.0)) return {RejectReason::ErrorAboveOne};
    return {};
}

Dataset generate_augmented(const Dataset& source, const AugmentConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const Grid grid(dim_of(cfg.spec.kind), cfg.resolution);
    if (!(source.grid == grid) || source.spec.kind != cfg.spec.kind) {
        throw ArgumentError("source dataset does not match the requested equation and resolution");
    }
    const auto series = trajectories_of(source);
    MixSpec mix = cfg.mix;
    mix.seed = seed;
    mix.validate();
    check_series(series);

    Dataset out{cfg.spec, grid, cfg.dt, static_cast<std::uint8_t>(cfg.order.value())};
    out.seed = seed;
    out.run_config = to_text(cfg);
    out.pairs.reserve(cfg.count);

    const std::uint64_t budget = 10 * cfg.count;
    std::uint64_t next = 0;
    while (out.pairs.size() < cfg.count && next < budget) {
        const std::uint64_t need = cfg.count - out.pairs.size();
        const std::uint64_t batch = std::min(budget - next, std::max<std::uint64_t>(need + need / 4, 8));
        std::vector<std::optional<DataPair>> attempts(batch);
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(batch); ++b) {
            try {
                const std::uint64_t draw = next + static_cast<std::uint64_t>(b);
                MixedInit init = mix_draw(series, mix, draw);
                if (cfg.preprocess.enabled) {
                    auto rng = split_rng(seed, draw, kPreprocess);
                    init.provenance.preprocessed = true;
                    init.provenance.preprocess_a = cfg.preprocess.a;
                    init.provenance.preprocess_constant = uniform_in(rng, cfg.preprocess.c_min, cfg.preprocess.c_max);
                    init.state = preprocess(init.state, cfg.preprocess.a, init.provenance.preprocess_constant);
                }
                DataPair pair = make_pair(cfg.spec, init.state, cfg.dt, cfg.order, cfg.blowup_factor);
                pair.provenance = std::move(init.provenance);
                attempts[b] = std::move(pair);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        for (auto& attempt : attempts) {
            if (out.pairs.size() == cfg.count) break;
            ++next;
            ++out.tally.attempts;
            if (attempt->flags.accepted()) {
                out.pairs.push_back(std::move(*attempt));
            } else {
                ++out.tally.by_reason[attempt->flags.reason];
            }
        }
    }
    if (out.pairs.size() < cfg.count) {
        throw GenerationError("rejection budget exhausted after " + std::to_string(out.tally.attempts) +
                              " attempts (" + std::to_string(out.pairs.size()) + " accepted); dominant reason: " +
                              std::string(to_string(out.tally.dominant())));
    }
    return out;
}

} // namespace invevo
