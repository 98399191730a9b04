#include "invevo/io.hpp"

#include "invevo/errors.hpp"

#include <json.hpp>
#include <zlib.h>

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace invevo {

using nlohmann::json;

namespace {

static_assert(std::endian::native == std::endian::little, "dataset I/O assumes a little-endian host");

template <typename T>
void put_le(std::uint8_t* dst, T value) {
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    std::memcpy(dst, raw, sizeof(T));
}

template <typename T>
T get_le(const std::uint8_t* src) {
    T value;
    std::memcpy(&value, src, sizeof(T));
    return value;
}

std::vector<std::uint8_t> read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json provenance_json(const DataPair& p) {
    const auto& pv = p.provenance;
    json j{{"flags", std::string(to_string(p.flags.reason))}, {"augmented", pv.augmented}};
    if (pv.augmented) {
        j["draw"] = pv.draw;
        j["sources"] = pv.sources;
        j["time_index"] = pv.time_index;
        j["lambdas"] = pv.lambdas;
        j["mix_constant"] = pv.mix_constant;
        j["preprocessed"] = pv.preprocessed;
        if (pv.preprocessed) {
            j["preprocess_a"] = pv.preprocess_a;
            j["preprocess_constant"] = pv.preprocess_constant;
        }
    }
    return j;
}

Provenance provenance_from(const json& j) {
    Provenance pv;
    pv.augmented = j.at("augmented").get<bool>();
    if (pv.augmented) {
        pv.draw = j.at("draw").get<std::uint64_t>();
        pv.sources = j.at("sources").get<std::vector<std::uint32_t>>();
        pv.time_index = j.at("time_index").get<std::uint32_t>();
        pv.lambdas = j.at("lambdas").get<std::vector<double>>();
        pv.mix_constant = j.at("mix_constant").get<double>();
        pv.preprocessed = j.at("preprocessed").get<bool>();
        if (pv.preprocessed) {
            pv.preprocess_a = j.at("preprocess_a").get<double>();
            pv.preprocess_constant = j.at("preprocess_constant").get<double>();
        }
    }
    return pv;
}

RejectReason reason_from(const std::string& s) {
    for (auto r : {RejectReason::None, RejectReason::NonFinite, RejectReason::Blowup, RejectReason::ErrorAboveOne}) {
        if (s == to_string(r)) return r;
    }
    throw FormatError("unknown rejection reason '" + s + "' in sidecar");
}

} // namespace

std::array<std::uint8_t, kHeaderBytes> encode_header(const DatasetHeader& h) {
    std::array<std::uint8_t, kHeaderBytes> out{};
    std::memcpy(out.data(), kMagic.data(), 4);
    put_le(out.data() + 4, h.version);
    put_le(out.data() + 6, h.dim);
    put_le(out.data() + 7, h.n);
    put_le(out.data() + 11, h.pair_count);
    put_le(out.data() + 19, h.dt);
    put_le(out.data() + 27, h.pde_kind);
    put_le(out.data() + 28, h.scheme_order);
    put_le(out.data() + 29, h.disc);
    return out;
}

DatasetHeader decode_header(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic.data(), 4) != 0) {
        throw FormatError("not a dataset file: bad magic");
    }
    if (bytes.size() < kHeaderBytes) throw CorruptionError("truncated header");
    DatasetHeader h;
    h.version = get_le<std::uint16_t>(bytes.data() + 4);
    if (h.version > kFormatVersion) {
        throw VersionError("dataset format version " + std::to_string(h.version) + " is newer than supported " +
                           std::to_string(kFormatVersion));
    }
    h.dim = get_le<std::uint8_t>(bytes.data() + 6);
    h.n = get_le<std::uint32_t>(bytes.data() + 7);
    h.pair_count = get_le<std::uint64_t>(bytes.data() + 11);
    h.dt = get_le<double>(bytes.data() + 19);
    h.pde_kind = get_le<std::uint8_t>(bytes.data() + 27);
    h.scheme_order = get_le<std::uint8_t>(bytes.data() + 28);
    h.disc = get_le<std::uint8_t>(bytes.data() + 29);
    if ((h.dim != 1 && h.dim != 2) || h.pde_kind > 3 || h.scheme_order > 3 || h.disc > 1) {
        throw FormatError("dataset header holds out-of-range enum values");
    }
    return h;
}

std::uint64_t payload_bytes(const DatasetHeader& h) {
    const std::uint64_t cells = h.dim == 1 ? h.n : static_cast<std::uint64_t>(h.n) * h.n;
    return h.pair_count * 2 * cells * sizeof(double);
}

std::string payload_checksum(std::span<const std::uint8_t> payload) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed in chunks.
    std::size_t pos = 0;
    while (pos < payload.size()) {
        const std::size_t chunk = std::min<std::size_t>(payload.size() - pos, 1u << 30);
        crc = crc32(crc, payload.data() + pos, static_cast<uInt>(chunk));
        pos += chunk;
    }
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
    return buf;
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
    return std::filesystem::path(path.string() + ".meta");
}

void write_dataset(const Dataset& ds, const std::filesystem::path& path) {
    require_homogeneous(ds);
    for (std::size_t i = 0; i < ds.pairs.size(); ++i) {
        if (!ds.pairs[i].flags.accepted()) {
            throw ArgumentError("pair " + std::to_string(i) + " is rejected and cannot be written");
        }
    }
    DatasetHeader h;
    h.version = kFormatVersion;
    h.dim = static_cast<std::uint8_t>(ds.grid.dim());
    h.n = static_cast<std::uint32_t>(ds.grid.n());
    h.pair_count = ds.pairs.size();
    h.dt = ds.dt;
    h.pde_kind = static_cast<std::uint8_t>(ds.spec.kind);
    h.scheme_order = ds.scheme_order;
    h.disc = static_cast<std::uint8_t>(ds.spec.disc);

    std::vector<std::uint8_t> payload(payload_bytes(h));
    std::uint8_t* cursor = payload.data();
    for (const auto& p : ds.pairs) {
        for (const Field* f : {&p.input, &p.output}) {
            std::memcpy(cursor, f->values().data(), f->size() * sizeof(double));
            cursor += f->size() * sizeof(double);
        }
    }

    json meta;
    meta["format"] = "IEDA";
    meta["version"] = kFormatVersion;
    meta["pde"] = std::string(to_string(ds.spec.kind));
    meta["nu"] = ds.spec.nu;
    meta["epsilon"] = ds.spec.epsilon;
    meta["disc"] = std::string(to_string(ds.spec.disc));
    meta["forcing_amplitude"] = ds.spec.forcing_amplitude;
    if (ds.spec.forcing_override) {
        const auto v = ds.spec.forcing_override->values();
        meta["forcing_override"] = std::vector<double>(v.begin(), v.end());
    }
    meta["resolution"] = ds.grid.n();
    meta["dt"] = ds.dt;
    meta["scheme_order"] = ds.scheme_order;
    meta["seed"] = ds.seed;
    meta["run_config"] = ds.run_config;
    meta["source_digest"] = ds.source_digest;
    meta["payload_bytes"] = payload.size();
    meta["payload_crc32"] = payload_checksum(payload);
    json tally{{"attempts", ds.tally.attempts}, {"rejected", ds.tally.rejected()}};
    json reasons = json::object();
    for (const auto& [reason, n] : ds.tally.by_reason) reasons[std::string(to_string(reason))] = n;
    tally["by_reason"] = reasons;
    meta["tally"] = tally;
    if (ds.layout) {
        meta["layout"] = {{"count", ds.layout->count}, {"states", ds.layout->states}, {"times", ds.layout->times}};
    }
    json prov = json::array();
    for (const auto& p : ds.pairs) prov.push_back(provenance_json(p));
    meta["pairs"] = prov;

    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + path.string());
        const auto header = encode_header(h);
        out.write(reinterpret_cast<const char*>(header.data()), header.size());
        out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
        if (!out) throw Error("write failed for " + path.string());
    }
    std::ofstream side(sidecar_path(path), std::ios::trunc);
    if (!side) throw Error("cannot write " + sidecar_path(path).string());
    side << meta.dump(1) << '\n';
    if (!side) throw Error("write failed for " + sidecar_path(path).string());
}

DatasetHeader read_header(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::array<std::uint8_t, kHeaderBytes> buf{};
    in.read(reinterpret_cast<char*>(buf.data()), buf.size());
    return decode_header(std::span(buf.data(), static_cast<std::size_t>(in.gcount())));
}

std::string recorded_checksum(const std::filesystem::path& path) {
    std::ifstream side(sidecar_path(path));
    if (!side) throw FormatError("missing sidecar " + sidecar_path(path).string());
    try {
        return json::parse(side).at("payload_crc32").get<std::string>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed sidecar: ") + e.what());
    }
}

Dataset read_dataset(const std::filesystem::path& path) {
    const auto bytes = read_all(path);
    const DatasetHeader h = decode_header(bytes);
    const std::span<const std::uint8_t> payload(bytes.data() + kHeaderBytes, bytes.size() - kHeaderBytes);
    if (payload.size() != payload_bytes(h)) {
        throw CorruptionError("payload holds " + std::to_string(payload.size()) + " bytes, header implies " +
                              std::to_string(payload_bytes(h)));
    }

    std::ifstream side(sidecar_path(path));
    if (!side) throw FormatError("missing sidecar " + sidecar_path(path).string());
    json meta;
    try {
        meta = json::parse(side);
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed sidecar: ") + e.what());
    }
    if (meta.value("payload_crc32", std::string{}) != payload_checksum(payload)) {
        throw CorruptionError("payload checksum mismatch for " + path.string());
    }

    try {
        PdeSpec spec;
        spec.kind = static_cast<PdeKind>(h.pde_kind);
        spec.disc = static_cast<Disc>(h.disc);
        spec.nu = meta.at("nu").get<double>();
        spec.epsilon = meta.at("epsilon").get<double>();
        spec.forcing_amplitude = meta.at("forcing_amplitude").get<double>();
        const Grid grid(h.dim, static_cast<int>(h.n));
        if (meta.contains("forcing_override")) {
            spec.forcing_override = Field(grid, meta.at("forcing_override").get<std::vector<double>>());
        }
        if (parse_pde_kind(meta.at("pde").get<std::string>()) != spec.kind || dim_of(spec.kind) != h.dim) {
            throw FormatError("sidecar disagrees with header on the equation");
        }

        Dataset ds{spec, grid, h.dt, h.scheme_order};
        ds.seed = meta.at("seed").get<std::uint64_t>();
        ds.run_config = meta.at("run_config").get<std::string>();
        ds.source_digest = meta.at("source_digest").get<std::string>();
        const auto& tally = meta.at("tally");
        ds.tally.attempts = tally.at("attempts").get<std::uint64_t>();
        for (const auto& [name, n] : tally.at("by_reason").items()) {
            ds.tally.by_reason[reason_from(name)] = n.get<std::uint64_t>();
        }
        if (meta.contains("layout")) {
            const auto& l = meta.at("layout");
            ds.layout = TrajectoryLayout{l.at("count").get<std::uint32_t>(), l.at("states").get<std::uint32_t>(),
                                         l.at("times").get<std::vector<double>>()};
        }
        const auto& prov = meta.at("pairs");
        if (prov.size() != h.pair_count) throw FormatError("sidecar provenance count does not match header");

        const std::size_t cells = grid.size();
        const std::uint8_t* cursor = payload.data();
        auto next_field = [&] {
            std::vector<double> values(cells);
            std::memcpy(values.data(), cursor, cells * sizeof(double));
            cursor += cells * sizeof(double);
            return Field(grid, std::move(values));
        };
        std::optional<SchemeOrder> order;
        if (h.scheme_order != kReferenceOrder) order = SchemeOrder(h.scheme_order);
        ds.pairs.reserve(h.pair_count);
        for (std::uint64_t i = 0; i < h.pair_count; ++i) {
            Field input = next_field();
            Field output = next_field();
            DataPair p{std::move(input), std::move(output), h.dt, spec, order, {}, provenance_from(prov[i])};
            p.flags.reason = reason_from(prov[i].at("flags").get<std::string>());
            ds.pairs.push_back(std::move(p));
        }
        return ds;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed sidecar: ") + e.what());
    }
}

std::string format_info(const DatasetHeader& h) {
    char dt[64];
    const auto res = std::to_chars(dt, dt + sizeof dt, h.dt);
    std::ostringstream out;
    out << "version: " << h.version << '\n'
        << "dim: " << int(h.dim) << '\n'
        << "n: " << h.n << '\n'
        << "pair_count: " << h.pair_count << '\n'
        << "dt: " << std::string_view(dt, res.ptr - dt) << '\n'
        << "pde_kind: " << int(h.pde_kind) << " (" << to_string(static_cast<PdeKind>(h.pde_kind)) << ")\n"
        << "scheme_order: " << int(h.scheme_order) << '\n'
        << "disc: " << int(h.disc) << " (" << to_string(static_cast<Disc>(h.disc)) << ")\n";
    return out.str();
}

DatasetHeader parse_info(std::string_view text) {
    DatasetHeader h;
    unsigned seen = 0;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
        const auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        const std::string key = line.substr(0, colon);
        std::string value = line.substr(colon + 1);
        value.erase(0, value.find_first_not_of(' '));
        value = value.substr(0, value.find(' '));
        auto as_u64 = [&] {
            std::uint64_t v = 0;
            std::from_chars(value.data(), value.data() + value.size(), v);
            return v;
        };
        if (key == "version") { h.version = static_cast<std::uint16_t>(as_u64()); seen |= 1; }
        else if (key == "dim") { h.dim = static_cast<std::uint8_t>(as_u64()); seen |= 2; }
        else if (key == "n") { h.n = static_cast<std::uint32_t>(as_u64()); seen |= 4; }
        else if (key == "pair_count") { h.pair_count = as_u64(); seen |= 8; }
        else if (key == "dt") { std::from_chars(value.data(), value.data() + value.size(), h.dt); seen |= 16; }
        else if (key == "pde_kind") { h.pde_kind = static_cast<std::uint8_t>(as_u64()); seen |= 32; }
        else if (key == "scheme_order") { h.scheme_order = static_cast<std::uint8_t>(as_u64()); seen |= 64; }
        else if (key == "disc") { h.disc = static_cast<std::uint8_t>(as_u64()); seen |= 128; }
    }
    if (seen != 255) throw FormatError("info text is missing header fields");
    return h;
}

} // namespace invevo
