// SPDX-License-Identifier: Apache-2.0

#include "cmi/experiment.hpp"
#include "cmi/demod.hpp"
#include "cmi/version.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cmi {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

std::size_t ExperimentConfig::codes_needed(std::size_t n_elements) const
{
    return acquisition == Acquisition::concurrent ? 2 * n_elements : n_elements;
}

void ExperimentConfig::validate() const
{
    if (name.empty()) throw ConfigError("experiment.name", "must not be empty");
    if (geometry.empty()) throw ConfigError("geometry.name", "must name a builtin geometry or a file");
    try {
        sim.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("sim", e.what());
    }
    if (code_family != "bocp" && code_family != "rademacher")
        throw ConfigError("codes.family", "expected 'bocp' or 'rademacher', got '" + code_family + "'");
    if (!is_power_of_two(sim.code_length)) throw ConfigError("codes.length", "must be a power of two");
    try {
        scene.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("scene", e.what());
    }
    if (scene.emitters.empty() && scene_file.empty()) throw ConfigError("scene", "no emitters and no scene file");
}

namespace {

const std::map<std::string, std::set<std::string>>& known_keys()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"experiment", {"name", "out"}},
        {"geometry", {"name", "file"}},
        {"scene", {"emitters", "angles", "brightness", "background", "file"}},
        {"sim",
         {"mode", "sample_rate", "carrier", "bandwidth", "samples_per_chip", "receiver_temp", "combiner_gain",
          "filter_taps", "seed", "workers"}},
        {"codes", {"family", "length", "count"}},
        {"acquisition", {"mode", "calibrate_zero_baseline", "oracle"}},
    };
    return keys;
}

template <typename T>
T get(const pt::ptree& tree, const std::string& key, T fallback)
{
    const auto node = tree.get_child_optional(pt::ptree::path_type(key, '.'));
    if (!node) return fallback;
    const std::string text = node->data();
    if constexpr (std::is_same_v<T, std::string>) {
        return text;
    } else if constexpr (std::is_same_v<T, bool>) {
        if (text == "true" || text == "yes" || text == "1" || text == "on") return true;
        if (text == "false" || text == "no" || text == "0" || text == "off") return false;
        throw ConfigError(key, "expected a boolean, got '" + text + "'");
    } else {
        std::istringstream in(text);
        T value{};
        if (!(in >> value) || !(in >> std::ws).eof()) throw ConfigError(key, "cannot parse '" + text + "'");
        if constexpr (std::is_unsigned_v<T>)
            if (text.find('-') != std::string::npos) throw ConfigError(key, "must be non-negative");
        return value;
    }
}

fs::path resolve_path(const std::string& p, const fs::path& base)
{
    const fs::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
}

std::vector<Emitter> parse_emitters(const std::string& text)
{
    std::vector<Emitter> out;
    std::istringstream all(text);
    std::string item;
    while (std::getline(all, item, ';')) {
        std::istringstream one(item);
        Emitter e;
        if (!(one >> e.l)) continue;
        if (!(one >> e.m >> e.brightness) || !(one >> std::ws).eof())
            throw ConfigError("scene.emitters", "expected 'l m brightness' entries separated by ';'");
        out.push_back(e);
    }
    return out;
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

ExperimentConfig parse_config(std::istream& in, const fs::path& base_dir)
{
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("<file>", e.message() + " at line " + std::to_string(e.line()));
    }
    const auto& keys = known_keys();
    for (const auto& [section, body] : tree) {
        const auto it = keys.find(section);
        if (it == keys.end()) throw ConfigError(section, "unknown section");
        for (const auto& [key, value] : body)
            if (!it->second.contains(key)) throw ConfigError(section + "." + key, "unknown key");
    }

    ExperimentConfig c;
    c.name = get<std::string>(tree, "experiment.name", c.name);
    c.out_dir = get<std::string>(tree, "experiment.out", c.out_dir.string());

    if (tree.get_child_optional("geometry.file"))
        c.geometry = resolve_path(get<std::string>(tree, "geometry.file", ""), base_dir).string();
    else
        c.geometry = get<std::string>(tree, "geometry.name", c.geometry);

    if (tree.get_child_optional("scene.file"))
        c.scene_file = resolve_path(get<std::string>(tree, "scene.file", ""), base_dir).string();
    c.scene.emitters = parse_emitters(get<std::string>(tree, "scene.emitters", ""));
    const double angle_brightness = get<double>(tree, "scene.brightness", 1.0);
    {
        std::istringstream angles(get<std::string>(tree, "scene.angles", ""));
        std::string tok;
        while (angles >> tok) {
            try {
                c.scene.emitters.push_back(emitter_at_angle(std::stod(tok), angle_brightness));
            } catch (const std::logic_error&) {
                throw ConfigError("scene.angles", "cannot parse angle '" + tok + "'");
            }
        }
    }
    c.scene.background = get<double>(tree, "scene.background", 0.0);

    auto& s = c.sim;
    const auto mode = get<std::string>(tree, "sim.mode", "envelope");
    if (mode == "envelope") s.mode = SimMode::envelope;
    else if (mode == "passband") s.mode = SimMode::passband;
    else throw ConfigError("sim.mode", "expected 'envelope' or 'passband', got '" + mode + "'");
    s.sample_rate = get<double>(tree, "sim.sample_rate", s.sample_rate);
    s.carrier_hz = get<double>(tree, "sim.carrier", s.carrier_hz);
    s.bandwidth_hz = get<double>(tree, "sim.bandwidth", s.bandwidth_hz);
    s.samples_per_chip = get<std::size_t>(tree, "sim.samples_per_chip", s.samples_per_chip);
    s.receiver_temp = get<double>(tree, "sim.receiver_temp", s.receiver_temp);
    s.combiner_gain = get<double>(tree, "sim.combiner_gain", s.combiner_gain);
    s.filter_taps = get<std::size_t>(tree, "sim.filter_taps", s.filter_taps);
    s.seed = get<uint64_t>(tree, "sim.seed", s.seed);
    s.workers = get<unsigned>(tree, "sim.workers", s.workers);

    c.code_family = get<std::string>(tree, "codes.family", c.code_family);
    s.code_length = get<std::size_t>(tree, "codes.length", s.code_length);
    c.code_count = get<std::size_t>(tree, "codes.count", c.code_count);

    const auto acq = get<std::string>(tree, "acquisition.mode", "sequential");
    if (acq == "sequential") c.acquisition = Acquisition::sequential;
    else if (acq == "concurrent") c.acquisition = Acquisition::concurrent;
    else throw ConfigError("acquisition.mode", "expected 'sequential' or 'concurrent', got '" + acq + "'");
    c.calibrate_zero_baseline = get<bool>(tree, "acquisition.calibrate_zero_baseline", false);
    c.oracle = get<bool>(tree, "acquisition.oracle", false);

    c.validate();
    return c;
}

ExperimentConfig load_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open " + path.string());
    return parse_config(in, path.parent_path());
}

std::string to_ini(const ExperimentConfig& c)
{
    std::ostringstream o;
    o << "[experiment]\nname = " << c.name << "\nout = " << c.out_dir.string() << "\n\n";
    o << "[geometry]\n" << (is_builtin_geometry(c.geometry) ? "name = " : "file = ") << c.geometry
      << "\n\n";
    o << "[scene]\n";
    if (!c.scene_file.empty()) o << "file = " << c.scene_file << '\n';
    if (!c.scene.emitters.empty()) {
        o << "emitters = ";
        for (std::size_t k = 0; k < c.scene.emitters.size(); ++k) {
            const auto& e = c.scene.emitters[k];
            o << (k ? "; " : "") << fmt(e.l) << ' ' << fmt(e.m) << ' ' << fmt(e.brightness);
        }
        o << '\n';
    }
    o << "background = " << fmt(c.scene.background) << "\n\n";
    const auto& s = c.sim;
    o << "[sim]\nmode = " << (s.mode == SimMode::envelope ? "envelope" : "passband") << "\nsample_rate = "
      << fmt(s.sample_rate) << "\ncarrier = " << fmt(s.carrier_hz) << "\nbandwidth = " << fmt(s.bandwidth_hz)
      << "\nsamples_per_chip = " << s.samples_per_chip << "\nreceiver_temp = " << fmt(s.receiver_temp)
      << "\ncombiner_gain = " << fmt(s.combiner_gain) << "\nfilter_taps = " << s.filter_taps << "\nseed = " << s.seed
      << "\nworkers = " << s.workers << "\n\n";
    o << "[codes]\nfamily = " << c.code_family << "\nlength = " << s.code_length << "\ncount = " << c.code_count
      << "\n\n";
    o << "[acquisition]\nmode = " << (c.acquisition == Acquisition::sequential ? "sequential" : "concurrent")
      << "\ncalibrate_zero_baseline = " << (c.calibrate_zero_baseline ? "true" : "false")
      << "\noracle = " << (c.oracle ? "true" : "false") << '\n';
    return o.str();
}

std::string config_hash(const ExperimentConfig& config)
{
    // worker count and output location do not change results
    ExperimentConfig c = config;
    c.sim.workers = 1;
    c.out_dir = "out";
    return hex64(fnv1a64(to_ini(c)));
}

namespace {

struct PresetSpec {
    const char* name;
    const char* geometry;
    std::vector<Emitter> emitters;
    Acquisition acquisition;
    std::size_t code_length;
    std::size_t samples_per_chip;
};

std::vector<PresetSpec> preset_specs()
{
    auto at = [](double deg) { return emitter_at_angle(deg); };
    const auto conc = Acquisition::concurrent;
    const auto seq = Acquisition::sequential;
    return {
        {"fig-point-source-20deg", "linear-15", {at(20)}, conc, 1024, 256},
        {"fig-point-source-30deg", "linear-15", {at(30)}, conc, 1024, 256},
        {"fig-point-source-40deg", "linear-15", {at(40)}, conc, 1024, 256},
        {"fig-point-source-50deg", "linear-15", {at(50)}, conc, 1024, 256},
        {"two-sources-20-30", "linear-15", {at(20), at(30)}, conc, 1024, 256},
        {"two-sources-30-40", "linear-15", {at(30), at(40)}, conc, 1024, 256},
        {"two-sources-0-10", "min-redundancy-4", {at(0), at(10)}, seq, 64, 1024},
        {"four-element-13", "min-redundancy-4", {at(0)}, seq, 64, 1024},
        {"linear-8-31", "linear-8-31", {at(20)}, conc, 512, 128},
        {"two-dim-8-33", "two-dim-8-33", {{0.2, 0.1, 1.0}}, conc, 512, 128},
        {"grid-16-169", "grid-16-169", {{0.0, 0.0, 1.0}, {0.3, -0.2, 0.6}}, seq, 512, 64},
        {"t-config-81", "t-config-81", {{0.2, -0.15, 1.0}}, seq, 256, 128},
    };
}

} // namespace

std::vector<std::string> preset_names()
{
    std::vector<std::string> names;
    for (const auto& p : preset_specs()) names.emplace_back(p.name);
    return names;
}

ExperimentConfig preset(const std::string& name)
{
    for (const auto& p : preset_specs()) {
        if (name != p.name) continue;
        ExperimentConfig c;
        c.name = p.name;
        c.geometry = p.geometry;
        c.scene.emitters = p.emitters;
        c.acquisition = p.acquisition;
        c.sim.code_length = p.code_length;
        c.sim.samples_per_chip = p.samples_per_chip;
        c.sim.bandwidth_hz = 0.9;
        c.sim.receiver_temp = 0.1;
        c.out_dir = fs::path("out") / p.name;
        c.validate();
        return c;
    }
    throw ConfigError("preset", "unknown preset '" + name + "'");
}

bool is_builtin_geometry(const std::string& name)
{
    const auto names = builtin_geometry_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

ArrayGeometry resolve_geometry(const std::string& name_or_path)
{
    if (is_builtin_geometry(name_or_path)) return builtin_geometry(name_or_path);
    std::ifstream in(name_or_path);
    if (!in) throw ConfigError("geometry", "'" + name_or_path + "' is neither a builtin geometry nor a readable file");
    try {
        return read_geometry(in, fs::path(name_or_path).stem().string());
    } catch (const std::invalid_argument& e) {
        throw ConfigError("geometry.file", e.what());
    }
}

Scene resolve_scene(const ExperimentConfig& config)
{
    Scene scene = config.scene;
    if (!config.scene_file.empty()) {
        std::ifstream in(config.scene_file);
        if (!in) throw ConfigError("scene.file", "cannot open " + config.scene_file);
        try {
            const Scene extra = read_scene(in);
            scene.emitters.insert(scene.emitters.end(), extra.emitters.begin(), extra.emitters.end());
            scene.background += extra.background;
        } catch (const std::invalid_argument& e) {
            throw ConfigError("scene.file", e.what());
        }
    }
    if (scene.emitters.empty()) throw ConfigError("scene", "scene has no emitters");
    return scene;
}

CodeAssignment assign_codes(const ExperimentConfig& config, std::size_t n_elements)
{
    const std::size_t needed = config.codes_needed(n_elements);
    const std::size_t count = config.code_count ? config.code_count : needed;
    if (count < needed)
        throw ConfigError("codes.count", std::to_string(count) + " codes for " + std::to_string(n_elements) +
                                             " elements; need at least " + std::to_string(needed));
    const std::size_t length = config.sim.code_length;

    CodeAssignment out;
    std::vector<Code> pool;
    if (config.code_family == "rademacher") {
        auto rad = gen_rademacher(length);
        if (rad.size() - 1 < needed)
            throw ConfigError("codes.length", "length " + std::to_string(length) + " gives only " +
                                                  std::to_string(rad.size() - 1) + " usable Rademacher codes");
        // R_0 is constant and cannot be separated from the total power
        pool.assign(rad.begin() + 1, rad.begin() + 1 + static_cast<long>(needed));
        for (const auto& c : pool) out.walsh_indices.push_back(*walsh_index(c));
    } else {
        try {
            auto set = select_bocp(length, count);
            pool.assign(set.members.begin(), set.members.begin() + static_cast<long>(needed));
            out.walsh_indices.assign(set.walsh_indices.begin(), set.walsh_indices.begin() + static_cast<long>(needed));
        } catch (const BocpInfeasible& e) {
            throw ConfigError("codes.length", e.what());
        }
    }
    const auto report = verify_bocp(pool);
    if (!report.ok) throw ConfigError("codes", "selected codes are not BOCP: " + report.first_violation);
    out.i_codes.assign(pool.begin(), pool.begin() + static_cast<long>(n_elements));
    if (config.acquisition == Acquisition::concurrent)
        out.q_codes.assign(pool.begin() + static_cast<long>(n_elements), pool.end());
    return out;
}

namespace {

std::vector<double> detect(std::vector<ElementStream> modulated, const SimParams& params)
{
    const auto sum = combine(modulated, params.combiner_gain);
    modulated.clear();
    if (params.mode == SimMode::envelope) return detect_power(sum);
    const auto rf = to_passband(sum, params);
    return detect_power(std::span<const double>(rf), params);
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& config)
{
    config.validate();
    ExperimentResult r(resolve_geometry(config.geometry));
    r.scene = resolve_scene(config);
    const std::size_t n = r.geometry.size();
    r.codes = assign_codes(config, n);
    const auto& params = config.sim;
    const std::size_t spc = params.samples_per_chip;

    if (config.acquisition == Acquisition::concurrent) {
        auto streams = synthesize(r.scene, r.geometry, params, 0);
        if (config.oracle) r.reference = correlator_bank(streams, r.geometry, params.workers);
        const std::vector<double> zeros(n, 0.0);
        const auto p = detect(modulate(std::move(streams), r.codes.i_codes, r.codes.q_codes, zeros, spc), params);
        r.measured = demodulate_concurrent(p, r.codes.i_codes, r.codes.q_codes, r.geometry, spc);
        r.runs_used = 1;
    } else {
        const auto plan = plan_three_runs(n);
        std::vector<std::vector<double>> p_per_run(plan.runs.size());
        for (std::size_t run = 0; run < plan.runs.size(); ++run) {
            if (plan.runs[run].extracted.empty()) continue;
            auto streams = synthesize(r.scene, r.geometry, params, run);
            if (config.oracle && run == 0) r.reference = correlator_bank(streams, r.geometry, params.workers);
            const auto offsets = plan.offsets(run, n);
            p_per_run[run] = detect(modulate(std::move(streams), r.codes.i_codes, {}, offsets, spc), params);
            ++r.runs_used;
        }
        r.measured = demodulate_all(p_per_run, r.codes.i_codes, plan, r.geometry, spc);
    }

    r.imaged = config.calibrate_zero_baseline ? calibrate_zero_baseline(r.measured) : r.measured;
    if (r.reference) r.comparison = compare(*r.reference, r.measured);
    r.dift_options = hole_free_options(r.imaged);
    r.image = dift(r.imaged, r.geometry, r.dift_options);
    return r;
}

void write_file_atomic(const fs::path& path, const std::string& contents)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

namespace {

std::map<std::string, std::string> dump_header(const ExperimentResult& r, const ExperimentConfig& c)
{
    std::string idx;
    for (auto k : r.codes.walsh_indices) idx += (idx.empty() ? "" : " ") + std::to_string(k);
    return {{"name", c.name},
            {"config_hash", config_hash(c)},
            {"seed", std::to_string(c.sim.seed)},
            {"geometry", r.geometry.name()},
            {"geometry_hash", geometry_hash(r.geometry)},
            {"acquisition", c.acquisition == Acquisition::sequential ? "sequential" : "concurrent"},
            {"runs", std::to_string(r.runs_used)},
            {"code_length", std::to_string(c.sim.code_length)},
            {"walsh_indices", idx},
            {"version", kVersion}};
}

} // namespace

std::string visibility_dump_text(const ExperimentResult& result, const ExperimentConfig& config)
{
    std::ostringstream o;
    write_visibility_dump(o, result.measured, dump_header(result, config));
    return o.str();
}

std::vector<fs::path> write_bundle(const ExperimentResult& r, const ExperimentConfig& c, const fs::path& dir)
{
    std::vector<fs::path> files;
    auto put = [&](const char* name, const std::string& text) {
        write_file_atomic(dir / name, text);
        files.push_back(dir / name);
    };
    put("config.ini", to_ini(c));
    put("visibility.txt", visibility_dump_text(r, c));
    if (r.reference) {
        std::ostringstream o;
        auto header = dump_header(r, c);
        header["source"] = "correlator-bank";
        write_visibility_dump(o, *r.reference, header);
        put("reference.txt", o.str());
    }
    {
        std::ostringstream o;
        write_csv(o, r.image);
        put("image.csv", o.str());
    }
    {
        std::ostringstream o;
        write_pgm(o, r.image, true);
        put("image.pgm", o.str());
    }
    {
        std::ostringstream o;
        write_axis_metadata(o, r.image);
        put("image_axes.txt", o.str());
    }
    {
        const auto pk = peak(r.image);
        std::ostringstream o;
        for (const auto& [k, v] : dump_header(r, c)) o << k << " = " << v << '\n';
        o << "calibrate_zero_baseline = " << (c.calibrate_zero_baseline ? "true" : "false") << '\n';
        o << "image_width = " << r.image.width() << "\nimage_height = " << r.image.height() << '\n';
        o << "peak_bin_l = " << r.image.bin_l(pk.i) << "\npeak_bin_m = " << r.image.bin_m(pk.j) << '\n';
        if (r.comparison)
            o << "oracle_rms_rel_error = " << fmt(r.comparison->rms_rel_error)
              << "\noracle_max_rel_error = " << fmt(r.comparison->max_rel_error) << '\n';
        o << "reproduce = cmi simulate --config config.ini --seed " << c.sim.seed << '\n';
        put("manifest.txt", o.str());
    }
    return files;
}

} // namespace cmi
