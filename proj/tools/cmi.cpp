// SPDX-License-Identifier: Apache-2.0
// cmi: command-line front end for the code-modulated interferometry toolkit.

#include "cmi/codegen.hpp"
#include "cmi/experiment.hpp"
#include "cmi/geometry.hpp"
#include "cmi/imaging.hpp"
#include "cmi/oracle.hpp"
#include "cmi/sensitivity.hpp"
#include "cmi/verify.hpp"
#include "cmi/version.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace cmi;
namespace fs = std::filesystem;

void print_codes(const std::vector<Code>& codes)
{
    for (const auto& c : codes) {
        for (std::size_t t = 0; t < c.length(); ++t) std::cout << (t ? " " : "") << (c[t] > 0 ? " 1" : "-1");
        std::cout << '\n';
    }
}

VisibilityFunction read_dump(const std::string& path, std::map<std::string, std::string>* header = nullptr)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_visibility_dump(in, header);
}

void print_geometry(const ArrayGeometry& g)
{
    const auto b = baselines(g);
    std::printf("name            %s\n", g.name().c_str());
    std::printf("elements        %zu\n", g.size());
    std::printf("pitch           %g x %g wavelengths\n", g.pitch_x(), g.pitch_y());
    std::printf("positions      ");
    for (const auto& p : g.positions()) std::printf(" (%d,%d)", p.x, p.y);
    std::printf("\nsamples         %zu\n", b.distinct());
    std::printf("redundant       %d of %d\n", b.redundant(), b.off_zero_total());
    const auto fr = fov_resolution(g);
    if (fr.x)
        std::printf("x axis          fov +-%.2f deg, resolution %.2f deg, beamwidth %.2f deg (%zu samples)\n",
                    fr.x->fov_deg, fr.x->resolution_deg, fr.x->beamwidth_deg, fr.x->samples);
    if (fr.y)
        std::printf("y axis          fov +-%.2f deg, resolution %.2f deg, beamwidth %.2f deg (%zu samples)\n",
                    fr.y->fov_deg, fr.y->resolution_deg, fr.y->beamwidth_deg, fr.y->samples);
}

std::vector<int> parse_taps(const std::string& text)
{
    std::vector<int> taps;
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) taps.push_back(std::stoi(tok));
    return taps;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Code-modulated interferometry simulator"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    // codes
    auto* codes = app.add_subcommand("codes", "Generate code families");
    std::string family;
    std::size_t length = 8, count = 0;
    int stages = 5;
    std::string taps1 = "5,3", taps2 = "5,4,3,2";
    std::size_t shift = 0;
    double time_limit = 60;
    codes->add_option("family", family, "walsh | rademacher | bocp | mseq | gold")
        ->required()
        ->check(CLI::IsMember({"walsh", "rademacher", "bocp", "mseq", "gold"}));
    codes->add_option("--length,-L", length, "Code length");
    codes->add_option("--count,-n", count, "BOCP codes wanted");
    codes->add_option("--time-limit", time_limit, "BOCP search limit, seconds");
    codes->add_option("--stages", stages, "LFSR stages");
    codes->add_option("--taps,--taps1", taps1, "LFSR taps (first sequence)");
    codes->add_option("--taps2", taps2, "LFSR taps (second sequence)");
    codes->add_option("--shift", shift, "Gold code shift");

    // geometry
    auto* geometry = app.add_subcommand("geometry", "Inspect array geometries");
    std::string geom_name;
    bool list_geoms = false;
    std::size_t search_n = 0;
    int search_umax = 0;
    std::vector<std::string> geom_args;
    geometry->add_option("name", geom_args, "[info] builtin geometry or geometry file");
    geometry->add_option("--config", geom_name, "Builtin geometry or geometry file");
    geometry->add_flag("--list", list_geoms, "List builtin geometries");
    geometry->add_option("--search-elements", search_n, "Search a full-coverage linear layout with this many elements");
    geometry->add_option("--search-umax", search_umax, "Largest baseline for --search-elements");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run an experiment and write its artifact bundle");
    std::string preset_name, config_path, out_dir;
    uint64_t seed = 0;
    bool seed_set = false, list_presets = false;
    unsigned workers = 0;
    simulate->add_option("--preset", preset_name, "Bundled experiment");
    simulate->add_option("--config", config_path, "Experiment config file")->check(CLI::ExistingFile);
    simulate->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) { seed_set = true; });
    simulate->add_option("--out", out_dir, "Output directory");
    simulate->add_option("--workers", workers, "Worker threads");
    simulate->add_flag("--list-presets", list_presets, "List bundled presets");

    // image
    auto* image = app.add_subcommand("image", "Image a visibility dump");
    std::string vis_path, image_geom;
    bool calibrate = false;
    image->add_option("visibility", vis_path, "Visibility dump")->required()->check(CLI::ExistingFile);
    image->add_option("--geometry", image_geom, "Geometry (defaults to the dump header)");
    image->add_flag("--calibrate", calibrate, "Zero the zero-baseline sample first");
    image->add_option("--out", out_dir, "Output directory")->required();

    // sensitivity
    auto* sens = app.add_subcommand("sensitivity", "Radiometric sensitivity");
    RadiometricParams rp;
    rp.t_sys = 1200;
    rp.bandwidth = 1e9;
    rp.tau = 1.0 / 30;
    sens->add_option("--n", rp.n_elements, "Elements");
    sens->add_option("--tsys", rp.t_sys, "System temperature, K");
    sens->add_option("--bw", rp.bandwidth, "RF bandwidth, Hz");
    sens->add_option("--tau", rp.tau, "Integration time, s");
    sens->add_option("--pixels", rp.pixels, "Image pixels");

    // compare
    auto* cmp = app.add_subcommand("compare", "Compare two visibility dumps (first is the reference)");
    std::string cmp_a, cmp_b;
    cmp->add_option("reference", cmp_a)->required()->check(CLI::ExistingFile);
    cmp->add_option("other", cmp_b)->required()->check(CLI::ExistingFile);

    // verify
    auto* verify = app.add_subcommand("verify", "Run the golden checks");
    std::string golden_dir;
    verify->add_option("--golden", golden_dir, "Directory with walsh8.txt, rademacher8.txt, gold_n5.txt");

    CLI11_PARSE(app, argc, argv);

    try {
        if (codes->parsed()) {
            if (family == "walsh") print_codes(gen_walsh(length));
            else if (family == "rademacher") print_codes(gen_rademacher(length));
            else if (family == "bocp") {
                BocpSearchOptions opts;
                opts.time_limit = std::chrono::milliseconds(static_cast<long>(time_limit * 1000));
                const auto set = select_bocp(length, count ? count : 8, opts);
                std::cout << "# walsh indices:";
                for (auto k : set.walsh_indices) std::cout << ' ' << k;
                const auto rep = verify_bocp(set.members);
                std::cout << "\n# bocp check: " << (rep.ok ? "ok" : rep.first_violation) << '\n';
                print_codes(set.members);
            } else if (family == "mseq") {
                const auto m = gen_msequence({stages, parse_taps(taps1), {}});
                std::cout << to_bit_string(m.bits) << "\nperiod " << m.period << (m.maximal ? " (maximal)" : "") << '\n';
            } else {
                std::cout << to_bit_string(gen_gold({stages, parse_taps(taps1), {}}, {stages, parse_taps(taps2), {}}, shift))
                          << '\n';
            }
            return 0;
        }
        if (geometry->parsed()) {
            if (list_geoms) {
                for (const auto& n : builtin_geometry_names()) std::cout << n << '\n';
                return 0;
            }
            if (search_n) {
                print_geometry(find_full_coverage_linear(search_n, search_umax));
                return 0;
            }
            if (!geom_args.empty() && geom_args.front() == "info") geom_args.erase(geom_args.begin());
            if (geom_name.empty() && !geom_args.empty()) geom_name = geom_args.front();
            if (geom_name.empty()) throw CLI::RequiredError("geometry name");
            print_geometry(resolve_geometry(geom_name));
            return 0;
        }
        if (simulate->parsed()) {
            if (list_presets) {
                for (const auto& n : preset_names()) std::cout << n << '\n';
                return 0;
            }
            if (preset_name.empty() == config_path.empty())
                throw ConfigError("preset", "give exactly one of --preset or --config");
            ExperimentConfig cfg = preset_name.empty() ? load_config(config_path) : preset(preset_name);
            if (seed_set) cfg.sim.seed = seed;
            if (workers) cfg.sim.workers = workers;
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            const auto result = run_experiment(cfg);
            const auto files = write_bundle(result, cfg, cfg.out_dir);
            const auto pk = peak(result.image);
            std::printf("%s: %zu elements, %zu samples, %zu run(s), image %zux%zu, peak bin (%d, %d)\n",
                        cfg.name.c_str(), result.geometry.size(), result.measured.size(), result.runs_used,
                        result.image.width(), result.image.height(), result.image.bin_l(pk.i),
                        result.image.bin_m(pk.j));
            if (result.comparison)
                std::printf("oracle rms relative error %.4f, max %.4f\n", result.comparison->rms_rel_error,
                            result.comparison->max_rel_error);
            for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
            return 0;
        }
        if (image->parsed()) {
            std::map<std::string, std::string> header;
            auto vis = read_dump(vis_path, &header);
            if (image_geom.empty()) {
                const auto it = header.find("geometry");
                if (it == header.end()) throw std::runtime_error("dump has no geometry header; pass --geometry");
                image_geom = it->second;
            }
            const auto geom = resolve_geometry(image_geom);
            if (calibrate) vis = calibrate_zero_baseline(std::move(vis));
            const auto map = dift(vis, geom, hole_free_options(vis));
            std::ostringstream csv, pgm, axes;
            write_csv(csv, map);
            write_pgm(pgm, map, true);
            write_axis_metadata(axes, map);
            const fs::path dir(out_dir);
            write_file_atomic(dir / "image.csv", csv.str());
            write_file_atomic(dir / "image.pgm", pgm.str());
            write_file_atomic(dir / "image_axes.txt", axes.str());
            const auto pk = peak(map);
            std::printf("image %zux%zu, peak bin (%d, %d)\n", map.width(), map.height(), map.bin_l(pk.i),
                        map.bin_m(pk.j));
            return 0;
        }
        if (sens->parsed()) {
            const auto r = evaluate(rp);
            std::printf("delta_t_vis        %.6g K\n", r.vis);
            std::printf("delta_t_image      %.6g K\n", r.image);
            std::printf("delta_t_image_cmi  %.6g K\n", r.image_cmi);
            return 0;
        }
        if (cmp->parsed()) {
            const auto rep = compare(read_dump(cmp_a), read_dump(cmp_b));
            std::printf("rms relative error  %.6g\nmax relative error  %.6g\n", rep.rms_rel_error, rep.max_rel_error);
            return 0;
        }
        if (verify->parsed()) {
            const bool ok = print_checks(std::cout, run_golden_checks(golden_dir));
            return ok ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        std::cerr << "cmi: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "cmi: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
