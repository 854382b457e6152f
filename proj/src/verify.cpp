// SPDX-License-Identifier: Apache-2.0

#include "cmi/verify.hpp"
#include "cmi/codegen.hpp"
#include "cmi/geometry.hpp"
#include "cmi/sensitivity.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace cmi {

namespace {

const char* const kWalsh8 = R"(
 1  1  1  1  1  1  1  1
 1  1  1  1 -1 -1 -1 -1
 1  1 -1 -1 -1 -1  1  1
 1  1 -1 -1  1  1 -1 -1
 1 -1 -1  1  1 -1 -1  1
 1 -1 -1  1 -1  1  1 -1
 1 -1  1 -1 -1  1 -1  1
 1 -1  1 -1  1 -1  1 -1
)";

const char* const kRademacher8 = R"(
 1  1  1  1  1  1  1  1
 1  1  1  1 -1 -1 -1 -1
 1  1 -1 -1  1  1 -1 -1
 1 -1  1 -1  1 -1  1 -1
)";

const char* const kGoldN5 = R"(
seq1 1111100011011101010000100101100
seq2 1111100100110000101101010001110
shift0 0000000111101101111101110100010
shift1 0000101010111100001010000110001
shift30 1000010001000101000110001101011
)";

std::string load(const std::filesystem::path& dir, const char* file, const char* fallback)
{
    if (dir.empty()) return fallback;
    std::ifstream in(dir / file);
    if (!in) throw std::runtime_error("cannot read " + (dir / file).string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string strip_comments(const std::string& text)
{
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        out += line + '\n';
    }
    return out;
}

std::vector<std::vector<int>> parse_matrix(const std::string& text)
{
    std::vector<std::vector<int>> rows;
    std::istringstream in(strip_comments(text));
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<int> row;
        int v;
        while (ls >> v) row.push_back(v);
        if (!row.empty()) rows.push_back(row);
    }
    return rows;
}

CheckResult check_matrix(const std::string& name, const std::vector<Code>& codes, const std::string& golden)
{
    const auto rows = parse_matrix(golden);
    if (rows.size() != codes.size())
        return {name, false, "expected " + std::to_string(rows.size()) + " rows, generated " + std::to_string(codes.size())};
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != codes[r].length()) return {name, false, "row " + std::to_string(r) + " length differs"};
        for (std::size_t t = 0; t < rows[r].size(); ++t)
            if (rows[r][t] != codes[r][t])
                return {name, false, "row " + std::to_string(r) + " chip " + std::to_string(t) + " differs"};
    }
    return {name, true, std::to_string(rows.size()) + " rows match"};
}

std::string fixed(double v, int digits)
{
    std::ostringstream o;
    o.setf(std::ios::fixed);
    o.precision(digits);
    o << v;
    return o.str();
}

CheckResult near(const std::string& name, double got, double want, double rel_tol, int digits)
{
    const bool ok = std::abs(got - want) <= rel_tol * std::abs(want);
    return {name, ok, fixed(got, digits) + " (expected " + fixed(want, digits) + ")"};
}

CheckResult count(const std::string& name, long got, long want)
{
    return {name, got == want, std::to_string(got) + (got == want ? "" : " (expected " + std::to_string(want) + ")")};
}

} // namespace

std::vector<CheckResult> run_golden_checks(const std::filesystem::path& golden_dir)
{
    std::vector<CheckResult> out;

    out.push_back(check_matrix("rademacher-8", gen_rademacher(8), load(golden_dir, "rademacher8.txt", kRademacher8)));
    const auto walsh = gen_walsh(8);
    out.push_back(check_matrix("walsh-8", walsh, load(golden_dir, "walsh8.txt", kWalsh8)));
    out.push_back({"walsh-product", code_product(walsh[1], walsh[2]) == walsh[3],
                   "second x third Walsh code equals the fourth"});

    std::map<std::string, std::string> gold;
    {
        std::istringstream in(strip_comments(load(golden_dir, "gold_n5.txt", kGoldN5)));
        std::string key, bits;
        while (in >> key >> bits) gold[key] = bits;
    }
    const LfsrSpec s1{5, {5, 3}, {}}, s2{5, {5, 4, 3, 2}, {}};
    const auto m1 = gen_msequence(s1), m2 = gen_msequence(s2);
    auto bits_check = [&](const std::string& name, const std::string& got) {
        const auto it = gold.find(name);
        if (it == gold.end()) return CheckResult{"gold-" + name, false, "missing from golden table"};
        return CheckResult{"gold-" + name, got == it->second, got};
    };
    out.push_back(bits_check("seq1", to_bit_string(m1.bits)));
    out.push_back(bits_check("seq2", to_bit_string(m2.bits)));
    for (std::size_t shift : {0u, 1u, 30u})
        out.push_back(bits_check("shift" + std::to_string(shift), to_bit_string(gen_gold(m1.bits, m2.bits, shift))));

    out.push_back(count("pixels-4-element", static_cast<long>(baselines(min_redundancy_4()).distinct()), 13));
    const auto b33 = baselines(two_dim_33pixel_8el());
    out.push_back(count("pixels-8-element-2d", static_cast<long>(b33.distinct()), 33));
    out.push_back(count("redundant-8-element-2d", b33.redundant(), 24));
    out.push_back(count("baselines-8-element-2d", b33.off_zero_total(), 56));
    out.push_back(count("pixels-16-element", static_cast<long>(baselines(grid_13x13_16el()).distinct()), 169));
    out.push_back(count("pixels-y-5", static_cast<long>(pixels_y_config(5)), 181));
    out.push_back(count("pixels-t-5", static_cast<long>(pixels_t_config(5)), 121));
    out.push_back(count("pixels-t-4", static_cast<long>(pixels_t_config(4)), 81));

    const auto f4 = fov_resolution(min_redundancy_4());
    out.push_back(near("fov-4-element", f4.x->fov_deg, 30.0, 0.1 / 30.0, 2));
    out.push_back(near("resolution-4-element", f4.x->resolution_deg, 4.4, 0.1 / 4.4, 2));
    out.push_back(near("beamwidth-4-element", f4.x->beamwidth_deg, 8.8, 0.1 / 8.8, 2));

    out.push_back(near("sensitivity-vis-6ghz", delta_t_vis(1, 1200, 6e9, 1.0 / 30), 0.0849, 0.005, 4));
    out.push_back(near("sensitivity-vis-1ghz", delta_t_vis(1, 1200, 1e9, 1.0 / 30), 0.2078, 0.005, 4));
    out.push_back(near("sensitivity-image-169", delta_t_image(1200, 169, 1e9, 1.0 / 30), 2.70, 0.005, 3));
    return out;
}

bool print_checks(std::ostream& out, const std::vector<CheckResult>& checks)
{
    bool all = true;
    for (const auto& c : checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        all = all && c.pass;
    }
    return all;
}

} // namespace cmi
