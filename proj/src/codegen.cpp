// SPDX-License-Identifier: Apache-2.0

#include "cmi/codegen.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

namespace cmi {

namespace {

std::size_t log2_exact(std::size_t length)
{
    if (length < 2 || !is_power_of_two(length)) {
        throw std::invalid_argument("invalid code length " + std::to_string(length) +
                                    ": must be a power of two >= 2");
    }
    return static_cast<std::size_t>(std::countr_zero(length));
}

std::size_t gray(std::size_t k) { return k ^ (k >> 1); }

std::size_t gray_inverse(std::size_t g)
{
    std::size_t k = 0;
    for (; g; g >>= 1) k ^= g;
    return k;
}

std::size_t bit_reverse(std::size_t value, std::size_t bits)
{
    std::size_t out = 0;
    for (std::size_t i = 0; i < bits; ++i)
        if (value & (std::size_t{1} << i)) out |= std::size_t{1} << (bits - 1 - i);
    return out;
}

// Sylvester-Hadamard row: H[n][t] = (-1)^popcount(n & t)
Code natural_row(std::size_t natural, std::size_t length)
{
    std::vector<int8_t> chips(length);
    for (std::size_t t = 0; t < length; ++t)
        chips[t] = (std::popcount(natural & t) & 1) ? -1 : 1;
    return Code(std::move(chips));
}

} // namespace

Code::Code(std::vector<int8_t> chips) : chips_(std::move(chips))
{
    for (auto c : chips_)
        if (c != 1 && c != -1) throw std::invalid_argument("code chips must be +1 or -1");
}

Code Code::ones(std::size_t length) { return Code(std::vector<int8_t>(length, 1)); }

Code Code::from_bits(std::span<const uint8_t> bits)
{
    std::vector<int8_t> chips(bits.size());
    std::transform(bits.begin(), bits.end(), chips.begin(),
                   [](uint8_t b) -> int8_t { return b ? -1 : 1; });
    return Code(std::move(chips));
}

long Code::sum() const { return std::accumulate(chips_.begin(), chips_.end(), 0L); }

long Code::dot(const Code& other) const
{
    if (other.length() != length()) throw std::invalid_argument("code length mismatch");
    long acc = 0;
    for (std::size_t i = 0; i < chips_.size(); ++i) acc += chips_[i] * other.chips_[i];
    return acc;
}

Code code_product(const Code& a, const Code& b)
{
    if (a.length() != b.length())
        throw std::invalid_argument("code length mismatch: " + std::to_string(a.length()) + " vs " +
                                    std::to_string(b.length()));
    std::vector<int8_t> chips(a.length());
    for (std::size_t i = 0; i < chips.size(); ++i) chips[i] = static_cast<int8_t>(a[i] * b[i]);
    return Code(std::move(chips));
}

bool is_power_of_two(std::size_t n) { return n != 0 && std::has_single_bit(n); }

std::vector<Code> gen_rademacher(std::size_t length)
{
    const std::size_t m = log2_exact(length);
    std::vector<Code> out;
    out.reserve(m + 1);
    out.push_back(Code::ones(length));
    for (std::size_t k = 1; k <= m; ++k) {
        const std::size_t block = length >> k;
        std::vector<int8_t> chips(length);
        for (std::size_t t = 0; t < length; ++t) chips[t] = ((t / block) & 1) ? -1 : 1;
        out.emplace_back(std::move(chips));
    }
    return out;
}

std::size_t natural_to_sequency(std::size_t natural_index, std::size_t length)
{
    const std::size_t m = log2_exact(length);
    if (natural_index >= length) throw std::out_of_range("Hadamard row index out of range");
    return gray_inverse(bit_reverse(natural_index, m));
}

std::vector<Code> gen_walsh(std::size_t length)
{
    const std::size_t m = log2_exact(length);
    std::vector<Code> out;
    out.reserve(length);
    for (std::size_t k = 0; k < length; ++k) out.push_back(natural_row(bit_reverse(gray(k), m), length));
    return out;
}

std::optional<std::size_t> walsh_index(const Code& code)
{
    const std::size_t length = code.length();
    if (length < 2 || !is_power_of_two(length)) return std::nullopt;
    std::size_t natural = 0;
    for (std::size_t bit = 1; bit < length; bit <<= 1)
        if (code[bit] == -1) natural |= bit;
    if (code[0] != 1 || natural_row(natural, length) != code) return std::nullopt;
    return natural_to_sequency(natural, length);
}

BocpReport verify_bocp(std::span<const Code> set)
{
    if (set.empty()) return {false, "empty code set"};
    const std::size_t length = set.front().length();
    for (std::size_t i = 0; i < set.size(); ++i)
        if (set[i].length() != length)
            return {false, "code " + std::to_string(i) + " has length " + std::to_string(set[i].length()) +
                               ", expected " + std::to_string(length)};

    for (std::size_t i = 0; i < set.size(); ++i)
        if (!set[i].balanced()) return {false, "code " + std::to_string(i) + " is not balanced"};

    for (std::size_t i = 0; i < set.size(); ++i)
        for (std::size_t j = i + 1; j < set.size(); ++j)
            if (set[i].dot(set[j]) != 0)
                return {false, "codes " + std::to_string(i) + " and " + std::to_string(j) + " are not orthogonal"};

    struct Product {
        std::size_t i, j;
        Code code;
    };
    std::vector<Product> products;
    for (std::size_t i = 0; i < set.size(); ++i)
        for (std::size_t j = i + 1; j < set.size(); ++j) products.push_back({i, j, code_product(set[i], set[j])});

    auto name = [](const Product& p) { return "product " + std::to_string(p.i) + "*" + std::to_string(p.j); };

    for (const auto& p : products) {
        if (!p.code.balanced()) return {false, name(p) + " is not balanced"};
        for (std::size_t k = 0; k < set.size(); ++k) {
            if (p.code == set[k]) return {false, name(p) + " collides with member " + std::to_string(k)};
            if (p.code.dot(set[k]) != 0)
                return {false, name(p) + " is not orthogonal to member " + std::to_string(k)};
        }
    }
    for (std::size_t a = 0; a < products.size(); ++a)
        for (std::size_t b = a + 1; b < products.size(); ++b) {
            if (products[a].code == products[b].code)
                return {false, name(products[a]) + " collides with " + name(products[b])};
            if (products[a].code.dot(products[b].code) != 0)
                return {false, name(products[a]) + " is not orthogonal to " + name(products[b])};
        }
    return {};
}

namespace {

// Walsh index group (Z/2)^m: a set is BOCP iff it avoids 0 and no 2, 3 or 4
// distinct members xor to zero. `cover_[x]` counts the ways x is a xor of at
// most three current members; candidates must have cover_ == 0.
class SidonSearch {
public:
    SidonSearch(std::size_t m, std::size_t wanted, std::chrono::milliseconds limit)
        : size_(std::size_t{1} << m), wanted_(wanted), cover_(size_, 0),
          deadline_(std::chrono::steady_clock::now() + limit)
    {
        cover_[0] = 1;
    }

    bool run()
    {
        // greedy dive first so the best-so-far is meaningful even if the
        // bounded search prunes the greedy branch
        for (std::size_t c = 1; c < size_; ++c)
            if (cover_[c] == 0) {
                add(c, +1);
                chosen_.push_back(c);
            }
        chosen_best_ = chosen_;
        while (!chosen_.empty()) {
            const std::size_t c = chosen_.back();
            chosen_.pop_back();
            add(c, -1);
        }
        if (chosen_best_.size() >= wanted_) {
            chosen_best_.resize(wanted_);
            return true;
        }
        dfs(1);
        return chosen_best_.size() >= wanted_;
    }

    const std::vector<std::size_t>& best() const { return chosen_best_; }
    bool timed_out() const { return timed_out_; }

private:
    void add(std::size_t c, int delta)
    {
        cover_[c] += delta;
        for (std::size_t i = 0; i < chosen_.size(); ++i) {
            cover_[c ^ chosen_[i]] += delta;
            for (std::size_t j = i + 1; j < chosen_.size(); ++j) cover_[c ^ chosen_[i] ^ chosen_[j]] += delta;
        }
    }

    bool dfs(std::size_t first)
    {
        if (chosen_.size() > chosen_best_.size()) chosen_best_ = chosen_;
        if (chosen_.size() >= wanted_) return true;
        if ((++nodes_ & 0x3ff) == 0 && std::chrono::steady_clock::now() > deadline_) timed_out_ = true;
        if (timed_out_) return false;

        std::size_t available = 0;
        for (std::size_t c = first; c < size_; ++c) available += cover_[c] == 0;
        if (chosen_.size() + available < wanted_) return false;

        for (std::size_t c = first; c < size_; ++c) {
            if (cover_[c] != 0) continue;
            add(c, +1);
            chosen_.push_back(c);
            if (dfs(c + 1)) return true;
            chosen_.pop_back();
            add(c, -1);
            if (timed_out_) return false;
        }
        return false;
    }

    std::size_t size_;
    std::size_t wanted_;
    std::vector<int> cover_;
    std::vector<std::size_t> chosen_;
    std::vector<std::size_t> chosen_best_;
    std::chrono::steady_clock::time_point deadline_;
    std::size_t nodes_ = 0;
    bool timed_out_ = false;
};

} // namespace

BocpSet select_bocp(std::size_t length, std::size_t wanted, const BocpSearchOptions& opts)
{
    const std::size_t m = log2_exact(length);
    if (wanted == 0) throw std::invalid_argument("select_bocp: wanted must be >= 1");

    SidonSearch search(m, wanted, opts.time_limit);
    const bool found = search.run();
    if (!found) {
        std::ostringstream msg;
        msg << "no BOCP set of " << wanted << " codes at length " << length
            << (search.timed_out() ? " within the time limit" : " exists")
            << "; best size found " << search.best().size();
        throw BocpInfeasible(msg.str(), search.best().size(), search.timed_out());
    }

    const auto walsh = gen_walsh(length);
    BocpSet out;
    for (std::size_t idx : search.best()) {
        out.walsh_indices.push_back(idx);
        out.members.push_back(walsh[idx]);
    }
    return out;
}

void LfsrSpec::validate() const
{
    if (stages < 2 || stages > 31) throw std::invalid_argument("LFSR stages must be in 2..31");
    if (taps.empty()) throw std::invalid_argument("LFSR taps must be nonempty");
    std::vector<int> sorted = taps;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("LFSR taps must be distinct");
    if (sorted.front() < 1 || sorted.back() != stages)
        throw std::invalid_argument("LFSR taps must lie in 1..n and include stage n");
    if (!seed.empty()) {
        if (seed.size() != static_cast<std::size_t>(stages))
            throw std::invalid_argument("LFSR seed must have one bit per stage");
        if (std::all_of(seed.begin(), seed.end(), [](uint8_t b) { return b == 0; }))
            throw std::invalid_argument("LFSR seed must be nonzero");
    }
}

MSequence gen_msequence(const LfsrSpec& spec)
{
    spec.validate();
    const auto n = static_cast<std::size_t>(spec.stages);
    std::vector<uint8_t> state = spec.seed.empty() ? std::vector<uint8_t>(n, 1) : spec.seed;
    for (auto& b : state) b = b ? 1 : 0;
    const std::vector<uint8_t> initial = state;

    const std::size_t full = (std::size_t{1} << n) - 1;
    MSequence out;
    out.bits.reserve(full);
    for (std::size_t step = 0; step < full; ++step) {
        out.bits.push_back(state[n - 1]);
        uint8_t feedback = 0;
        for (int t : spec.taps) feedback ^= state[static_cast<std::size_t>(t - 1)];
        std::rotate(state.rbegin(), state.rbegin() + 1, state.rend());
        state[0] = feedback;
        if (out.period == 0 && state == initial) out.period = step + 1;
    }
    if (out.period == 0) out.period = full; // never returned to the seed: not a pure cycle
    out.maximal = out.period == full;
    if (!out.maximal) out.bits.resize(out.period);
    return out;
}

std::vector<uint8_t> gen_gold(std::span<const uint8_t> seq1, std::span<const uint8_t> seq2, std::size_t shift)
{
    if (seq1.size() != seq2.size())
        throw std::invalid_argument("Gold code sequences differ in length: " + std::to_string(seq1.size()) +
                                    " vs " + std::to_string(seq2.size()));
    const std::size_t period = seq1.size();
    if (shift >= period) throw std::invalid_argument("Gold code shift must be < sequence length");
    std::vector<uint8_t> out(period);
    for (std::size_t i = 0; i < period; ++i) out[i] = seq1[i] ^ seq2[(i + shift) % period];
    return out;
}

std::vector<uint8_t> gen_gold(const LfsrSpec& seq1, const LfsrSpec& seq2, std::size_t shift)
{
    const auto a = gen_msequence(seq1);
    const auto b = gen_msequence(seq2);
    return gen_gold(a.bits, b.bits, shift);
}

std::vector<long> periodic_cross_correlation(const Code& a, const Code& b)
{
    if (a.length() != b.length()) throw std::invalid_argument("code length mismatch");
    const std::size_t n = a.length();
    std::vector<long> out(n, 0);
    for (std::size_t lag = 0; lag < n; ++lag)
        for (std::size_t i = 0; i < n; ++i) out[lag] += a[i] * b[(i + lag) % n];
    return out;
}

std::string to_bit_string(std::span<const uint8_t> bits)
{
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

} // namespace cmi
