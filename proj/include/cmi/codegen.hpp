// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmi {

// A +-1 chip sequence. Construction rejects anything other than +1 / -1.
class Code {
public:
    Code() = default;
    explicit Code(std::vector<int8_t> chips);

    static Code ones(std::size_t length);
    static Code from_bits(std::span<const uint8_t> bits); // bit 0 -> +1, bit 1 -> -1

    std::size_t length() const { return chips_.size(); }
    int8_t operator[](std::size_t i) const { return chips_[i]; }
    std::span<const int8_t> chips() const { return chips_; }

    long sum() const;
    bool balanced() const { return sum() == 0; }
    long dot(const Code& other) const;

    bool operator==(const Code&) const = default;

private:
    std::vector<int8_t> chips_;
};

// Elementwise product of two equal-length codes.
Code code_product(const Code& a, const Code& b);

bool is_power_of_two(std::size_t n);

// R_0 (all ones) through R_log2(L); R_k alternates sign in blocks of L / 2^k.
std::vector<Code> gen_rademacher(std::size_t length);

// All L Walsh codes in sequency order (row k has k sign changes). In this
// ordering W_a * W_b = W_(a xor b).
std::vector<Code> gen_walsh(std::size_t length);

// Natural (Sylvester) Hadamard row index -> sequency index, for length L.
std::size_t natural_to_sequency(std::size_t natural_index, std::size_t length);

// Sequency index of a code inside the length-L Walsh family, if it is one.
std::optional<std::size_t> walsh_index(const Code& code);

struct BocpReport {
    bool ok = true;
    std::string first_violation; // empty when ok
};

// Checks the balanced-orthogonal-code-product conditions on an arbitrary set.
BocpReport verify_bocp(std::span<const Code> set);

struct BocpSet {
    std::vector<Code> members;
    std::vector<std::size_t> walsh_indices;
};

class BocpInfeasible : public std::runtime_error {
public:
    BocpInfeasible(const std::string& what, std::size_t best_size, bool timed_out)
        : std::runtime_error(what), best_size(best_size), timed_out(timed_out) {}
    std::size_t best_size;
    bool timed_out;
};

struct BocpSearchOptions {
    std::chrono::milliseconds time_limit{60'000};
};

// Depth-first search over Walsh sequency indices (candidates in increasing
// order) for `wanted` codes such that no 3 or 4 distinct members multiply to
// the all-ones code. Deterministic for a given (length, wanted).
BocpSet select_bocp(std::size_t length, std::size_t wanted, const BocpSearchOptions& opts = {});

struct LfsrSpec {
    int stages = 0;
    std::vector<int> taps;         // 1-based stage indices
    std::vector<uint8_t> seed;     // stage 1..n initial contents; empty -> all ones

    void validate() const;
};

struct MSequence {
    std::vector<uint8_t> bits; // one full period (or 2^n - 1 bits if maximal)
    std::size_t period = 0;
    bool maximal = false;
};

// Fibonacci LFSR: output is the last stage, the XOR of tapped stages is
// shifted into stage 1. Emits 2^n - 1 bits; `period` is the true period.
MSequence gen_msequence(const LfsrSpec& spec);

// gold[i] = seq1[i] xor seq2[(i + shift) mod T]
std::vector<uint8_t> gen_gold(const LfsrSpec& seq1, const LfsrSpec& seq2, std::size_t shift);
std::vector<uint8_t> gen_gold(std::span<const uint8_t> seq1, std::span<const uint8_t> seq2,
                              std::size_t shift);

// Periodic cross-correlation of two equal-length +-1 codes at every lag.
std::vector<long> periodic_cross_correlation(const Code& a, const Code& b);

std::string to_bit_string(std::span<const uint8_t> bits);

} // namespace cmi
