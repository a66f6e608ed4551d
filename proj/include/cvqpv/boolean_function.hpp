#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cvqpv {

/// Descriptor of the basis-choice function f : {0,1}^n x {0,1}^n -> {0,1}.
///
/// Text forms (used by configs):
///   random[:KEY]        uniformly random truth table drawn from KEY
///   table:BITS          explicit truth table, BITS[x * 2^n + y]
///   inner-product       <x, y> mod 2
struct FunctionSpec {
    enum class Kind { seeded_random, truth_table, inner_product };

    Kind kind = Kind::seeded_random;
    std::uint64_t key = 0;
    std::vector<bool> table;

    static FunctionSpec parse(const std::string& text);
    [[nodiscard]] std::string to_string() const;
};

/// Largest n for which seeded_random materializes a full truth table;
/// beyond it a keyed pseudorandom function stands in.
inline constexpr unsigned kMaxTabulatedInputBits = 12;
inline constexpr unsigned kMaxInputBits = 64;

class BooleanFunction {
public:
    BooleanFunction(const FunctionSpec& spec, unsigned n);

    [[nodiscard]] bool operator()(std::uint64_t x, std::uint64_t y) const;
    [[nodiscard]] unsigned input_bits() const { return n_; }

private:
    FunctionSpec::Kind kind_;
    unsigned n_;
    std::uint64_t key_;
    std::vector<bool> table_;
};

} // namespace cvqpv
