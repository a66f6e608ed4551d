#include "cvqpv/boolean_function.hpp"

#include "cvqpv/rng.hpp"

#include <bit>
#include <stdexcept>

namespace cvqpv {

namespace {

std::uint64_t input_mask(unsigned n) { return n >= 64 ? ~0ULL : ((1ULL << n) - 1); }

} // namespace

FunctionSpec FunctionSpec::parse(const std::string& text) {
    FunctionSpec spec;
    if (text == "inner-product") {
        spec.kind = Kind::inner_product;
    } else if (text == "random" || text.rfind("random:", 0) == 0) {
        spec.kind = Kind::seeded_random;
        if (text.size() > 7) {
            std::size_t used = 0;
            spec.key = std::stoull(text.substr(7), &used);
            if (used != text.size() - 7) throw std::invalid_argument("function spec: bad key in '" + text + "'");
        }
    } else if (text.rfind("table:", 0) == 0) {
        spec.kind = Kind::truth_table;
        for (char c : text.substr(6)) {
            if (c != '0' && c != '1') throw std::invalid_argument("function spec: truth table must be 0/1 digits");
            spec.table.push_back(c == '1');
        }
    } else {
        throw std::invalid_argument("function spec: unknown form '" + text + "'");
    }
    return spec;
}

std::string FunctionSpec::to_string() const {
    switch (kind) {
    case Kind::inner_product:
        return "inner-product";
    case Kind::seeded_random:
        return "random:" + std::to_string(key);
    case Kind::truth_table: {
        std::string s = "table:";
        for (bool b : table) s.push_back(b ? '1' : '0');
        return s;
    }
    }
    return {};
}

BooleanFunction::BooleanFunction(const FunctionSpec& spec, unsigned n) : kind_(spec.kind), n_(n), key_(spec.key) {
    if (n == 0 || n > kMaxInputBits) throw std::domain_error("BooleanFunction: n must lie in [1, 64]");
    switch (kind_) {
    case FunctionSpec::Kind::truth_table:
        if (n > kMaxTabulatedInputBits || spec.table.size() != (std::size_t{1} << (2 * n))) {
            throw std::domain_error("BooleanFunction: truth table must have exactly 2^(2n) entries");
        }
        table_ = spec.table;
        break;
    case FunctionSpec::Kind::seeded_random:
        if (n <= kMaxTabulatedInputBits) {
            const std::size_t size = std::size_t{1} << (2 * n);
            table_.resize(size);
            auto rng = make_stream(key_, 0);
            for (std::size_t i = 0; i < size; i += 64) {
                std::uint64_t word = rng();
                for (std::size_t j = 0; j < 64 && i + j < size; ++j) table_[i + j] = (word >> j) & 1U;
            }
        }
        break;
    case FunctionSpec::Kind::inner_product:
        break;
    }
}

bool BooleanFunction::operator()(std::uint64_t x, std::uint64_t y) const {
    const std::uint64_t mask = input_mask(n_);
    x &= mask;
    y &= mask;
    if (kind_ == FunctionSpec::Kind::inner_product) return std::popcount(x & y) & 1;
    if (!table_.empty()) return table_[(x << n_) | y];
    // keyed PRF for n beyond the tabulated range
    return splitmix64(splitmix64(key_ ^ x) ^ (y * 0xd1b54a32d192ed03ULL)) & 1U;
}

} // namespace cvqpv
