#ifndef ROBIN_CHECKPOINT_HPP
#define ROBIN_CHECKPOINT_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "robin/ca_engine.hpp"

namespace robin::checkpoint {

struct Checkpoint {
    mpfr_prec_t precision = num::kDefaultPrecision;
    ca::FactoredCA state;  // exact_value left unset; restore via restore_exact_value
    std::vector<std::pair<std::uint64_t, std::uint64_t>> queue;  // (p, target exponent)
};

/// Write the generator state to `path`. Interval endpoints are stored as MPFR
/// hex literals, so a reload is bit-exact and resumed runs reproduce the
/// uninterrupted output byte for byte.
void save(const std::string& path, const ca::CaGenerator& gen);

Checkpoint load(const std::string& path);

/// Rematerialize the exact integer value of n while it fits under `bound`.
void restore_exact_value(ca::FactoredCA& state, const mpz_class& bound);

}  // namespace robin::checkpoint

#endif  // ROBIN_CHECKPOINT_HPP
