// Named reference models used by tests, scenarios and the acceptance suite.
#pragma once

#include <string>
#include <vector>

#include "hmmlab/model.hpp"

namespace hmmlab::fixtures {

/// M1: symmetric two-state chain (flip prob 0.1), binary channel with 0.8/0.2 confusion.
HmmModel m1();

/// M2: deterministic 4-cycle observed through a noiseless parity channel.
HmmModel m2();

/// M3: identity kernel on 3 states (not ergodic) with a noisy 3-symbol channel;
/// stationary law fixed to uniform since every law is invariant.
HmmModel m3();

/**
 * @brief M4: M1 on states {0, 1} plus a transient state 2 outside support(pi).
 *
 * State 2 stays put with probability `stay` and otherwise jumps to 0 or 1
 * evenly; nothing enters it. The channel is nondegenerate.
 */
HmmModel m4_transient(double stay = 0.9);

/// Fixture by label ("M1", "M2", "M3", "M4"); throws ConfigError otherwise.
HmmModel by_label(const std::string &label);
std::vector<std::string> labels();

} // namespace hmmlab::fixtures
