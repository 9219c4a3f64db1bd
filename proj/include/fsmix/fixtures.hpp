#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fsmix/qubo.hpp"

namespace fsmix {

/// Q01 = -1, Q12 = 0.5, Q00 = Q11 = 1; minima {000, 001, 110} at energy 0.
QuboMatrix three_qubit_qubo();
GroundTruth three_qubit_truth();

/// 14-variable engineered instance (n_cut = 6, n_gadget = 4) as published.
QuboMatrix spec_qubo();
GadgetParams spec_qubo_params();
/// Max-cut solution on the first six variables of spec_qubo.
Bitstring spec_qubo_sol();
GroundTruth spec_qubo_truth();

/// 16-variable instance with entries uniform in [-1, 1] as published.
QuboMatrix rand_qubo();

/// n_cut = 1, n_gadget = 1: the smallest gadget instance (3 variables).
GadgetParams toy_gadget_params();

struct Fixture {
    std::string name;
    QuboMatrix q;
    GroundTruth truth;
};

/// Names accepted by builtin_fixture, without the "builtin:" prefix.
std::vector<std::string> builtin_fixture_names();

/**
 * Looks up a shipped fixture. The two image-only instances ("dickson8",
 * "dickson16") are empty slots: asking for them throws with instructions for
 * loading a user-supplied file instead.
 */
Fixture builtin_fixture(std::string_view name);

} // namespace fsmix
