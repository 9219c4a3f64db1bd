#include "fsmix/fixtures.hpp"

#include <array>
#include <stdexcept>

namespace fsmix {

namespace {

// Row-major, transcribed digit for digit.
constexpr std::array<double, 196> kSpecQubo = {
    0.654888, -0.155566, 0.580933, 0.691021, -0.516198, -0.921744, -0.020833, -0.020833, -0.020833, -0.020833, 0.000000, 0.000000, 0.000000, 0.000000,
    -0.155566, 0.857080, -0.114969, -0.201265, -0.734799, 0.682853, -0.020833, -0.020833, -0.020833, -0.020833, 0.000000, 0.000000, 0.000000, 0.000000,
    0.580933, -0.114969, -2.208083, 0.434978, 0.689647, 0.284161, 0.020833, 0.020833, 0.020833, 0.020833, 0.000000, 0.000000, 0.000000, 0.000000,
    0.691021, -0.201265, 0.434978, -1.700257, 0.880849, -0.438660, 0.020833, 0.020833, 0.020833, 0.020833, 0.000000, 0.000000, 0.000000, 0.000000,
    -0.516198, -0.734799, 0.689647, 0.880849, -0.847565, 0.861399, -0.020833, -0.020833, -0.020833, -0.020833, 0.000000, 0.000000, 0.000000, 0.000000,
    -0.921744, 0.682853, 0.284161, -0.438660, 0.861399, -0.801343, 0.020833, 0.020833, 0.020833, 0.020833, 0.000000, 0.000000, 0.000000, 0.000000,
    -0.020833, -0.020833, 0.020833, 0.020833, -0.020833, 0.020833, 0.750000, -0.250000, -0.250000, -0.250000, -1.000000, 0.000000, 0.000000, 0.000000,
    -0.020833, -0.020833, 0.020833, 0.020833, -0.020833, 0.020833, -0.250000, 0.750000, -0.250000, -0.250000, 0.000000, -1.000000, 0.000000, 0.000000,
    -0.020833, -0.020833, 0.020833, 0.020833, -0.020833, 0.020833, -0.250000, -0.250000, 0.750000, -0.250000, 0.000000, 0.000000, -1.000000, 0.000000,
    -0.020833, -0.020833, 0.020833, 0.020833, -0.020833, 0.020833, -0.250000, -0.250000, -0.250000, 0.750000, 0.000000, 0.000000, 0.000000, -1.000000,
    0.000000, 0.000000, 0.000000, 0.000000, 0.000000, 0.000000, -1.000000, 0.000000, 0.000000, 0.000000, 2.000000, 0.000000, 0.000000, 0.000000,
    0.000000, 0.000000, 0.000000, 0.000000, 0.000000, 0.000000, 0.000000, -1.000000, 0.000000, 0.000000, 0.000000, 2.000000, 0.000000, 0.000000,
    0.000000, 0.000000, 0.000000, 0.000000, 0.000000, 0.000000, 0.000000, 0.000000, -1.000000, 0.000000, 0.000000, 0.000000, 2.000000, 0.000000,
    0.000000, 0.000000, 0.000000, 0.000000, 0.000000, 0.000000, 0.000000, 0.000000, 0.000000, -1.000000, 0.000000, 0.000000, 0.000000, 2.000000,
};

constexpr std::array<double, 256> kRandQubo = {
    -0.507160, -0.626067, -0.370979, 0.204478, -0.731826, 0.497795, -0.089543, 0.778661, -0.510090, -0.799264, 0.433472, -0.299784, 0.603779, -0.604381, -0.570997, -0.724014,
    -0.626067, -0.881469, 0.413613, 0.710529, -0.007755, -0.851639, 0.508670, 0.490394, -0.826299, 0.385482, 0.887413, -0.415068, -0.161579, -0.588002, -0.137618, 0.897788,
    -0.370979, 0.413613, 0.173839, 0.163411, 0.858976, 0.955427, 0.030875, -0.492069, 0.051477, 0.774003, 0.551384, -0.387463, -0.889746, -0.075674, 0.526891, 0.240785,
    0.204478, 0.710529, 0.163411, 0.540605, 0.212848, -0.621795, 0.730394, 0.139587, -0.978558, -0.284671, 0.750477, 0.812303, 0.287821, -0.405717, -0.501293, 0.753629,
    -0.731826, -0.007755, 0.858976, 0.212848, 0.742537, 0.544606, -0.265008, 0.728864, -0.152381, -0.470731, -0.503601, -0.391257, 0.203381, 0.356628, -0.833427, -0.797992,
    0.497795, -0.851639, 0.955427, -0.621795, 0.544606, -0.287941, -0.730018, 0.077989, 0.390509, -0.942507, -0.715465, 0.155380, 0.198981, -0.149508, -0.175403, 0.943773,
    -0.089543, 0.508670, 0.030875, 0.730394, -0.265008, -0.730018, 0.257362, 0.585086, 0.953278, -0.931662, 0.456079, -0.954151, 0.742424, -0.741550, 0.822530, -0.395456,
    0.778661, 0.490394, -0.492069, 0.139587, 0.728864, 0.077989, 0.585086, -0.430128, -0.835616, 0.709582, 0.516953, -0.732259, 0.996284, -0.977999, 0.210182, -0.111627,
    -0.510090, -0.826299, 0.051477, -0.978558, -0.152381, 0.390509, 0.953278, -0.835616, -0.359618, -0.935286, 0.969805, -0.063232, 0.783269, 0.104272, -0.304731, -0.236273,
    -0.799264, 0.385482, 0.774003, -0.284671, -0.470731, -0.942507, -0.931662, 0.709582, -0.935286, -0.450217, 0.237596, -0.391438, -0.828199, 0.240247, 0.223207, -0.344709,
    0.433472, 0.887413, 0.551384, 0.750477, -0.503601, -0.715465, 0.456079, 0.516953, 0.969805, 0.237596, 0.154905, 0.423843, -0.110097, 0.652090, 0.385553, 0.135372,
    -0.299784, -0.415068, -0.387463, 0.812303, -0.391257, 0.155380, -0.954151, -0.732259, -0.063232, -0.391438, 0.423843, 0.694109, -0.012280, -0.729243, 0.565898, 0.747734,
    0.603779, -0.161579, -0.889746, 0.287821, 0.203381, 0.198981, 0.742424, 0.996284, 0.783269, -0.828199, -0.110097, -0.012280, -0.462504, 0.209157, -0.436286, 0.697161,
    -0.604381, -0.588002, -0.075674, -0.405717, 0.356628, -0.149508, -0.741550, -0.977999, 0.104272, 0.240247, 0.652090, -0.729243, 0.209157, 0.917530, 0.116758, 0.141030,
    -0.570997, -0.137618, 0.526891, -0.501293, -0.833427, -0.175403, 0.822530, 0.210182, -0.304731, 0.223207, 0.385553, 0.565898, -0.436286, 0.116758, -0.222499, 0.515007,
    -0.724014, 0.897788, 0.240785, 0.753629, -0.797992, 0.943773, -0.395456, -0.111627, -0.236273, -0.344709, 0.135372, 0.747734, 0.697161, 0.141030, 0.515007, -0.228068,
};

} // namespace

QuboMatrix three_qubit_qubo() {
    QuboMatrix q(3);
    q.set(0, 0, 1.0);
    q.set(1, 1, 1.0);
    q.set(0, 1, -1.0);
    q.set(1, 2, 0.5);
    return q;
}

GroundTruth three_qubit_truth() { return exhaustive_solve(three_qubit_qubo()); }

QuboMatrix spec_qubo() { return QuboMatrix::from_dense(14, kSpecQubo); }

GadgetParams spec_qubo_params() {
    GadgetParams p;
    p.n_cut = 6;
    p.n_gadget = 4;
    p.j_gadget = 0.25;
    p.j_couple = 0.5;
    p.bias = 1.5;
    return p;
}

Bitstring spec_qubo_sol() { return Bitstring::parse("001101"); }

GroundTruth spec_qubo_truth() {
    const auto q = spec_qubo();
    const auto params = spec_qubo_params();
    return with_false_minimum(exhaustive_solve(q), q,
                              false_minimum_manifold(spec_qubo_sol(), params.n_cut,
                                                     params.n_gadget));
}

QuboMatrix rand_qubo() { return QuboMatrix::from_dense(16, kRandQubo); }

GadgetParams toy_gadget_params() {
    GadgetParams p;
    p.n_cut = 1;
    p.n_gadget = 1;
    return p;
}

std::vector<std::string> builtin_fixture_names() {
    return {"three_qubit", "spec_qubo", "rand_qubo", "toy_gadget", "dickson8", "dickson16"};
}

Fixture builtin_fixture(std::string_view name) {
    if (name == "three_qubit") {
        return {"three_qubit", three_qubit_qubo(), three_qubit_truth()};
    }
    if (name == "spec_qubo") {
        return {"spec_qubo", spec_qubo(), spec_qubo_truth()};
    }
    if (name == "rand_qubo") {
        auto q = rand_qubo();
        auto truth = exhaustive_solve(q);
        return {"rand_qubo", std::move(q), std::move(truth)};
    }
    if (name == "toy_gadget") {
        const auto params = toy_gadget_params();
        auto inst = generate_gadget_problem(params);
        auto truth = gadget_ground_truth(inst, params);
        return {"toy_gadget", std::move(inst.q), std::move(truth)};
    }
    if (name == "dickson8" || name == "dickson16") {
        throw std::invalid_argument(
            "fixture slot '" + std::string(name) +
            "' is empty: no matrix data ships for it. Build the QUBO from its gadget "
            "graph, save it in the text format (see fixtures/README.md) and pass "
            "it with problem.source=load:<path>; add problem.diagonal_from=3 "
            "problem.diagonal_to=4.4 for the modified variant");
    }
    throw std::invalid_argument("unknown builtin fixture '" + std::string(name) + "'");
}

} // namespace fsmix
