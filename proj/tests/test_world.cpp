// tests/test_world.cpp
#include "qsa/world.hpp"
#include "qsa/protocol.hpp"

#include <gtest/gtest.h>

using namespace qsa;

namespace {

void expect_same_state(const StateVector& a, const StateVector& b,
                       double tol = 1e-12) {
    ASSERT_EQ(a.dim(), b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        EXPECT_NEAR(a[i].real(), b[i].real(), tol) << "i=" << i;
        EXPECT_NEAR(a[i].imag(), b[i].imag(), tol) << "i=" << i;
    }
}

} // namespace

TEST(World, PeekMatchesFromStates) {
    QuantumWorld w;
    const std::vector<CanonicalState> states = {
        CanonicalState::Zero, CanonicalState::One, CanonicalState::Plus,
        CanonicalState::Minus};
    std::vector<Slot> slots;
    for (const auto s : states) slots.push_back(w.add_qubit(s));
    expect_same_state(w.peek(slots), from_states(states));
}

TEST(World, SingleQubitGateMatchesMonolithicRoute) {
    const std::vector<CanonicalState> states = {
        CanonicalState::Plus, CanonicalState::Zero, CanonicalState::Minus,
        CanonicalState::One};
    QuantumWorld w;
    std::vector<Slot> slots;
    for (const auto s : states) slots.push_back(w.add_qubit(s));
    w.apply_single(Gate::i_sigma_y(), slots[0]);
    w.apply_single(Gate::i_sigma_y(), slots[2]);

    auto mono = from_states(states);
    mono = apply_single(mono, Gate::i_sigma_y(), 0);
    mono = apply_single(mono, Gate::i_sigma_y(), 2);
    expect_same_state(w.peek(slots), mono);
}

TEST(World, CnotMergesFactors) {
    QuantumWorld w;
    const Slot a = w.add_qubit(CanonicalState::Plus);
    const Slot b = w.add_qubit(CanonicalState::Zero);
    EXPECT_EQ(w.factor_size(a), 1u);
    w.apply_cnot(a, b);
    EXPECT_EQ(w.factor_size(a), 2u);
    expect_same_state(w.peek({a, b}), prepare_bell(BellLabel::PsiPlus));
}

TEST(World, BellPairRoundTrip) {
    RngStream rng(3);
    for (const auto label : kBellLabels) {
        QuantumWorld w;
        const auto [a, b] = w.add_bell_pair(label);
        EXPECT_EQ(w.bell_measure(a, b, rng), label);
    }
}

TEST(World, MeasureCollapsesWithinFactor) {
    RngStream rng(5);
    QuantumWorld w;
    const auto [a, b] = w.add_bell_pair(BellLabel::PsiPlus);
    const int outcome = w.measure(a, Basis::Z, rng);
    EXPECT_EQ(w.measure(b, Basis::Z, rng), outcome);
}

TEST(World, PeekRejectsEntangledSubset) {
    QuantumWorld w;
    const auto [a, b] = w.add_bell_pair(BellLabel::PhiPlus);
    EXPECT_THROW(w.peek({a}), std::invalid_argument);
    EXPECT_NO_THROW(w.peek({a, b}));
}

TEST(World, PeekHonorsRequestOrderAcrossFactors) {
    QuantumWorld w;
    const Slot a = w.add_qubit(CanonicalState::Zero);
    const Slot b = w.add_qubit(CanonicalState::One);
    const Slot c = w.add_qubit(CanonicalState::Plus);
    expect_same_state(
        w.peek({c, a, b}),
        from_states({CanonicalState::Plus, CanonicalState::Zero, CanonicalState::One}));
}

TEST(World, PeekInterleavedBellPairs) {
    QuantumWorld w;
    const auto [a1, a2] = w.add_bell_pair(BellLabel::PhiPlus);
    const auto [b1, b2] = w.add_bell_pair(BellLabel::PhiMinus);
    // request order interleaves the two factors: (a1, b1, a2, b2)
    const auto joint = w.peek({a1, b1, a2, b2});
    auto mono = tensor(prepare_bell(BellLabel::PhiPlus),
                       prepare_bell(BellLabel::PhiMinus));
    Permutation interleave;
    interleave.map = {0, 2, 1, 3};
    expect_same_state(joint, apply_permutation(mono, interleave));
}

TEST(World, SlotReorderMatchesAmplitudePermutation) {
    const std::vector<CanonicalState> states = {
        CanonicalState::Zero, CanonicalState::One, CanonicalState::Plus,
        CanonicalState::Minus};
    QuantumWorld w;
    std::vector<Slot> slots;
    for (const auto s : states) slots.push_back(w.add_qubit(s));
    const Permutation p = Permutation::from_order_string("4123");

    const auto via_slots = w.peek(permute_slots(slots, p));
    const auto via_amps = apply_permutation(from_states(states), p);
    expect_same_state(via_slots, via_amps);
}

TEST(World, CrossFactorBellMeasureMatchesMonolithicProbabilities) {
    // measuring across two pairs merges them; outcome statistics must match
    // the monolithic bell_probabilities oracle (uniform marginals)
    RngStream rng(11);
    int counts[4] = {0, 0, 0, 0};
    const int trials = 4000;
    for (int i = 0; i < trials; ++i) {
        QuantumWorld w;
        const auto [a1, a2] = w.add_bell_pair(BellLabel::PsiPlus);
        const auto [b1, b2] = w.add_bell_pair(BellLabel::PsiPlus);
        (void)a2;
        (void)b2;
        const BellLabel l = w.bell_measure(a1, b1, rng);
        ++counts[static_cast<int>(l)];
    }
    const double sigma = std::sqrt(0.25 * 0.75 / trials);
    for (const int c : counts) {
        EXPECT_NEAR(static_cast<double>(c) / trials, 0.25, 3 * sigma);
    }
}

TEST(World, UnknownSlotThrows) {
    QuantumWorld w;
    RngStream rng(1);
    EXPECT_THROW(w.measure(0, Basis::Z, rng), std::out_of_range);
    const Slot a = w.add_qubit(CanonicalState::Zero);
    EXPECT_THROW(w.apply_cnot(a, a), std::invalid_argument);
}
