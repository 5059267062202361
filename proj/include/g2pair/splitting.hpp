#pragma once

// Factorisation shape of a rational prime in a quartic CM field, and the
// integers whose divisors bound the degree of the ell-torsion field.

#include <string>
#include <vector>

#include "integer.hpp"

namespace g2pair {

enum class SplittingType {
    SplitCompletely,
    TwoOrThreeIdeals,
    Inert,
    RamifiedDegreeThree, // an index-3 prime, or totally ramified with ell <= 3
    RamifiedFourIdeals,
    RamifiedTwoOrThree,
    Undetermined,
};

inline std::string to_string(SplittingType s)
{
    switch (s) {
    case SplittingType::SplitCompletely: return "split-completely";
    case SplittingType::TwoOrThreeIdeals: return "two-or-three-ideals";
    case SplittingType::Inert: return "inert";
    case SplittingType::RamifiedDegreeThree: return "ramified-degree-three";
    case SplittingType::RamifiedFourIdeals: return "ramified-four-ideals";
    case SplittingType::RamifiedTwoOrThree: return "ramified-two-or-three";
    case SplittingType::Undetermined: return "undetermined";
    }
    return "undetermined";
}

/// The bound for the torsion-field degree attached to a splitting shape;
/// Undetermined yields every bound.
inline std::vector<Integer> torsion_degree_bounds(SplittingType s, const Integer& ell)
{
    const Integer l2 = ell * ell, l3 = l2 * ell;
    switch (s) {
    case SplittingType::SplitCompletely: return {ell - 1};
    case SplittingType::TwoOrThreeIdeals: return {l2 - 1};
    case SplittingType::Inert: return {l3 - l2 + ell - 1};
    case SplittingType::RamifiedDegreeThree: return {l3 - l2};
    case SplittingType::RamifiedFourIdeals: return {l2 - ell};
    case SplittingType::RamifiedTwoOrThree: return {l3 - ell};
    case SplittingType::Undetermined: break;
    }
    return {ell - 1, l2 - 1, l3 - l2 + ell - 1, l3 - l2, l2 - ell, l3 - ell};
}

} // namespace g2pair
