#pragma once

#include <array>
#include <string>

#include "logicbench/errors.hpp"

namespace logicbench {

enum class Archetype { EffectiveSolver, DeepWanderer, LazyGuesser, HollowMimic };

/// Ideal quadrant corners in the (S_cost, S_ld) plane, indexed by Archetype.
constexpr std::array<std::array<double, 2>, 4> kIdealCorners = {{
    {0.0, 1.0},  // EffectiveSolver
    {1.0, 1.0},  // DeepWanderer
    {0.0, 0.0},  // LazyGuesser
    {1.0, 0.0},  // HollowMimic
}};

inline std::string archetype_name(Archetype a) {
    switch (a) {
        case Archetype::EffectiveSolver: return "EffectiveSolver";
        case Archetype::DeepWanderer: return "DeepWanderer";
        case Archetype::LazyGuesser: return "LazyGuesser";
        case Archetype::HollowMimic: return "HollowMimic";
    }
    return "unknown";
}

inline Archetype archetype_from_name(const std::string& name) {
    for (int i = 0; i < 4; ++i)
        if (archetype_name(static_cast<Archetype>(i)) == name) return static_cast<Archetype>(i);
    throw ConfigError("unknown archetype name '" + name + "'");
}

constexpr std::array<Archetype, 4> kAllArchetypes = {
    Archetype::EffectiveSolver,
    Archetype::DeepWanderer,
    Archetype::LazyGuesser,
    Archetype::HollowMimic,
};

}  // namespace logicbench
