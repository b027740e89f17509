#pragma once

#include "polariton/driven.hpp"
#include "polariton/ensemble.hpp"
#include "polariton/error.hpp"
#include "polariton/fields.hpp"
#include "polariton/hopfield.hpp"
#include "polariton/material.hpp"
#include "polariton/models.hpp"
#include "polariton/parallel.hpp"
#include "polariton/units.hpp"

namespace polariton {

inline constexpr const char* kVersion = "0.1.0";

} // namespace polariton
