#pragma once

#include "pmw/generators.hpp"

using pmw::integer_coords;
using pmw::random_interval;
using pmw::random_matrix;
using pmw::Rng;

inline std::vector<pmw::Rat> int_coords(int n) { return integer_coords(n); }
