#pragma once

// Exact arithmetic kernels: rationals, sector classes, truncated series in one
// and two z variables, Novikov tables and small dense matrices.

#include "twopoint/bizseries.hpp"
#include "twopoint/cohclass.hpp"
#include "twopoint/matrix.hpp"
#include "twopoint/novikov.hpp"
#include "twopoint/rat.hpp"
#include "twopoint/zseries.hpp"
