#pragma once

#include "extenso/bounds.hpp"
#include "extenso/densities.hpp"
#include "extenso/error.hpp"
#include "extenso/extensivity.hpp"
#include "extenso/numerics.hpp"
#include "extenso/report.hpp"
#include "extenso/simplex.hpp"
