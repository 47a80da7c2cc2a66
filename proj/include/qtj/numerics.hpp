#pragma once

#include "qtj/numerics/big_float.hpp"
#include "qtj/numerics/embed.hpp"
#include "qtj/numerics/exact_complex.hpp"
#include "qtj/numerics/quad_irr.hpp"
#include "qtj/numerics/summation.hpp"
