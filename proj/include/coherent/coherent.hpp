#pragma once

#include "coherent/matrix_core.hpp"
#include "coherent/oscillator_algebra.hpp"
#include "coherent/scalar_kernels.hpp"
#include "coherent/coherent_ops.hpp"
#include "coherent/extended_ops.hpp"
#include "coherent/phase_space.hpp"
