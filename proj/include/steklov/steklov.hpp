#pragma once
// Umbrella header for the weighted Steklov toolkit: boundary weights and
// their Fourier coefficients, Orlicz (L log L) membership machinery, the
// Fourier-Galerkin eigensolver, and counting/Weyl asymptotics.

#include "steklov/asymptotics.hpp"
#include "steklov/errors.hpp"
#include "steklov/gauss.hpp"
#include "steklov/linalg.hpp"
#include "steklov/orlicz.hpp"
#include "steklov/quadrature.hpp"
#include "steklov/report.hpp"
#include "steklov/solver.hpp"
#include "steklov/weights.hpp"
