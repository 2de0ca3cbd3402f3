#pragma once

// Solver library for the one-dimensional time-tempered fractional
// diffusion equation: local discontinuous Galerkin in space, order-q
// tempered convolution quadrature in time.

#include "tfdiff/adaptive_quad.hpp"
#include "tfdiff/block_lu.hpp"
#include "tfdiff/config.hpp"
#include "tfdiff/dg_function.hpp"
#include "tfdiff/gauss.hpp"
#include "tfdiff/ldg.hpp"
#include "tfdiff/legendre.hpp"
#include "tfdiff/mesh.hpp"
#include "tfdiff/mittag_leffler.hpp"
#include "tfdiff/params.hpp"
#include "tfdiff/problems.hpp"
#include "tfdiff/projections.hpp"
#include "tfdiff/report.hpp"
#include "tfdiff/study.hpp"
#include "tfdiff/tempered_integral.hpp"
#include "tfdiff/time_march.hpp"
#include "tfdiff/weights.hpp"
