#pragma once

// matvar: matrix-variate gamma and beta integrals -- closed forms, exact
// symbolic reduction traces, samplers, and numerical verification oracles.

#include "matvar/densities.hpp"
#include "matvar/errors.hpp"
#include "matvar/gammafn.hpp"
#include "matvar/half_int.hpp"
#include "matvar/json_io.hpp"
#include "matvar/ledger.hpp"
#include "matvar/matrix.hpp"
#include "matvar/quadrature.hpp"
#include "matvar/reduction.hpp"
#include "matvar/rng.hpp"
#include "matvar/samplers.hpp"
#include "matvar/stats.hpp"
#include "matvar/verify.hpp"
