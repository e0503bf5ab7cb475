#pragma once

#include "geomom/config.hpp"
#include "geomom/diffop.hpp"
#include "geomom/evaluate.hpp"
#include "geomom/expr.hpp"
#include "geomom/geometry.hpp"
#include "geomom/nullspace.hpp"
#include "geomom/parser.hpp"
#include "geomom/pauli.hpp"
#include "geomom/quadrature.hpp"
#include "geomom/quantize.hpp"
#include "geomom/report.hpp"
#include "geomom/sampling.hpp"
#include "geomom/surface.hpp"
