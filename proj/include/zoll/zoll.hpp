#pragma once

#include "zoll/cli.hpp"
#include "zoll/dop853.hpp"
#include "zoll/dynamics.hpp"
#include "zoll/errors.hpp"
#include "zoll/expr.hpp"
#include "zoll/expr_json.hpp"
#include "zoll/figures.hpp"
#include "zoll/flatmap.hpp"
#include "zoll/geometry.hpp"
#include "zoll/io.hpp"
#include "zoll/jets.hpp"
#include "zoll/multienergy.hpp"
#include "zoll/profiles.hpp"
#include "zoll/quadrature.hpp"
#include "zoll/rational.hpp"
#include "zoll/spectral.hpp"
