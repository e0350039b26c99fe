#pragma once

#include "multispec/construction.hpp"
#include "multispec/errors.hpp"
#include "multispec/formulas.hpp"
#include "multispec/graph.hpp"
#include "multispec/kernel.hpp"
#include "multispec/net.hpp"
#include "multispec/pipeline.hpp"
#include "multispec/quadrature.hpp"
#include "multispec/report.hpp"
#include "multispec/rng.hpp"
#include "multispec/spectral.hpp"
#include "multispec/suites.hpp"
