#pragma once

#include "hadamard/analysis.hpp"
#include "hadamard/core_types.hpp"
#include "hadamard/critical_line.hpp"
#include "hadamard/error.hpp"
#include "hadamard/fit.hpp"
#include "hadamard/io.hpp"
#include "hadamard/primary_factors.hpp"
#include "hadamard/product_engine.hpp"
#include "hadamard/series_engine.hpp"
#include "hadamard/summation.hpp"
#include "hadamard/zero_sequence.hpp"
