#pragma once

/**
 * @file plap.hpp
 * @brief Convenience umbrella: pulls in every public module of the library.
 */

#include "comparison.hpp"
#include "curvature.hpp"
#include "eigensolver.hpp"
#include "model_geometry.hpp"
#include "numerics.hpp"
#include "rearrangement.hpp"
#include "report.hpp"
#include "verify.hpp"
#include "warped_profile.hpp"
