///
/// \file wlidoa.hpp
///
/// Umbrella header for the weighted lifted-structure DOA estimation library.
///
#ifndef WLIDOA_WLIDOA_HPP
#define WLIDOA_WLIDOA_HPP

#include "wlidoa/array_model.hpp"
#include "wlidoa/completion.hpp"
#include "wlidoa/doa.hpp"
#include "wlidoa/harness.hpp"
#include "wlidoa/io.hpp"
#include "wlidoa/leverage.hpp"
#include "wlidoa/lifting.hpp"
#include "wlidoa/lp.hpp"
#include "wlidoa/rng.hpp"
#include "wlidoa/types.hpp"
#include "wlidoa/weights.hpp"

#endif // WLIDOA_WLIDOA_HPP
