#pragma once

// Umbrella header: pulls in every public module.

#include "etalab/core.hpp"
#include "etalab/torus_spectrum.hpp"
#include "etalab/modular_forms.hpp"
#include "etalab/spectral_zeta.hpp"
#include "etalab/discriminant_lab.hpp"
#include "etalab/degeneration.hpp"
#include "etalab/cy_coefficients.hpp"
#include "etalab/cli.hpp"
