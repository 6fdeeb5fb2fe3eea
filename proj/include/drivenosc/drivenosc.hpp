// Umbrella header.
#pragma once

#include "drivenosc/adaptive_abm.hpp"
#include "drivenosc/common.hpp"
#include "drivenosc/csvio.hpp"
#include "drivenosc/eigenstates.hpp"
#include "drivenosc/exact_solution.hpp"
#include "drivenosc/experiment.hpp"
#include "drivenosc/fft.hpp"
#include "drivenosc/grid.hpp"
#include "drivenosc/kinematics.hpp"
#include "drivenosc/matrix_oracle.hpp"
#include "drivenosc/params.hpp"
#include "drivenosc/phase_space.hpp"
#include "drivenosc/propagator.hpp"
#include "drivenosc/pulse.hpp"
#include "drivenosc/quadrature.hpp"
#include "drivenosc/wavefunction.hpp"
