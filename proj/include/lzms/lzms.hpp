#pragma once

#include "lzms/csv.hpp"
#include "lzms/dynamics.hpp"
#include "lzms/integrator.hpp"
#include "lzms/lindblad.hpp"
#include "lzms/model.hpp"
#include "lzms/spectrum.hpp"
#include "lzms/sweep.hpp"
#include "lzms/validate.hpp"
#include "lzms/version.hpp"
