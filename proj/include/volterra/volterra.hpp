#pragma once

#include "volterra/forward.hpp"
#include "volterra/kernel.hpp"
#include "volterra/lab.hpp"
#include "volterra/sigdec.hpp"
#include "volterra/solver.hpp"
