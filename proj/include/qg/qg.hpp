#pragma once

// Umbrella header: the whole library in dependency order.

#include "qg/version.hpp"
#include "qg/wavevector.hpp"
#include "qg/field.hpp"
#include "qg/transform.hpp"
#include "qg/operators.hpp"
#include "qg/diagnostics.hpp"
#include "qg/rhs.hpp"
#include "qg/integrator.hpp"
#include "qg/initial.hpp"
#include "qg/config.hpp"
#include "qg/io.hpp"
#include "qg/harness.hpp"
#include "qg/cli.hpp"
