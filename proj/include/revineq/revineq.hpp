#pragma once

#include "revineq/scalar_space.hpp"
#include "revineq/constraints.hpp"
#include "revineq/bounds.hpp"
#include "revineq/witnesses.hpp"
#include "revineq/extremal.hpp"
#include "revineq/harness.hpp"
