#pragma once

#include "cyclift/prime_field.hpp"
#include "cyclift/multipoly.hpp"
#include "cyclift/rational_function.hpp"
#include "cyclift/field_context.hpp"
#include "cyclift/valued.hpp"
#include "cyclift/expression.hpp"
#include "cyclift/linear_algebra.hpp"
#include "cyclift/p_structure.hpp"
#include "cyclift/witt.hpp"
#include "cyclift/tower.hpp"
#include "cyclift/albert.hpp"
#include "cyclift/lift.hpp"
#include "cyclift/random.hpp"
#include "cyclift/algebra.hpp"
#include "cyclift/serialize.hpp"
