#pragma once

#include "ring.hpp"
#include "matrix.hpp"
#include "diagram.hpp"
#include "burau.hpp"
#include "rt.hpp"
#include "symplectic.hpp"
#include "bracket.hpp"
#include "catalog.hpp"
