#pragma once

#include "dgconn/error.hpp"
#include "dgconn/scalar.hpp"
#include "dgconn/matrix.hpp"
#include "dgconn/integer_matrix.hpp"
#include "dgconn/complex.hpp"
#include "dgconn/homology.hpp"
#include "dgconn/connection.hpp"
#include "dgconn/invariants.hpp"
#include "dgconn/curvature.hpp"
#include "dgconn/holonomy.hpp"
#include "dgconn/multiplicative.hpp"
#include "dgconn/reconstruct.hpp"
