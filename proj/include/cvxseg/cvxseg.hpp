#pragma once

#include "cvxseg/config_file.hpp"
#include "cvxseg/convexity.hpp"
#include "cvxseg/convolve.hpp"
#include "cvxseg/distance.hpp"
#include "cvxseg/field.hpp"
#include "cvxseg/gmm.hpp"
#include "cvxseg/hull.hpp"
#include "cvxseg/image.hpp"
#include "cvxseg/image_io.hpp"
#include "cvxseg/kernel.hpp"
#include "cvxseg/phantom.hpp"
#include "cvxseg/region_force.hpp"
#include "cvxseg/solver.hpp"
