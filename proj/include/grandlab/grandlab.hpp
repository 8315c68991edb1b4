#pragma once

#include "grandlab/errors.hpp"
#include "grandlab/exponents.hpp"
#include "grandlab/func01.hpp"
#include "grandlab/grand_norm.hpp"
#include "grandlab/interval.hpp"
#include "grandlab/lebesgue.hpp"
#include "grandlab/muckenhoupt.hpp"
#include "grandlab/potentials.hpp"
#include "grandlab/quadrature.hpp"
#include "grandlab/report.hpp"
#include "grandlab/sobolev_pair.hpp"
#include "grandlab/weight.hpp"
#include "grandlab/witness.hpp"
