#pragma once

#include "bitomo/checked.hpp"
#include "bitomo/dimension_calculus.hpp"
#include "bitomo/errors.hpp"
#include "bitomo/hermitian.hpp"
#include "bitomo/ideality.hpp"
#include "bitomo/operator_bases.hpp"
#include "bitomo/partitions.hpp"
#include "bitomo/rational.hpp"
#include "bitomo/serialization.hpp"
#include "bitomo/tolerances.hpp"
#include "bitomo/tomography.hpp"
