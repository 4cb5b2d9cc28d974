// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "srm/certificate.hpp"
#include "srm/coded_real.hpp"
#include "srm/compare.hpp"
#include "srm/dense_stream.hpp"
#include "srm/enumeration.hpp"
#include "srm/errors.hpp"
#include "srm/finite_metric.hpp"
#include "srm/glue.hpp"
#include "srm/independence.hpp"
#include "srm/interval_set.hpp"
#include "srm/json_io.hpp"
#include "srm/product.hpp"
#include "srm/rational.hpp"
#include "srm/registry.hpp"
#include "srm/rigidify.hpp"
#include "srm/verify.hpp"
