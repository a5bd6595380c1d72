#pragma once

#include "qfda/errors.hpp"
#include "qfda/binary_io.hpp"
#include "qfda/dataset.hpp"
#include "qfda/block_dct.hpp"
#include "qfda/quantizer.hpp"
#include "qfda/rate_model.hpp"
#include "qfda/discriminant.hpp"
#include "qfda/optimizer.hpp"
#include "qfda/config.hpp"
#include "qfda/evaluation.hpp"
#include "qfda/experiment.hpp"
