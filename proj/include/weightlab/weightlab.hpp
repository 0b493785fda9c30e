#pragma once

#include "weightlab/errors.hpp"
#include "weightlab/interval.hpp"
#include "weightlab/quadrature.hpp"
#include "weightlab/weight.hpp"
#include "weightlab/sweep.hpp"
#include "weightlab/oscillation.hpp"
#include "weightlab/muckenhoupt.hpp"
#include "weightlab/carleson.hpp"
#include "weightlab/area.hpp"
#include "weightlab/families.hpp"
#include "weightlab/report.hpp"
#include "weightlab/config.hpp"
#include "weightlab/experiment.hpp"
