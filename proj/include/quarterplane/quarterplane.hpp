#pragma once

#include "quarterplane/common.hpp"
#include "quarterplane/contour.hpp"
#include "quarterplane/data.hpp"
#include "quarterplane/expr.hpp"
#include "quarterplane/heat.hpp"
#include "quarterplane/kdv.hpp"
#include "quarterplane/nonuniq.hpp"
#include "quarterplane/oracle.hpp"
#include "quarterplane/transforms.hpp"
#include "quarterplane/verify.hpp"
