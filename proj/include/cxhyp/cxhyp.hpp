#pragma once

#include "cxhyp/ball.hpp"
#include "cxhyp/centralizer.hpp"
#include "cxhyp/classify.hpp"
#include "cxhyp/conjugacy.hpp"
#include "cxhyp/core.hpp"
#include "cxhyp/document.hpp"
#include "cxhyp/heisenberg.hpp"
#include "cxhyp/linalg.hpp"
#include "cxhyp/model.hpp"
#include "cxhyp/random.hpp"
#include "cxhyp/siegel.hpp"
#include "cxhyp/suite.hpp"
#include "cxhyp/transport.hpp"
