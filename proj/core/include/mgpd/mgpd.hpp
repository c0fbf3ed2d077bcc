#ifndef MGPD_MGPD_HPP
#define MGPD_MGPD_HPP

#include "mgpd/analysis.hpp"
#include "mgpd/common.hpp"
#include "mgpd/density.hpp"
#include "mgpd/fit.hpp"
#include "mgpd/io.hpp"
#include "mgpd/oracle.hpp"
#include "mgpd/params.hpp"
#include "mgpd/quadrature.hpp"
#include "mgpd/rng.hpp"
#include "mgpd/spectral.hpp"
#include "mgpd/stdf.hpp"

#endif  // MGPD_MGPD_HPP
