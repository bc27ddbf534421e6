#ifndef METACOLL_BOOST_PCHIP_HPP
#define METACOLL_BOOST_PCHIP_HPP

// Boost 1.74's pchip calls isnan unqualified.
#include <cmath>
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#endif
