// qkd.hpp
// Convenience header pulling in the whole library.

#pragma once

#include <qkd/common.hpp>
#include <qkd/entropy.hpp>
#include <qkd/matrix.hpp>
#include <qkd/eig.hpp>
#include <qkd/density.hpp>
#include <qkd/random.hpp>
#include <qkd/stats.hpp>
#include <qkd/attack.hpp>
#include <qkd/two_way.hpp>
#include <qkd/tomography.hpp>
#include <qkd/bound.hpp>
#include <qkd/optimize.hpp>
#include <qkd/report.hpp>
#include <qkd/b92.hpp>
#include <qkd/optpi.hpp>
#include <qkd/sqkd.hpp>
#include <qkd/threshold.hpp>
#include <qkd/io.hpp>
