#pragma once

#include "dhps/dh/gamma.hpp"
#include "dhps/dh/params.hpp"
#include "dhps/error.hpp"
#include "dhps/numerics/kernel.hpp"
#include "dhps/numerics/phase.hpp"
#include "dhps/numerics/quadrature.hpp"
#include "dhps/numerics/rational.hpp"
#include "dhps/parallel.hpp"
#include "dhps/primes/ps_prime.hpp"
#include "dhps/primes/sieve.hpp"
#include "dhps/primes/table.hpp"
#include "dhps/run/config.hpp"
#include "dhps/run/pipeline.hpp"
#include "dhps/run/report.hpp"
#include "dhps/search/quintet.hpp"
#include "dhps/sums/diagnostics.hpp"
#include "dhps/sums/exp_sums.hpp"
