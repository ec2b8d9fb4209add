#ifndef CBMO_CBMO_HPP
#define CBMO_CBMO_HPP

#include <cbmo/ablation.hpp>
#include <cbmo/analytics.hpp>
#include <cbmo/bel.hpp>
#include <cbmo/error.hpp>
#include <cbmo/model_dsl.hpp>
#include <cbmo/observations.hpp>
#include <cbmo/ontology.hpp>
#include <cbmo/polynomial.hpp>
#include <cbmo/synthetic.hpp>

#endif // CBMO_CBMO_HPP
