#ifndef CPTHETA_CPTHETA_HPP
#define CPTHETA_CPTHETA_HPP

#include "cptheta/graph.hpp"
#include "cptheta/iso_oracle.hpp"
#include "cptheta/symmetric_eigen.hpp"
#include "cptheta/lift_algebra.hpp"
#include "cptheta/sdp_model.hpp"
#include "cptheta/dnn_solver.hpp"
#include "cptheta/extraction.hpp"
#include "cptheta/json_io.hpp"
#include "cptheta/pipeline.hpp"

#endif  // CPTHETA_CPTHETA_HPP
