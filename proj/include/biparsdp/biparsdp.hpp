#pragma once

#include "biparsdp/certify.hpp"
#include "biparsdp/epsilon_sweep.hpp"
#include "biparsdp/parallel.hpp"
#include "biparsdp/qcqp_model.hpp"
#include "biparsdp/relaxation.hpp"
#include "biparsdp/report_json.hpp"
#include "biparsdp/sdp_solver.hpp"
#include "biparsdp/sparsity_graph.hpp"
#include "biparsdp/transform.hpp"
