#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include "lvattract/criteria.hpp"
#include "lvattract/dynamics.hpp"
#include "lvattract/equilibria.hpp"
#include "lvattract/kernel.hpp"
#include "lvattract/matrix_class.hpp"
#include "lvattract/model.hpp"
#include "lvattract/spectral.hpp"

namespace lv {

using json = nlohmann::json;

json to_json_value(const Eigen::VectorXd& v);
json to_json_value(const Eigen::MatrixXd& m);
json to_json_value(const Kernel& k);
json to_json_value(const SystemSpec& spec);
json to_json_value(const ClassCertificate& c);
json to_json_value(const SaturatedEquilibrium& eq);
json to_json_value(const PlanarEquilibrium& eq);
json to_json_value(const Verdict& v);
json to_json_value(const PlanarAssessment& p);
json to_json_value(const Analysis& a);
json to_json_value(const HopfThreshold& t);

}  // namespace lv
