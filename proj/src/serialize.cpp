#include "lvattract/serialize.hpp"

#include <variant>

namespace lv {

json to_json_value(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json_value(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json_value(const Kernel& k) {
  json out;
  out["type"] = kind_name(k);
  if (const auto* p = std::get_if<PointMass>(&k)) {
    json delays = json::array(), weights = json::array();
    for (const auto& a : p->atoms) {
      delays.push_back(a.delay);
      weights.push_back(a.weight);
    }
    out["delays"] = delays;
    out["weights"] = weights;
  } else if (const auto* e = std::get_if<Exponential>(&k)) {
    out["rate"] = e->rate;
  } else if (const auto* g = std::get_if<Erlang>(&k)) {
    out["rate"] = g->rate;
    out["order"] = g->order;
  } else {
    const auto& t = std::get<Table>(k);
    out["step"] = t.step;
    out["densities"] = t.densities;
  }
  return out;
}

json to_json_value(const SystemSpec& s) {
  json out;
  out["n"] = s.n;
  out["controlled"] = s.controlled;
  out["b"] = to_json_value(s.b);
  out["mu"] = to_json_value(s.mu);
  out["a"] = to_json_value(s.a);
  out["c"] = to_json_value(s.c);
  out["d"] = to_json_value(s.d);
  out["e"] = to_json_value(s.e);
  json K = json::array();
  for (const auto& k : s.K) K.push_back(to_json_value(k));
  out["K"] = K;
  json G = json::array();
  for (const auto& g : s.G) G.push_back(to_json_value(g));
  out["G"] = G;
  json h = json::array();
  for (const auto& p : s.h) h.push_back(json{{"step", p.step}, {"values", p.values}});
  out["h"] = h;
  return out;
}

json to_json_value(const ClassCertificate& c) {
  json out;
  out["class"] = c.matrix_class;
  out["verdict"] = c.verdict;
  out["method"] = to_string(c.method);
  out["matrix"] = to_json_value(c.matrix);
  out["tolerance"] = c.tolerance;
  if (!c.minors.empty()) {
    json minors = json::array();
    for (const auto& m : c.minors) {
      json idx = json::array();
      for (int i : m.indices()) idx.push_back(i + 1);
      minors.push_back(json{{"indices", idx}, {"value", m.value}});
    }
    out["minors"] = minors;
  }
  if (c.eta.size() > 0) {
    out["eta"] = to_json_value(c.eta);
    out["eta_shift"] = c.eta_shift;
  }
  if (!c.eigenvalues.empty()) {
    json ev = json::array();
    for (const auto& l : c.eigenvalues) ev.push_back(json::array({l.real(), l.imag()}));
    out["eigenvalues"] = ev;
  }
  if (!c.note.empty()) out["note"] = c.note;
  return out;
}

json to_json_value(const SaturatedEquilibrium& eq) {
  json out;
  out["x"] = to_json_value(eq.x);
  out["u"] = to_json_value(eq.u);
  json support = json::array();
  for (int i : eq.support) support.push_back(i + 1);
  out["support"] = support;
  out["residual"] = to_json_value(eq.residual);
  out["gap"] = eq.gap;
  out["degenerate"] = eq.degenerate;
  out["accepted_supports"] = eq.accepted_supports;
  return out;
}

json to_json_value(const PlanarEquilibrium& eq) {
  return json{{"label", eq.label},
              {"x", {eq.x(0), eq.x(1)}},
              {"u", {eq.u(0), eq.u(1)}},
              {"residual", {eq.residual(0), eq.residual(1)}},
              {"saturated", eq.saturated},
              {"unstable_boundary", eq.unstable_boundary}};
}

json to_json_value(const Verdict& v) {
  json out;
  out["criterion"] = to_string(v.criterion);
  out["fired"] = v.fired;
  out["applicable"] = v.applicable;
  out["attractor_kind"] = to_string(v.attractor_kind);
  if (v.attractor) out["attractor"] = to_json_value(*v.attractor);
  if (v.bound) out["bound"] = to_json_value(*v.bound);
  if (v.criterion == Criterion::Thm3_2 && v.fired) out["gas"] = v.gas;
  if (v.extends_to_perturbed) out["extends_to_perturbed"] = true;
  json certs = json::array();
  for (const auto& c : v.certificates) certs.push_back(to_json_value(c));
  out["certificates"] = certs;
  if (v.blocks) {
    json order = json::array();
    for (int i : v.blocks->order) order.push_back(i + 1);
    out["blocks"] = json{{"p", v.blocks->p}, {"order", order}};
  }
  if (!v.note.empty()) out["note"] = v.note;
  return out;
}

json to_json_value(const PlanarAssessment& p) {
  json conds = json::array();
  for (const auto& c : p.conditions) conds.push_back(json{{"name", c.name}, {"holds", c.holds}});
  return json{{"case", to_string(p.planar_case)},
              {"equilibrium", p.equilibrium},
              {"attractive", p.attractive},
              {"conditions", conds}};
}

json to_json_value(const Analysis& a) {
  json out;
  out["verdict"] = to_json_value(a.verdict);
  json all = json::array();
  for (const auto& v : a.evaluated) all.push_back(to_json_value(v));
  out["evaluated"] = all;
  out["matrices"] = json{{"M0", to_json_value(a.matrices.M0)},
                         {"M", to_json_value(a.matrices.M)},
                         {"M_hat0", to_json_value(a.matrices.M_hat0)},
                         {"M_hat", to_json_value(a.matrices.M_hat)},
                         {"M0_minus", to_json_value(a.matrices.M0_minus)}};
  out["p_matrix"] = to_json_value(a.p_certificate);
  if (a.equilibrium) out["saturated_equilibrium"] = to_json_value(*a.equilibrium);
  if (a.planar_equilibria) {
    json eqs = json::array();
    for (const auto* e : a.planar_equilibria->all()) eqs.push_back(to_json_value(*e));
    out["planar_equilibria"] = eqs;
  }
  if (a.planar) out["planar"] = to_json_value(*a.planar);
  out["warnings"] = a.warnings;
  return out;
}

json to_json_value(const HopfThreshold& t) {
  return json{{"n", t.index}, {"tau", t.tau}, {"omega", t.omega}, {"residual", t.residual}};
}

}  // namespace lv
