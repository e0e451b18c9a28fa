#include "lvattract/criteria.hpp"

#include <algorithm>
#include <cmath>

#include "lvattract/error.hpp"

namespace lv {

namespace {

struct Context {
  CommunityMatrices m;
  ClassCertificate p_cert;
  SaturatedEquilibrium eq;
  BlockDecomposition blocks;
  Eigen::VectorXd alpha;  // c_i d_i / e_i, zero when uncontrolled
};

Eigen::VectorXd control_strength(const SystemSpec& spec) {
  return (spec.effective_c().array() * spec.d.array() / spec.e.array()).matrix();
}

Context make_context(const SystemSpec& spec) {
  Context ctx;
  ctx.m = build_matrices(spec);
  ctx.p_cert = is_p_matrix(ctx.m.M);
  if (!ctx.p_cert.verdict)
    throw Error(Errc::NotPMatrix,
                spec.controlled ? "community matrix M is not a P-matrix"
                                : "community matrix M0 is not a P-matrix");
  ctx.eq = saturated_equilibrium(ctx.m.M, spec.b, spec.d, spec.e);
  ctx.blocks = decompose(ctx.eq);
  ctx.alpha = control_strength(spec);
  return ctx;
}

Eigen::MatrixXd sub(const Eigen::MatrixXd& X, const std::vector<int>& rows, const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = X(rows[r], cols[c]);
  return out;
}

struct Split {
  std::vector<int> one;  // support
  std::vector<int> two;  // extinct species
};

Split split(const BlockDecomposition& blocks) {
  Split s;
  s.one.assign(blocks.order.begin(), blocks.order.begin() + blocks.p);
  s.two.assign(blocks.order.begin() + blocks.p, blocks.order.end());
  return s;
}

Eigen::MatrixXd block11(const SystemSpec& spec, const std::vector<int>& idx, const Eigen::VectorXd& alpha) {
  Eigen::MatrixXd B(idx.size(), idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) {
      B(r, c) = -std::abs(spec.a(idx[r], idx[c]));
      if (r == c) B(r, c) += spec.mu(idx[r]) - alpha(idx[r]);
    }
  return B;
}

Eigen::MatrixXd block22(const SystemSpec& spec, const std::vector<int>& idx) {
  Eigen::MatrixXd B(idx.size(), idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) {
      B(r, c) = -std::max(-spec.a(idx[r], idx[c]), 0.0);
      if (r == c) B(r, c) += spec.mu(idx[r]);
    }
  return B;
}

bool all_of_block(const SystemSpec& spec, const std::vector<int>& rows, const std::vector<int>& cols,
                  bool (*pred)(double)) {
  for (int r : rows)
    for (int c : cols)
      if (!pred(spec.a(r, c))) return false;
  return true;
}

bool nonneg(double v) { return v >= 0.0; }
bool nonpos(double v) { return v <= 0.0; }

Verdict make_verdict(Criterion c) {
  Verdict v;
  v.criterion = c;
  return v;
}

void set_attractor(Verdict& v, const Context& ctx) {
  v.attractor_kind = AttractorKind::Equilibrium;
  v.attractor = ctx.eq;
  v.blocks = ctx.blocks;
}

void mark_perturbed(Verdict& v, const SystemSpec& spec) {
  if (!v.fired || !spec.has_perturbations()) return;
  switch (v.criterion) {
    case Criterion::Thm3_2:
    case Criterion::Thm4_1:
    case Criterion::Thm4_2:
    case Criterion::Thm4_3:
      v.extends_to_perturbed = true;
      break;
    default:
      break;
  }
}

Verdict global_attractivity(const SystemSpec& spec, const Context& ctx) {
  Verdict v = make_verdict(Criterion::Thm3_2);
  v.certificates.push_back(is_m_matrix(ctx.m.M_hat));
  v.fired = v.certificates.back().verdict;
  if (v.fired) {
    set_attractor(v, ctx);
    v.gas = static_cast<int>(ctx.eq.support.size()) == static_cast<int>(spec.n);
  }
  mark_perturbed(v, spec);
  return v;
}

Verdict total_extinction(const SystemSpec& spec, const Context& ctx) {
  Verdict v = make_verdict(Criterion::Thm4_1);
  v.applicable = (spec.b.array() <= 0.0).all();
  if (!v.applicable) {
    v.note = "some b_i > 0, so 0 is not saturated";
    return v;
  }
  // Without controls there is no margin from the feedback term, so the
  // comparison matrix must be nonsingular.
  v.certificates.push_back(spec.controlled ? is_m_matrix(ctx.m.M0_minus)
                                           : is_nonsingular_m_matrix(ctx.m.M0_minus));
  v.fired = v.certificates.back().verdict;
  if (v.fired) set_attractor(v, ctx);
  mark_perturbed(v, spec);
  return v;
}

Verdict partial_extinction(const SystemSpec& spec, const Context& ctx, bool sharp) {
  Verdict v = make_verdict(sharp ? Criterion::Thm4_3 : Criterion::Thm4_2);
  const int p = ctx.blocks.p;
  const int n = static_cast<int>(spec.n);
  if (sharp && (p == 0 || p == n)) {
    v.applicable = false;
    v.note = "sharpened block test needs 1 <= p < n";
    return v;
  }
  v.blocks = ctx.blocks;
  const Eigen::MatrixXd B = extinction_block_matrix(spec, ctx.eq, ctx.blocks, sharp, ctx.alpha);
  v.certificates.push_back(is_m_matrix(B));
  v.fired = v.certificates.back().verdict;
  if (!v.fired && sharp) {
    const Split s = split(ctx.blocks);
    bool b_nonpos = true;
    for (int i : s.two) b_nonpos = b_nonpos && spec.b(i) <= 0.0;
    if (b_nonpos && all_of_block(spec, s.two, s.one, nonneg)) {
      auto c11 = is_m_matrix(block11(spec, s.one, ctx.alpha));
      auto c22 = is_m_matrix(block22(spec, s.two));
      v.fired = c11.verdict && c22.verdict;
      v.certificates.push_back(std::move(c11));
      v.certificates.push_back(std::move(c22));
      if (v.fired) {
        v.note = "A21 >= 0 and b_i <= 0 off the support: diagonal blocks suffice";
        v.certificates.erase(v.certificates.begin());
      }
    }
  }
  if (v.fired) set_attractor(v, ctx);
  mark_perturbed(v, spec);
  return v;
}

Verdict predator_prey(const SystemSpec& spec, const Context& ctx) {
  Verdict v = make_verdict(Criterion::Thm4_4);
  const int p = ctx.blocks.p;
  if (p == 0 || p == static_cast<int>(spec.n)) {
    v.applicable = false;
    v.note = "needs a boundary saturated equilibrium with 1 <= p < n";
    return v;
  }
  v.blocks = ctx.blocks;
  const Split s = split(ctx.blocks);
  if (!all_of_block(spec, s.one, s.two, nonneg) || !all_of_block(spec, s.two, s.one, nonpos)) {
    v.applicable = false;
    v.note = "sign pattern A12 >= 0, A21 <= 0 does not hold";
    return v;
  }
  auto c11 = is_m_matrix(block11(spec, s.one, ctx.alpha));
  auto c22 = is_m_matrix(block22(spec, s.two));
  v.fired = c11.verdict && c22.verdict;
  v.certificates.push_back(std::move(c11));
  v.certificates.push_back(std::move(c22));
  if (v.fired) set_attractor(v, ctx);
  return v;
}

Verdict uncontrolled(const SystemSpec& spec, const Context& ctx) {
  Verdict v = make_verdict(Criterion::Cor4_2);
  const int p = ctx.blocks.p;
  const int n = static_cast<int>(spec.n);
  v.blocks = ctx.blocks;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
  if (p == 0) {
    v.applicable = false;
    v.note = "0 is saturated; handled by the total extinction test";
    return v;
  }
  if (p == n) {
    // Interior equilibrium: M_hat0 an M-matrix (singular allowed).
    v.certificates.push_back(is_m_matrix(build_matrices(spec).M_hat0));
    v.fired = v.certificates.back().verdict;
    if (v.fired) set_attractor(v, ctx);
    return v;
  }
  const Eigen::MatrixXd B = extinction_block_matrix(spec, ctx.eq, ctx.blocks, true, zero);
  v.certificates.push_back(is_nonsingular_m_matrix(B));
  v.fired = v.certificates.back().verdict;
  if (!v.fired) {
    const Split s = split(ctx.blocks);
    bool b_nonpos = true;
    for (int i : s.two) b_nonpos = b_nonpos && spec.b(i) <= 0.0;
    const bool case_i = b_nonpos && all_of_block(spec, s.two, s.one, nonneg);
    const bool case_ii = all_of_block(spec, s.one, s.two, nonneg) && all_of_block(spec, s.two, s.one, nonpos);
    if (case_i || case_ii) {
      auto c11 = is_nonsingular_m_matrix(block11(spec, s.one, zero));
      auto c22 = is_nonsingular_m_matrix(block22(spec, s.two));
      v.fired = c11.verdict && c22.verdict;
      v.certificates.push_back(std::move(c11));
      v.certificates.push_back(std::move(c22));
      if (v.fired) {
        v.note = case_i ? "A21 >= 0 and b_i <= 0 off the support: diagonal blocks suffice"
                        : "A12 >= 0 and A21 <= 0: diagonal blocks suffice";
        v.certificates.erase(v.certificates.begin());
      }
    }
  }
  if (v.fired) set_attractor(v, ctx);
  return v;
}

Verdict dissipativity(const SystemSpec& spec) {
  Verdict v = make_verdict(Criterion::Thm3_3);
  const DissipativityResult r = dissipativity_bound(spec);
  v.certificates.push_back(r.certificate);
  v.fired = r.verdict;
  if (v.fired) {
    v.attractor_kind = AttractorKind::DissipativeOnly;
    v.bound = r.bound;
  }
  return v;
}

Verdict cooperative_positive(const SystemSpec& spec, const CommunityMatrices& m) {
  Verdict v = make_verdict(Criterion::Thm3_4);
  const int n = static_cast<int>(spec.n);
  bool signs = (spec.b.array() > 0.0).all();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && spec.a(i, j) > 0.0) signs = false;
  v.applicable = signs;
  if (!signs) {
    v.note = "needs b > 0 and a_ij <= 0 off the diagonal";
    return v;
  }
  v.certificates.push_back(is_nonsingular_m_matrix(m.M));
  v.fired = v.certificates.back().verdict;
  if (v.fired) {
    const Eigen::VectorXd x = m.M.fullPivLu().solve(spec.b);
    v.bound = describe_point(m.M, spec.b, spec.d, spec.e, x);
    v.note = "positive equilibrium exists; attractivity not implied";
  }
  return v;
}

void require_n(const SystemSpec& spec) {
  if (spec.n == 0) throw Error(Errc::DimensionMismatch, "system has no species");
}

}  // namespace

const char* to_string(Criterion c) noexcept {
  switch (c) {
    case Criterion::None: return "None";
    case Criterion::Thm3_2: return "Thm3.2";
    case Criterion::Thm3_3: return "Thm3.3-dissipative";
    case Criterion::Thm3_4: return "Thm3.4-coop-positive";
    case Criterion::Thm4_1: return "Thm4.1-total-extinction";
    case Criterion::Thm4_2: return "Thm4.2-partial";
    case Criterion::Thm4_3: return "Thm4.3-partial-sharp";
    case Criterion::Thm4_4: return "Thm4.4-predator-prey";
    case Criterion::Cor4_2: return "Cor4.2-uncontrolled";
  }
  return "?";
}

const char* to_string(PlanarCase c) noexcept {
  switch (c) {
    case PlanarCase::NotApplicable: return "not-applicable";
    case PlanarCase::None: return "None";
    case PlanarCase::I: return "Prop5.1-i";
    case PlanarCase::II: return "Prop5.1-ii";
    case PlanarCase::III: return "Prop5.1-iii";
    case PlanarCase::IVa: return "Prop5.1-iv(a)";
    case PlanarCase::IVb: return "Prop5.1-iv(b)";
  }
  return "?";
}

const char* to_string(AttractorKind k) noexcept {
  switch (k) {
    case AttractorKind::Equilibrium: return "equilibrium";
    case AttractorKind::DissipativeOnly: return "dissipative-only";
    case AttractorKind::Inconclusive: return "inconclusive";
  }
  return "?";
}

BlockDecomposition decompose(const SaturatedEquilibrium& eq) {
  BlockDecomposition out;
  std::vector<bool> in(eq.x.size(), false);
  for (int i : eq.support) {
    out.order.push_back(i);
    in[i] = true;
  }
  out.p = static_cast<int>(out.order.size());
  for (Eigen::Index i = 0; i < eq.x.size(); ++i)
    if (!in[i]) out.order.push_back(static_cast<int>(i));
  return out;
}

Eigen::MatrixXd extinction_block_matrix(const SystemSpec& spec, const SaturatedEquilibrium& eq,
                                        const BlockDecomposition& blocks, bool sharp,
                                        const Eigen::VectorXd& alpha) {
  const int n = static_cast<int>(spec.n);
  const int p = blocks.p;
  const Split s = split(blocks);
  Eigen::MatrixXd B(n, n);
  if (p > 0) B.topLeftCorner(p, p) = block11(spec, s.one, alpha);
  if (p < n) B.bottomRightCorner(n - p, n - p) = block22(spec, s.two);
  if (p > 0 && p < n) {
    B.topRightCorner(p, n - p) = -sub(spec.a, s.one, s.two).cwiseAbs();
    for (int r = 0; r < n - p; ++r) {
      const int i = s.two[r];
      bool use_minus = false;
      if (sharp) {
        double drive = spec.b(i);
        for (int j = 0; j < n; ++j) drive += std::max(-spec.a(i, j), 0.0) * eq.x(j);
        use_minus = drive <= 0.0;
      }
      for (int c = 0; c < p; ++c) {
        const double a = spec.a(i, s.one[c]);
        B(p + r, c) = -(use_minus ? std::max(-a, 0.0) : std::abs(a));
      }
    }
  }
  return B;
}

Verdict check_global_attractivity(const SystemSpec& spec) {
  require_n(spec);
  return global_attractivity(spec, make_context(spec));
}

Verdict check_total_extinction(const SystemSpec& spec) {
  require_n(spec);
  return total_extinction(spec, make_context(spec));
}

Verdict check_partial_extinction(const SystemSpec& spec) {
  require_n(spec);
  const Context ctx = make_context(spec);
  Verdict sharp = partial_extinction(spec, ctx, true);
  if (sharp.fired) return sharp;
  Verdict plain = partial_extinction(spec, ctx, false);
  if (!plain.fired && sharp.applicable)
    plain.certificates.insert(plain.certificates.end(), sharp.certificates.begin(), sharp.certificates.end());
  return plain;
}

Verdict check_predator_prey_extinction(const SystemSpec& spec) {
  require_n(spec);
  return predator_prey(spec, make_context(spec));
}

Verdict check_uncontrolled(const SystemSpec& spec) {
  require_n(spec);
  SystemSpec s = spec;
  s.controlled = false;
  return uncontrolled(s, make_context(s));
}

Verdict check_dissipativity(const SystemSpec& spec) {
  require_n(spec);
  return dissipativity(spec);
}

Verdict check_cooperative_positive(const SystemSpec& spec) {
  require_n(spec);
  return cooperative_positive(spec, build_matrices(spec));
}

PlanarAssessment assess_planar(const SystemSpec& spec) {
  PlanarAssessment out;
  if (spec.n != 2) return out;
  const Eigen::MatrixXd M = build_matrices(spec).M;
  const Eigen::VectorXd alpha = control_strength(spec);
  const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
  const bool p_matrix = det > 0.0 && M(0, 0) > 0.0 && M(1, 1) > 0.0;
  if (!p_matrix) return out;

  const auto& a = spec.a;
  const auto& mu = spec.mu;
  const double b1 = spec.b(0), b2 = spec.b(1);
  auto minus = [](double v) { return std::max(-v, 0.0); };
  auto add = [&](std::string name, bool holds) { out.conditions.push_back({std::move(name), holds}); };
  add("(5.2)", true);

  const bool interior = b1 * M(1, 1) > a(0, 1) * b2 && b2 * M(0, 0) > a(1, 0) * b1;
  // Mirror-symmetric test for a single-species boundary equilibrium E_k.
  auto boundary = [&](int k) {
    const int o = 1 - k;
    const double bk = spec.b(k), bo = spec.b(o);
    const double Mkk = M(k, k), aok = a(o, k), ako = a(k, o);
    const double s1 = mu(k) - std::abs(a(k, k)) - alpha(k);
    const double s2 = mu(o) - minus(a(o, o));
    if (bk > 0.0 && bo > 0.0 && bo * Mkk <= aok * bk) {
      out.planar_case = PlanarCase::III;
      add("(5.3) fails", true);
      add("(5.7)", s1 >= 0.0 && s2 >= 0.0 && s1 * s2 >= std::abs(ako) * aok);
      return true;
    }
    if (bo <= 0.0 && bk > 0.0) {
      if (aok >= 0.0) {
        out.planar_case = PlanarCase::IVa;
      } else if (ako > 0.0 && bo * Mkk <= aok * bk) {
        out.planar_case = PlanarCase::IVb;
      } else {
        return false;
      }
      add("(5.10)", s1 >= 0.0 && s2 >= 0.0);
      return true;
    }
    return false;
  };

  if (b1 <= 0.0 && b2 <= 0.0) {
    out.planar_case = PlanarCase::I;
    out.equilibrium = "E0";
    const double s1 = mu(0) - minus(a(0, 0)), s2 = mu(1) - minus(a(1, 1));
    add("b <= 0", true);
    add("extinction", s1 >= 0.0 && s2 >= 0.0 && s1 * s2 >= minus(a(0, 1)) * minus(a(1, 0)));
  } else if (interior) {
    out.planar_case = PlanarCase::II;
    out.equilibrium = "E*";
    add("(5.3)", true);
    const double s1 = mu(0) - std::abs(a(0, 0)) - alpha(0);
    const double s2 = mu(1) - std::abs(a(1, 1)) - alpha(1);
    add("(5.9)", s1 >= 0.0 && s2 >= 0.0 && s1 * s2 >= std::abs(a(0, 1) * a(1, 0)));
  } else if (boundary(0)) {
    out.equilibrium = "E1";
  } else if (boundary(1)) {
    out.equilibrium = "E2";
  } else {
    out.planar_case = PlanarCase::None;
  }
  out.attractive = out.planar_case != PlanarCase::None &&
                   std::all_of(out.conditions.begin(), out.conditions.end(),
                               [](const PlanarCondition& c) { return c.holds; });
  return out;
}

Analysis analyze(const SystemSpec& spec) {
  require_n(spec);
  Analysis out;
  out.matrices = build_matrices(spec);
  if (spec.n <= 12) {
    out.p_certificate = is_p_matrix(out.matrices.M);
  } else {
    throw Error(Errc::DimensionTooLarge, "analysis supports n <= 12");
  }

  if (out.p_certificate.verdict) {
    const Context ctx = make_context(spec);
    out.equilibrium = ctx.eq;
    if (spec.controlled) {
      const int p = ctx.blocks.p;
      out.evaluated.push_back(total_extinction(spec, ctx));
      out.evaluated.push_back(predator_prey(spec, ctx));
      out.evaluated.push_back(partial_extinction(spec, ctx, true));
      Verdict plain = partial_extinction(spec, ctx, false);
      if (p == 0 || p == static_cast<int>(spec.n)) {
        plain.applicable = false;
        plain.fired = false;
        plain.attractor.reset();
        plain.attractor_kind = AttractorKind::Inconclusive;
        plain.note = "block test reduces to the total extinction or global attractivity matrix";
      }
      out.evaluated.push_back(std::move(plain));
      out.evaluated.push_back(global_attractivity(spec, ctx));
    } else {
      out.evaluated.push_back(total_extinction(spec, ctx));
      out.evaluated.push_back(uncontrolled(spec, ctx));
    }
  } else {
    out.warnings.push_back(std::string(spec.controlled ? "M" : "M0") +
                           " is not a P-matrix; saturated-equilibrium criteria skipped");
  }
  out.evaluated.push_back(dissipativity(spec));
  out.evaluated.push_back(cooperative_positive(spec, out.matrices));

  for (const Verdict& v : out.evaluated) {
    if (v.fired && v.criterion != Criterion::Thm3_4) {
      out.verdict = v;
      break;
    }
  }
  if (!out.verdict.fired) {
    out.verdict = Verdict{};
    out.verdict.applicable = true;
    out.verdict.note = "no sufficient condition holds; inconclusive is not instability";
    for (const Verdict& v : out.evaluated)
      if (v.criterion != Criterion::Thm3_4)
        out.verdict.certificates.insert(out.verdict.certificates.end(), v.certificates.begin(),
                                        v.certificates.end());
  }
  if (spec.has_perturbations() && out.verdict.fired && !out.verdict.extends_to_perturbed)
    out.warnings.push_back("perturbation terms present but the firing criterion does not cover them");

  if (spec.n == 2) {
    out.planar_equilibria = planar_equilibria(spec);
    out.planar = assess_planar(spec);
    for (const PlanarEquilibrium* e : out.planar_equilibria->all())
      if (e->unstable_boundary)
        out.warnings.push_back(e->label + " is an unsaturated boundary equilibrium and is unstable");
  }
  return out;
}

}  // namespace lv
