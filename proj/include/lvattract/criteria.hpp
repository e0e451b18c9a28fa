#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lvattract/equilibria.hpp"
#include "lvattract/matrix_class.hpp"
#include "lvattract/model.hpp"

namespace lv {

enum class Criterion {
  None,
  Thm3_2,  // global attractivity, M_hat an M-matrix
  Thm3_3,  // dissipativity, M0^- a nonsingular M-matrix
  Thm3_4,  // cooperative system, positive equilibrium exists
  Thm4_1,  // total extinction
  Thm4_2,  // partial extinction, block matrix with |A21|
  Thm4_3,  // partial extinction, sharpened lower-left block
  Thm4_4,  // predator extinction
  Cor4_2,  // uncontrolled system
};

const char* to_string(Criterion c) noexcept;

enum class PlanarCase { NotApplicable, None, I, II, III, IVa, IVb };

const char* to_string(PlanarCase c) noexcept;

enum class AttractorKind { Equilibrium, DissipativeOnly, Inconclusive };

const char* to_string(AttractorKind k) noexcept;

/// Species reordering with the support first: order[k] is the original index
/// of reordered species k; the first p entries carry x_i* > 0.
struct BlockDecomposition {
  int p = 0;
  std::vector<int> order;
};

struct Verdict {
  Criterion criterion = Criterion::None;
  bool fired = false;
  bool applicable = true;  // preconditions (sign patterns, support size) met
  AttractorKind attractor_kind = AttractorKind::Inconclusive;
  std::optional<SaturatedEquilibrium> attractor;
  std::optional<SaturatedEquilibrium> bound;  // Thm3.3 ultimate bound
  bool gas = false;                           // Thm3.2 with x* > 0
  bool extends_to_perturbed = false;          // verdict covers the h_i(t) -> 0 system
  std::vector<ClassCertificate> certificates;
  std::optional<BlockDecomposition> blocks;
  std::string note;
};

struct PlanarCondition {
  std::string name;
  bool holds = false;
};

struct PlanarAssessment {
  PlanarCase planar_case = PlanarCase::NotApplicable;
  std::string equilibrium;  // E0, E1, E2, E*
  bool attractive = false;  // the case's sufficient conditions hold
  std::vector<PlanarCondition> conditions;
};

struct Analysis {
  Verdict verdict;                 // first firing criterion, or None
  std::vector<Verdict> evaluated;  // every criterion in dispatch order
  CommunityMatrices matrices;
  ClassCertificate p_certificate;  // M is a P-matrix
  std::optional<SaturatedEquilibrium> equilibrium;
  std::optional<PlanarEquilibria> planar_equilibria;
  std::optional<PlanarAssessment> planar;
  std::vector<std::string> warnings;
};

/// Support-first reordering of x*, stable within each block.
BlockDecomposition decompose(const SaturatedEquilibrium& eq);

/// Builds the block matrix with diagonal blocks diag(mu_i - alpha_i) - |A11|
/// and diag(mu) - A22^-, upper-right -|A12| and lower-left -|A21| or, with
/// `sharp`, the entries chosen by the sign of b_i + sum_j a_ij^- x_j*.
/// `alpha` is c_i d_i / e_i (zero for the uncontrolled system). Rows and
/// columns follow `blocks.order`.
Eigen::MatrixXd extinction_block_matrix(const SystemSpec& spec, const SaturatedEquilibrium& eq,
                                        const BlockDecomposition& blocks, bool sharp,
                                        const Eigen::VectorXd& alpha);

// Individual criteria. All throw NotPMatrix unless M is a P-matrix, except
// check_uncontrolled, which needs M0 to be a P-matrix.
Verdict check_global_attractivity(const SystemSpec& spec);
Verdict check_total_extinction(const SystemSpec& spec);
Verdict check_partial_extinction(const SystemSpec& spec);
Verdict check_predator_prey_extinction(const SystemSpec& spec);
Verdict check_uncontrolled(const SystemSpec& spec);
Verdict check_dissipativity(const SystemSpec& spec);
Verdict check_cooperative_positive(const SystemSpec& spec);

PlanarAssessment assess_planar(const SystemSpec& spec);

/// Runs every criterion and reports the sharpest one that fires. Controlled
/// order: 4.1, 4.4, 4.3, 4.2, 3.2, 3.3; uncontrolled: 4.1, Cor 4.2, 3.3.
Analysis analyze(const SystemSpec& spec);

}  // namespace lv
