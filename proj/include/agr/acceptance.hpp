#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace agr {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;  // one line
  double seconds = 0;
};

/// Each criterion is independent and deterministic for a fixed seed.
CriterionResult criterion_witt_soundness();
CriterionResult criterion_schubert_dimension();
CriterionResult criterion_demazure_counts();
CriterionResult criterion_mv_theorem();
CriterionResult criterion_satake_lk();
CriterionResult criterion_semismall();
CriterionResult criterion_minus_q();
CriterionResult criterion_rapoport();
CriterionResult criterion_norm_reduction();
CriterionResult criterion_gl2_example(std::uint64_t seed);
CriterionResult criterion_commutativity_sign();

/// All eleven in order, timed.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// W_h(F_p) -> Z/p^h by Σ p^i T(x_i), T the integer Teichmüller lift; checked to
/// be a bijective ring map on all pairs.
bool witt_matches_integers(std::uint32_t p, unsigned h);

/// q^{(2ρ,μ)} W(q^{-1}) / W_μ(q^{-1}), the cardinality of Gr_μ(F_q).
std::int64_t macdonald_cell_count(const std::vector<int>& mu, std::int64_t q);

}  // namespace agr
