#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "porth/algebra.hpp"
#include "porth/freegroup.hpp"
#include "porth/orthogonality.hpp"

namespace porth {

// Independent generator for (seed, stream), so every family value can be
// drawn without depending on how many draws came before it.
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream);
// Independent standard-normal real and imaginary parts.
Matrix gaussian_matrix(std::mt19937_64& rng, Index rows, Index cols);
// Q factor of a Gaussian matrix with the phases of R's diagonal removed.
Matrix random_unitary(std::mt19937_64& rng, Index dim);
double unitarity_defect(const Matrix& u);

struct Quantities {
  int p = 0;
  int n = 0;
  int d = 0;
  double A = 0.0;  // ||sum f||_p
  double B = 0.0;  // ||S_d(f)||_p
  double C = 0.0;  // max over all splits of the flattening norm
  double D = 0.0;  // with k_d = 1
  bool c_le_b = true;           // C <= B + tol
  bool b_le_2d_c = true;        // B <= 2^d C + tol
  double tol = 0.0;             // 1e-9 * scale
  std::vector<double> split_norms;  // SplitPair::all order
};

// k_d [sup_{0 <= r <= p-2} (p-r)!^{(d-1)/(p-r)}] p^{d(d-1)/2} C.
double d_constant(int p, int d, double C, double k_d = 1.0);

Quantities compute_quantities(const OperatorFamily& f, int p, std::uint64_t budget = kDefaultBudget);

struct MainInequalityReport {
  Quantities q;
  double ratio = 0.0;         // A / (p^{d(d+1)/2} C)
  double pisier_ratio = 0.0;  // A / ((3 pi / 2) p C), d = 1 only
  std::optional<bool> pisier_ok;
  bool a_le_2pd = true;       // report only: depends on k_d = 1
  MomentReport orthogonality;
  double scale = 1.0;
};

// Throws PreconditionError with the worst index function if f fails
// is_p_orthogonal at 1e-9 * scale.
MainInequalityReport main_inequality_report(const OperatorFamily& f, int p,
                                            std::uint64_t budget = kDefaultBudget);

struct KhintchineCheck {
  double S_norm = 0.0;
  double C = 0.0;
  double tol = 0.0;
  bool lower_ok = true;  // C <= S_norm + tol
  bool upper_ok = true;  // S_norm <= 2^d C + tol
};

KhintchineCheck khintchine_iteration_check(std::span<const TracialMatrix> a, int n, int d, int p,
                                           std::uint64_t budget = kDefaultBudget);

// Finitely supported a : F_n -> M_N.
using WordFunction = std::vector<std::pair<Word, Matrix>>;

struct AbsorptionCheck {
  double lhs = 0.0;  // ||sum a(t) (x) pi(t) (x) lambda(t)||_p
  double rhs = 0.0;  // ||sum a(t) (x) lambda(t)||_p
  double abs_err = 0.0;
  double scale = 1.0;
};

// pi(g_i) = unitaries[i - 1]; throws ArgumentError if any of them is off
// unitary by more than 1e-12 or a word uses a generator without one.
AbsorptionCheck absorption_check(const WordFunction& a, const std::vector<Matrix>& unitaries, int p,
                                 std::uint64_t budget = kDefaultBudget);

struct SublemmaCheck {
  double root = 0.0;
  double bound = 0.0;  // 2 p D
  bool bound_ok = true;
};

// Largest positive root of A^p = sum_{r<p} C(p,r) (p-r)! A^r D^{p-r}.
SublemmaCheck sublemma_root_check(int p, double D);

struct PhiRCheck {
  std::int64_t phi_r = 0;
  std::int64_t bound = 0;  // C(p,r) (p-r)!^d
  bool ok = true;
  std::uint64_t tuples = 0;  // tuples with every sigma_k > 0̇ and r common singletons
};

PhiRCheck phi_r_bound_check(int p, int d, int r, std::uint64_t budget = kDefaultBudget);

enum class CoefficientSource { kOnes, kRandom };

struct FamilySpec {
  std::string kind;  // free_generators, dissociate, rademacher, random_matrix, martingale_rademacher, file
  int n = 2;
  int d = 1;
  int p = 4;
  Index dim = 1;
  std::uint64_t seed = 1;
  CoefficientSource coefficients = CoefficientSource::kRandom;
  std::string path;   // family JSON for kind = file
  std::string words;  // word family JSON for kind = dissociate; canonical words if empty
};

// Largest diagonal dimension accepted for the Rademacher kinds.
inline constexpr Index kMaxRademacherDim = 1024;

OperatorFamily make_family(const FamilySpec& spec, std::uint64_t budget = kDefaultBudget);

struct DissociateEquivalence {
  double lhs = 0.0;             // A for a_gamma (x) lambda(t_gamma) over canonical words
  double rhs = 0.0;             // max over the d + 1 contiguous splits
  double rhs_all_splits = 0.0;  // max over all 2^d splits
};

DissociateEquivalence dissociate_equivalence_report(std::span<const TracialMatrix> a, int n, int d, int p,
                                                    std::uint64_t budget = kDefaultBudget);

// ||(sum_gamma f_gamma f_gamma^*)^{1/2}||_p for matrix families.
double square_function_norm(const OperatorFamily& f, int p);

}  // namespace porth
