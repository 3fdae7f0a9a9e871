#pragma once

#include "dchain/chain.hpp"
#include "dchain/distributions.hpp"
#include "dchain/sym_e.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dchain {

// Number of set compositions B_1|...|B_l of the parts of lambda (blocks may be
// empty) whose block sums are d_1, ..., d_l.
Integer beta_lambda_D(const IntPartition& lambda, const WeakComposition& d);
// sum_D P(D) / binom(n, D) * beta_lambda_D
Rational beta_lambda_P(const IntPartition& lambda, const PieceDistribution& p);

// b_1, b_2, ... with prod_i (1 - x^i)^(-b_i) = sum_n dims[n] x^n; b[0] is 0.
// Throws ContractError when some b_i would be negative or dims[0] != 1.
std::vector<Integer> generator_counts(const std::vector<Integer>& dims);
// prod_i binom(b_i + m_i - 1, m_i), m_i the number of parts equal to i.
Integer multiplicity(const IntPartition& lambda, const std::vector<Integer>& b);

struct SpectrumLine {
  Rational value;
  Integer multiplicity;
  std::vector<IntPartition> partitions;  // the lambda with this beta (general reports)
  std::vector<unsigned> js;              // the j with this beta (top/bottom-to-random reports)
};

struct SpectrumReport {
  std::vector<SpectrumLine> eigenvalues;  // distinct values, decreasing, zero multiplicities dropped
  std::vector<Integer> b;

  Integer total() const;
  Integer multiplicity_of(const Rational& value) const;
};

nlohmann::json spectrum_to_json(const SpectrumReport& r);
SpectrumReport spectrum_from_json(const nlohmann::json& j);

// Every eigenvalue beta_lambda^P with multiplicity prod binom(b_i + m_i - 1, m_i).
SpectrumReport descent_spectrum(const PieceDistribution& p, const std::vector<Integer>& dims);
// Words with n distinct letters: beta_lambda^P with multiplicity the number of
// permutations of cycle type lambda.
SpectrumReport distinct_deck_spectrum(const PieceDistribution& p);
// beta_j and the coefficient of x^(n-j) y^j in ((1-x)/(1-y))^dim1 * sum dims[m] x^m,
// aggregated over equal beta_j.
SpectrumReport t2r_spectrum(const OperatorSpec& op, unsigned n, const std::vector<Integer>& dims, const Integer& dim1);

struct SpectrumCheck {
  bool ok = true;
  std::string witness;
};
// Characteristic polynomial of the matrix against the report: each listed value is a
// root of exactly the listed multiplicity and the multiplicities exhaust the degree.
SpectrumCheck check_spectrum(const DenseMatrix& m, const SpectrumReport& r);
// dim ker (M - value I)
std::size_t geometric_multiplicity(const DenseMatrix& m, const Rational& value);

// Kernel of Delta_{1,m-1} (and of Delta_{m-1,1} when two_sided) on the span of basis.
std::vector<Element> coproduct_kernel(const HopfAlgebra& h, const std::vector<BasisElement>& basis, bool two_sided);

class KernelConditionError : public ContractError {
 public:
  KernelConditionError(const std::string& what, WeakComposition split);
  const WeakComposition& split() const { return split_; }

 private:
  WeakComposition split_;
};

// Weighted sum over i of sum_sigma c_sigma(1)...c_sigma(i) p c_sigma(i+1)...c_sigma(j), with the
// weights of the operator family. p must be killed by the required coproduct splits.
Element t2r_eigenvector(const HopfAlgebra& h, const OperatorSpec& op, unsigned n, unsigned j, const Element& p,
                        const std::vector<BasisElement>& cs);
// Eigenvalue the construction above carries.
Rational t2r_eigenvector_value(const OperatorSpec& op, unsigned n, unsigned j);

enum class Side { left, right };

struct EigenFunction {
  Side side = Side::right;
  Rational eigenvalue;
  std::vector<BasisElement> states;
  Vector values;
  std::string name;

  Rational at(const BasisElement& x) const;
};

// nullopt when the eigen-equation holds exactly, else a description of the first residual.
std::optional<std::string> eigen_residual(const TransitionMatrix& k, const EigenFunction& f);

class EigenEquationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Checked constructor; throws EigenEquationError on any nonzero residual.
EigenFunction make_eigenfunction(const TransitionMatrix& k, Side side, const Rational& eigenvalue, Vector values,
                                 std::string name = {});

// Left: g(x) = eta(x) * coefficient of x in v. Right: f(x) = v(x*) / eta(x), where v lives in
// the dual algebra and x* is matched by degree and payload.
EigenFunction extract_eigenfunction(const TransitionMatrix& k, const HopfAlgebra& h, const Element& v, Side side,
                                    const Rational& eigenvalue, std::string name = {});

// Degree-one basis elements occurring in the full coproducts of the states.
std::vector<BasisElement> degree_one_elements(const HopfAlgebra& h, const std::vector<BasisElement>& states);
// One probability left 1-eigenfunction per multiset of degree-one elements whose support fits the state list.
std::vector<EigenFunction> stationary_distributions(const ChainSpec& spec, const TransitionMatrix& k);

struct SymmetrisationBlock {
  std::vector<std::vector<unsigned>> orderings;  // orderings of {0..k-1}
  DenseMatrix matrix;                            // column = source ordering
  Rational beta;
  bool column_sums_equal = false;
  Vector kappa;  // nonnegative, nonzero, matrix * kappa = beta * kappa
};

// m Delta_P on formal products of free primitives of the given degrees.
SymmetrisationBlock symmetrisation_block(const PieceDistribution& p, const std::vector<unsigned>& degrees);

// beta^t f(x0)
Rational predict_expectation(const EigenFunction& f, const BasisElement& x0, unsigned t);

}  // namespace dchain
