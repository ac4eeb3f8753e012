#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "steinlab/config.hpp"

namespace steinlab {

// Ordered finite alphabet; the symbol order fixes all vector indexing.
struct Alphabet {
  std::vector<std::string> symbols;

  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> syms);
  static Alphabet binary() { return Alphabet({"0", "1"}); }
  static Alphabet ternary() { return Alphabet({"0", "1", "2"}); }
  static Alphabet of_size(int k);

  int size() const { return static_cast<int>(symbols.size()); }
  bool operator==(const Alphabet& o) const { return symbols == o.symbols; }
};

// Probability vector over one symbol. Weights are nonnegative and sum to 1;
// construction renormalizes drift below kTolProperty and rejects anything worse.
struct Distribution {
  Alphabet alphabet;
  std::vector<double> w;

  Distribution() = default;
  Distribution(Alphabet a, std::vector<double> weights);
  int dim() const { return alphabet.size(); }
  double operator()(int x) const { return w[static_cast<std::size_t>(x)]; }
};

// Dense probability vector over X^n, indexed lexicographically: position 1 is
// the most significant digit. Construction refuses |X|^n > 2^24 entries.
struct JointDistribution {
  Alphabet alphabet;
  int n = 0;
  std::vector<double> w;

  JointDistribution() = default;
  JointDistribution(Alphabet a, int n_, std::vector<double> weights);
  std::size_t dim() const { return w.size(); }
  double operator()(std::size_t idx) const { return w[idx]; }
};

// Number of entries of a level-n joint over alphabet of size k; throws CapacityError
// above 2^24.
std::size_t joint_dim_checked(int alphabet_size, int n);

std::size_t encode_string(const std::vector<int>& digits, int radix);
std::vector<int> decode_string(std::size_t index, int radix, int n);

// Conditional probability matrix W(y|x); each column (fixed input x) sums to 1.
struct StochasticChannel {
  Alphabet input_alphabet;
  Alphabet output_alphabet;
  std::vector<double> m;  // row-major: m[y * |X| + x] = W(y|x)

  StochasticChannel() = default;
  StochasticChannel(Alphabet in, Alphabet out, std::vector<double> matrix);
  double w(int y, int x) const {
    return m[static_cast<std::size_t>(y) * input_alphabet.size() + x];
  }
  static StochasticChannel identity(const Alphabet& a);
};

JointDistribution tensor_product(const std::vector<Distribution>& factors);
JointDistribution iid_power(const Distribution& p, int n);
JointDistribution as_joint(const Distribution& p);
Distribution as_single(const JointDistribution& j);  // requires n == 1

// Exact marginal over the kept positions (1-based, ascending), order preserved.
JointDistribution marginalize(const JointDistribution& joint, const std::vector<int>& keep);

// out(x_1..x_n) = in(x_{pi(1)}..x_{pi(n)}); pi is a bijection of {1..n} (1-based).
JointDistribution permute(const JointDistribution& joint, const std::vector<int>& pi);

// W(y|x) = (1-delta)*[y==x] + delta*R(y).
StochasticChannel depolarizing_channel(double delta, const Distribution& R);

Distribution apply_channel(const StochasticChannel& W, const Distribution& p);
// W^{tensor n} via axis-wise contraction; never materializes the big matrix.
JointDistribution apply_channel_per_symbol(const JointDistribution& joint,
                                           const StochasticChannel& W);

double tv_distance(const Distribution& p, const Distribution& q);
double tv_distance(const JointDistribution& p, const JointDistribution& q);

// Shannon entropy in configured log units; 0 log 0 = 0.
double entropy(const Distribution& p);
double entropy(const JointDistribution& p);
double entropy_nats(const std::vector<double>& w);

}  // namespace steinlab
