#include "steinlab/alphabet.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace steinlab {

namespace {

// Renormalizes in place; rejects negative mass or drift beyond kTolProperty.
void validate_weights(std::vector<double>& w, const char* what) {
  double sum = 0.0;
  for (double& x : w) {
    if (x < -kTolConstruct) throw DomainError(std::string(what) + ": negative weight");
    if (x < 0.0) x = 0.0;
    sum += x;
  }
  if (std::abs(sum - 1.0) > kTolProperty)
    throw DomainError(std::string(what) + ": weights sum to " + std::to_string(sum));
  for (double& x : w) x /= sum;
}

}  // namespace

Alphabet::Alphabet(std::vector<std::string> syms) : symbols(std::move(syms)) {
  if (symbols.empty()) throw DomainError("alphabet: empty symbol list");
  std::set<std::string> seen(symbols.begin(), symbols.end());
  if (seen.size() != symbols.size()) throw DomainError("alphabet: duplicate symbols");
}

Alphabet Alphabet::of_size(int k) {
  if (k < 1) throw DomainError("alphabet: size must be positive");
  std::vector<std::string> syms;
  syms.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) syms.push_back(std::to_string(i));
  return Alphabet(std::move(syms));
}

Distribution::Distribution(Alphabet a, std::vector<double> weights)
    : alphabet(std::move(a)), w(std::move(weights)) {
  if (w.size() != static_cast<std::size_t>(alphabet.size()))
    throw DomainError("distribution: weight count mismatches alphabet");
  validate_weights(w, "distribution");
}

std::size_t joint_dim_checked(int alphabet_size, int n) {
  if (n < 1) throw DomainError("joint: n must be positive");
  std::size_t dim = 1;
  for (int i = 0; i < n; ++i) {
    dim *= static_cast<std::size_t>(alphabet_size);
    if (dim > (1u << 24)) throw CapacityError("joint: |X|^n exceeds 2^24 entries");
  }
  return dim;
}

JointDistribution::JointDistribution(Alphabet a, int n_, std::vector<double> weights)
    : alphabet(std::move(a)), n(n_), w(std::move(weights)) {
  std::size_t dim = joint_dim_checked(alphabet.size(), n);
  if (w.size() != dim) throw DomainError("joint: weight count mismatches |X|^n");
  validate_weights(w, "joint");
}

std::size_t encode_string(const std::vector<int>& digits, int radix) {
  std::size_t idx = 0;
  for (int d : digits) {
    if (d < 0 || d >= radix) throw DomainError("encode: digit out of range");
    idx = idx * static_cast<std::size_t>(radix) + static_cast<std::size_t>(d);
  }
  return idx;
}

std::vector<int> decode_string(std::size_t index, int radix, int n) {
  std::vector<int> digits(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    digits[static_cast<std::size_t>(i)] = static_cast<int>(index % radix);
    index /= static_cast<std::size_t>(radix);
  }
  return digits;
}

StochasticChannel::StochasticChannel(Alphabet in, Alphabet out, std::vector<double> matrix)
    : input_alphabet(std::move(in)), output_alphabet(std::move(out)), m(std::move(matrix)) {
  std::size_t nx = static_cast<std::size_t>(input_alphabet.size());
  std::size_t ny = static_cast<std::size_t>(output_alphabet.size());
  if (m.size() != nx * ny) throw DomainError("channel: matrix shape mismatch");
  for (std::size_t x = 0; x < nx; ++x) {
    double col = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      double v = m[y * nx + x];
      if (v < -kTolConstruct) throw DomainError("channel: negative entry");
      col += v;
    }
    if (std::abs(col - 1.0) > kTolProperty)
      throw DomainError("channel: column does not sum to 1");
  }
}

StochasticChannel StochasticChannel::identity(const Alphabet& a) {
  int k = a.size();
  std::vector<double> m(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) m[static_cast<std::size_t>(i) * k + i] = 1.0;
  return StochasticChannel(a, a, std::move(m));
}

JointDistribution tensor_product(const std::vector<Distribution>& factors) {
  if (factors.empty()) throw DomainError("tensor_product: empty factor list");
  const Alphabet& a = factors.front().alphabet;
  for (const Distribution& f : factors)
    if (!(f.alphabet == a)) throw DomainError("tensor_product: alphabet mismatch");
  int n = static_cast<int>(factors.size());
  std::size_t dim = joint_dim_checked(a.size(), n);
  std::vector<double> w(dim, 1.0);
  std::size_t block = dim;
  for (int i = 0; i < n; ++i) {
    block /= static_cast<std::size_t>(a.size());
    for (std::size_t idx = 0; idx < dim; ++idx) {
      int digit = static_cast<int>((idx / block) % static_cast<std::size_t>(a.size()));
      w[idx] *= factors[static_cast<std::size_t>(i)](digit);
    }
  }
  return JointDistribution(a, n, std::move(w));
}

JointDistribution iid_power(const Distribution& p, int n) {
  return tensor_product(std::vector<Distribution>(static_cast<std::size_t>(n), p));
}

JointDistribution as_joint(const Distribution& p) {
  return JointDistribution(p.alphabet, 1, p.w);
}

Distribution as_single(const JointDistribution& j) {
  if (j.n != 1) throw DomainError("as_single: joint has n != 1");
  return Distribution(j.alphabet, j.w);
}

JointDistribution marginalize(const JointDistribution& joint, const std::vector<int>& keep) {
  if (keep.empty()) throw DomainError("marginalize: empty keep set");
  std::vector<int> k = keep;
  std::sort(k.begin(), k.end());
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < 1 || k[i] > joint.n) throw DomainError("marginalize: position out of range");
    if (i > 0 && k[i] == k[i - 1]) throw DomainError("marginalize: duplicate position");
  }
  int radix = joint.alphabet.size();
  int m = static_cast<int>(k.size());
  std::size_t out_dim = joint_dim_checked(radix, m);
  std::vector<double> out(out_dim, 0.0);
  for (std::size_t idx = 0; idx < joint.dim(); ++idx) {
    std::vector<int> digits = decode_string(idx, radix, joint.n);
    std::vector<int> kept(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
      kept[static_cast<std::size_t>(i)] = digits[static_cast<std::size_t>(k[static_cast<std::size_t>(i)] - 1)];
    out[encode_string(kept, radix)] += joint.w[idx];
  }
  return JointDistribution(joint.alphabet, m, std::move(out));
}

JointDistribution permute(const JointDistribution& joint, const std::vector<int>& pi) {
  if (static_cast<int>(pi.size()) != joint.n) throw DomainError("permute: wrong length");
  std::vector<bool> seen(pi.size(), false);
  for (int v : pi) {
    if (v < 1 || v > joint.n || seen[static_cast<std::size_t>(v - 1)])
      throw DomainError("permute: not a bijection");
    seen[static_cast<std::size_t>(v - 1)] = true;
  }
  int radix = joint.alphabet.size();
  std::vector<double> out(joint.dim());
  for (std::size_t idx = 0; idx < joint.dim(); ++idx) {
    std::vector<int> digits = decode_string(idx, radix, joint.n);
    std::vector<int> src(digits.size());
    for (int i = 0; i < joint.n; ++i)
      src[static_cast<std::size_t>(i)] =
          digits[static_cast<std::size_t>(pi[static_cast<std::size_t>(i)] - 1)];
    out[idx] = joint.w[encode_string(src, radix)];
  }
  return JointDistribution(joint.alphabet, joint.n, std::move(out));
}

StochasticChannel depolarizing_channel(double delta, const Distribution& R) {
  if (delta < 0.0 || delta > 1.0) throw DomainError("depolarizing: delta outside [0,1]");
  int k = R.dim();
  std::vector<double> m(static_cast<std::size_t>(k) * k);
  for (int y = 0; y < k; ++y)
    for (int x = 0; x < k; ++x)
      m[static_cast<std::size_t>(y) * k + x] = (y == x ? 1.0 - delta : 0.0) + delta * R(y);
  return StochasticChannel(R.alphabet, R.alphabet, std::move(m));
}

Distribution apply_channel(const StochasticChannel& W, const Distribution& p) {
  if (!(W.input_alphabet == p.alphabet)) throw DomainError("apply_channel: alphabet mismatch");
  int nx = W.input_alphabet.size();
  int ny = W.output_alphabet.size();
  std::vector<double> out(static_cast<std::size_t>(ny), 0.0);
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x) out[static_cast<std::size_t>(y)] += W.w(y, x) * p(x);
  return Distribution(W.output_alphabet, std::move(out));
}

JointDistribution apply_channel_per_symbol(const JointDistribution& joint,
                                           const StochasticChannel& W) {
  if (!(W.input_alphabet == joint.alphabet))
    throw DomainError("apply_channel_per_symbol: alphabet mismatch");
  std::size_t nx = static_cast<std::size_t>(W.input_alphabet.size());
  std::size_t ny = static_cast<std::size_t>(W.output_alphabet.size());
  joint_dim_checked(W.output_alphabet.size(), joint.n);
  // Axes processed left to right; processed axes have size ny, the rest nx.
  std::vector<double> cur = joint.w;
  for (int axis = 0; axis < joint.n; ++axis) {
    std::size_t lead = 1;
    for (int i = 0; i < axis; ++i) lead *= ny;
    std::size_t trail = 1;
    for (int i = axis + 1; i < joint.n; ++i) trail *= nx;
    std::vector<double> next(lead * ny * trail, 0.0);
    for (std::size_t l = 0; l < lead; ++l)
      for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t x = 0; x < nx; ++x) {
          double wyx = W.m[y * nx + x];
          if (wyx == 0.0) continue;
          const double* src = cur.data() + (l * nx + x) * trail;
          double* dst = next.data() + (l * ny + y) * trail;
          for (std::size_t t = 0; t < trail; ++t) dst[t] += wyx * src[t];
        }
    cur = std::move(next);
  }
  return JointDistribution(W.output_alphabet, joint.n, std::move(cur));
}

namespace {
double tv_raw(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}
}  // namespace

double tv_distance(const Distribution& p, const Distribution& q) {
  if (!(p.alphabet == q.alphabet)) throw DomainError("tv: alphabet mismatch");
  return tv_raw(p.w, q.w);
}

double tv_distance(const JointDistribution& p, const JointDistribution& q) {
  if (!(p.alphabet == q.alphabet) || p.n != q.n) throw DomainError("tv: level mismatch");
  return tv_raw(p.w, q.w);
}

double entropy_nats(const std::vector<double>& w) {
  double h = 0.0;
  for (double x : w) h += neg_xlogx_nats(x);
  return h;
}

double entropy(const Distribution& p) { return units_from_nats(entropy_nats(p.w)); }
double entropy(const JointDistribution& p) { return units_from_nats(entropy_nats(p.w)); }

}  // namespace steinlab
