#pragma once

#include "qfilab/linalg.hpp"

#include "json.hpp"

#include <map>
#include <string>
#include <vector>

namespace qfl {

// Completely positive, trace-non-increasing map given by Kraus operators
// (each out_dim x in_dim). The Kraus list is kept exactly as supplied.
class KrausChannel {
 public:
  KrausChannel() = default;
  KrausChannel(int in_dim, int out_dim, std::vector<Mat> kraus);

  int in_dim() const { return in_; }
  int out_dim() const { return out_; }
  int env_dim() const { return static_cast<int>(kraus_.size()); }
  const std::vector<Mat>& kraus() const { return kraus_; }
  bool trace_preserving() const { return tp_; }
  // Rank of the span of the Kraus operators; < env_dim() flags redundancy.
  int kraus_rank() const;

  Mat apply(const Mat& X) const;
  // sum_k E_k^dag E_k
  Mat adjoint_identity() const;

 private:
  int in_ = 0, out_ = 0;
  std::vector<Mat> kraus_;
  bool tp_ = false;
};

Mat apply(const KrausChannel& ch, const Mat& X);

// N^(X) = sum_{k,k'} tr(E_k'^dag E_k X) |k><k'|, as a Kraus channel on the
// Kraus-index environment: (F_j)_{k,a} = (E_k)_{j,a}.
KrausChannel complementary(const KrausChannel& ch);

// Heisenberg-picture map W -> sum_k E_k^dag W E_k. Not necessarily trace
// non-increasing, so it is returned as a plain operator list.
struct AdjointMap {
  std::vector<Mat> kraus;  // E_k^dag
  Mat apply(const Mat& W) const;
};
AdjointMap adjoint(const KrausChannel& ch);

// Kraus operators of ch^{tensor n}; string[i][s] is the Kraus index on site s
// (site 0 most significant) and weight[i] counts non-zero indices.
struct TensorPower {
  KrausChannel channel;
  std::vector<std::vector<int>> strings;
  std::vector<int> weight;
};
TensorPower tensor_power(const KrausChannel& ch, int n, long cap = 4096);

KrausChannel standard_channel(const std::string& name, const std::map<std::string, double>& params = {});
KrausChannel identity_channel(int d);
KrausChannel partial_dephasing_z(double p);
KrausChannel complete_dephasing_x();
KrausChannel amplitude_damping(double p);
KrausChannel bit_flip(double p);
KrausChannel depolarizing(double p);
// Erasure of qubit `site` of n qubits with probability p. The erased site is
// replaced by a flag level |2>, so the output is 2^(n-1) * 3 dimensional.
KrausChannel located_erasure(int site, double p, int n);
// Single-site channel acting on `site` of n sites with local dimension d.
KrausChannel embed_local(const KrausChannel& single, int site, int n);
KrausChannel compose(const KrausChannel& second, const KrausChannel& first);
// single^{tensor n} applied site by site, without materializing the Kraus set.
Mat apply_product(const KrausChannel& single, int n, const Mat& X);

// V = sum_k E_k (x) |k>_E with row index b * K + k.
struct Stinespring {
  Mat V;
  int out_dim = 0, env_dim = 0;
};
Stinespring stinespring(const KrausChannel& ch);

nlohmann::json channel_to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const nlohmann::json& j);

// Random channel with K Kraus operators, in_dim -> out_dim. `contraction` < 1
// scales the Kraus set so that sum E^dag E <= contraction * I.
KrausChannel random_channel(int in_dim, int out_dim, int K, std::uint64_t seed, double contraction = 1.0);

}  // namespace qfl
