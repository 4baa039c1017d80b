#include "frost/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace frost {

namespace {

// Compacts the nonnegative values of both vectors (restricted to positions
// labeled on both sides) to dense 0-based ids.
std::vector<int> compact(std::span<const int> v, std::span<const int> other, int& r_out) {
  std::vector<int> vals;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] >= 0 && other[i] >= 0) vals.push_back(v[i]);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  std::unordered_map<int, int> map;
  for (std::size_t k = 0; k < vals.size(); ++k) map[vals[k]] = static_cast<int>(k);
  std::vector<int> out(v.size(), -1);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] >= 0 && other[i] >= 0) out[i] = map[v[i]];
  r_out = static_cast<int>(vals.size());
  return out;
}

double marginal_entropy(const std::vector<std::int64_t>& sums, std::int64_t total) {
  double h = 0.0;
  for (std::int64_t s : sums) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

Contingency Contingency::from(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("contingency: label vectors differ in length");
  Contingency c;
  std::vector<int> ca = compact(a, b, c.ra);
  std::vector<int> cb = compact(b, a, c.rb);
  c.counts.assign(static_cast<std::size_t>(c.ra) * c.rb, 0);
  c.row_sum.assign(c.ra, 0);
  c.col_sum.assign(c.rb, 0);
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (ca[i] < 0 || cb[i] < 0) continue;
    c.counts[static_cast<std::size_t>(ca[i]) * c.rb + cb[i]]++;
    c.row_sum[ca[i]]++;
    c.col_sum[cb[i]]++;
    c.total++;
  }
  return c;
}

double Contingency::entropy_a() const { return marginal_entropy(row_sum, total); }
double Contingency::entropy_b() const { return marginal_entropy(col_sum, total); }

double Contingency::mutual_information() const {
  double mi = 0.0;
  const double n = static_cast<double>(total);
  for (int u = 0; u < ra; ++u) {
    for (int v = 0; v < rb; ++v) {
      const std::int64_t cuv = at(u, v);
      if (cuv == 0) continue;
      const double p = static_cast<double>(cuv) / n;
      mi += p * std::log(n * static_cast<double>(cuv) /
                         (static_cast<double>(row_sum[u]) * static_cast<double>(col_sum[v])));
    }
  }
  return mi;
}

bool Contingency::is_relabeling() const {
  for (int u = 0; u < ra; ++u) {
    int nonzero = 0;
    for (int v = 0; v < rb; ++v) nonzero += at(u, v) > 0;
    if (nonzero > 1) return false;
  }
  for (int v = 0; v < rb; ++v) {
    int nonzero = 0;
    for (int u = 0; u < ra; ++u) nonzero += at(u, v) > 0;
    if (nonzero > 1) return false;
  }
  return true;
}

double nmi(std::span<const int> a, std::span<const int> b) {
  const Contingency c = Contingency::from(a, b);
  if (c.total == 0) throw std::invalid_argument("nmi: no node labeled on both sides");
  const double ha = c.entropy_a();
  const double hb = c.entropy_b();
  if (ha <= 0.0 && hb <= 0.0) return 1.0;  // both single-cluster
  if (ha <= 0.0 || hb <= 0.0) return 0.0;
  return c.mutual_information() / std::max(ha, hb);
}

double expected_mi(const Contingency& c) {
  // Vinh et al.'s closed form: for each cell, its count under random
  // permutations is hypergeometric; sum the MI contribution weighted by the
  // hypergeometric mass (factorials via lgamma).
  const std::int64_t n = c.total;
  const double log_n = std::log(static_cast<double>(n));
  double emi = 0.0;
  for (int u = 0; u < c.ra; ++u) {
    const std::int64_t au = c.row_sum[u];
    if (au == 0) continue;
    for (int v = 0; v < c.rb; ++v) {
      const std::int64_t bv = c.col_sum[v];
      if (bv == 0) continue;
      const std::int64_t lo = std::max<std::int64_t>(1, au + bv - n);
      const std::int64_t hi = std::min(au, bv);
      for (std::int64_t nij = lo; nij <= hi; ++nij) {
        const double term = static_cast<double>(nij) / static_cast<double>(n) *
                            (log_n + std::log(static_cast<double>(nij)) -
                             std::log(static_cast<double>(au)) -
                             std::log(static_cast<double>(bv)));
        const double log_mass =
            std::lgamma(static_cast<double>(au + 1)) + std::lgamma(static_cast<double>(bv + 1)) +
            std::lgamma(static_cast<double>(n - au + 1)) +
            std::lgamma(static_cast<double>(n - bv + 1)) - std::lgamma(static_cast<double>(n + 1)) -
            std::lgamma(static_cast<double>(nij + 1)) -
            std::lgamma(static_cast<double>(au - nij + 1)) -
            std::lgamma(static_cast<double>(bv - nij + 1)) -
            std::lgamma(static_cast<double>(n - au - bv + nij + 1));
        emi += term * std::exp(log_mass);
      }
    }
  }
  return emi;
}

double ami_max(std::span<const int> a, std::span<const int> b) {
  const Contingency c = Contingency::from(a, b);
  if (c.total == 0) throw std::invalid_argument("ami_max: no node labeled on both sides");
  const double mi = c.mutual_information();
  const double emi = expected_mi(c);
  const double denom = std::max(c.entropy_a(), c.entropy_b()) - emi;
  if (std::abs(denom) < 1e-12) return std::abs(mi - emi) < 1e-12 && c.is_relabeling() ? 1.0 : 0.0;
  return (mi - emi) / denom;
}

}  // namespace frost
