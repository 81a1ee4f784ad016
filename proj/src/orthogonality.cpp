#include "porth/orthogonality.hpp"

#include <cmath>
#include <sstream>

namespace porth {

namespace {

void check_index_function(const OperatorFamily& f, const IndexFunction& h) {
  require_even_p(h.p(), "index function");
  (void)h.linear(f.index());
}

void check_tuple(const PartitionTuple& eta, int d, int p, const char* what) {
  if (static_cast<int>(eta.size()) != d) {
    throw ArgumentError(std::string(what) + ": expected " + std::to_string(d) + " partitions");
  }
  if (eta.ground_size() != p) {
    throw ArgumentError(std::string(what) + ": partitions must be of [" + std::to_string(p) + "]");
  }
}

SetPartition kernel_of(const IndexSpace& space, std::span<const std::size_t> h, int k,
                       std::vector<int>& scratch) {
  scratch.resize(h.size());
  for (std::size_t s = 0; s < h.size(); ++s) scratch[s] = space.coordinate(h[s], k);
  return kernel_partition(scratch);
}

// Odometer over [size]^p with prefix products. `step(s, idx)` extends the
// prefix at position s by factor idx; `finish(h)` is called once per h with
// every prefix up to position p - 1 current.
template <class Step, class Finish>
void odometer(std::size_t size, int p, Step&& step, Finish&& finish) {
  std::vector<std::size_t> h(static_cast<std::size_t>(p), 0);
  int dirty = 0;
  while (true) {
    for (int s = dirty; s < p - 1; ++s) step(s, h[static_cast<std::size_t>(s)]);
    finish(std::span<const std::size_t>(h));
    int s = p - 1;
    while (s >= 0 && ++h[static_cast<std::size_t>(s)] == size) h[static_cast<std::size_t>(s--)] = 0;
    if (s < 0) break;
    dirty = s;
  }
}

void for_each_matrix_moment(const OperatorFamily& f, int p, const MomentVisitor& visit,
                            AdjointPattern pattern) {
  const auto& values = f.matrices();
  std::vector<Matrix> plain, adjoint;
  for (const auto& v : values) {
    plain.push_back(v.matrix());
    adjoint.push_back(v.matrix().adjoint());
  }
  const auto factor = [&](std::size_t s, std::size_t idx) -> const Matrix& {
    return adjoint_at(pattern, s) ? adjoint[idx] : plain[idx];
  };
  const Index dim = f.coeff_dim();
  std::vector<Matrix> prefix(static_cast<std::size_t>(p), Matrix::Identity(dim, dim));
  odometer(
      f.size(), p,
      [&](int s, std::size_t idx) {
        const auto us = static_cast<std::size_t>(s);
        prefix[us + 1] = prefix[us] * factor(us, idx);
      },
      [&](std::span<const std::size_t> h) {
        const auto last = static_cast<std::size_t>(p - 1);
        const Matrix& right = factor(last, h[last]);
        const Complex tr = prefix[last].cwiseProduct(right.transpose()).sum();
        visit(h, tr / static_cast<double>(dim));
      });
}

void for_each_element_moment(const OperatorFamily& f, int p, const MomentVisitor& visit,
                             AdjointPattern pattern) {
  std::vector<GroupAlgebraElement> plain, adjoint;
  for (std::size_t i = 0; i < f.size(); ++i) {
    plain.push_back(f.element(i));
    adjoint.push_back(f.adjoint_element(i));
  }
  const auto factor = [&](std::size_t s, std::size_t idx) -> const GroupAlgebraElement& {
    return adjoint_at(pattern, s) ? adjoint[idx] : plain[idx];
  };
  const auto& first = plain.front();
  std::vector<GroupAlgebraElement> prefix(
      static_cast<std::size_t>(p),
      GroupAlgebraElement::identity(first.arity(), first.generators(), f.coeff_dim()));
  odometer(
      f.size(), p,
      [&](int s, std::size_t idx) {
        const auto us = static_cast<std::size_t>(s);
        prefix[us + 1] = ga_multiply(prefix[us], factor(us, idx));
      },
      [&](std::span<const std::size_t> h) {
        const auto last = static_cast<std::size_t>(p - 1);
        visit(h, ga_trace_pair(prefix[last], factor(last, h[last])));
      });
}

}  // namespace

IndexFunction IndexFunction::from_linear(const IndexSpace& space, std::span<const std::size_t> h) {
  IndexFunction out;
  for (std::size_t s : h) out.images.push_back(space.decode(s));
  return out;
}

std::vector<std::size_t> IndexFunction::linear(const IndexSpace& space) const {
  std::vector<std::size_t> out;
  out.reserve(images.size());
  for (const auto& image : images) out.push_back(space.encode(image));
  return out;
}

std::string IndexFunction::to_string() const {
  std::string out;
  for (std::size_t s = 0; s < images.size(); ++s) {
    if (s > 0) out += ' ';
    out += '(' + format_multi_index(images[s]) + ')';
  }
  return out;
}

bool has_injective_projection(const IndexFunction& h, int d) {
  for (int k = 1; k <= d; ++k) {
    std::vector<int> seen;
    bool injective = true;
    for (const auto& image : h.images) {
      const int c = image.at(static_cast<std::size_t>(k - 1));
      for (int other : seen) {
        if (other == c) injective = false;
      }
      if (!injective) break;
      seen.push_back(c);
    }
    if (injective) return true;
  }
  return false;
}

SetPartition sigma_of(const IndexFunction& h, int k) {
  if (h.images.empty()) throw ArgumentError("sigma_of: empty index function");
  const int d = static_cast<int>(h.images.front().size());
  if (k < 1 || k > d) {
    throw ArgumentError("sigma_of: coordinate " + std::to_string(k) + " out of range [1, " +
                        std::to_string(d) + "]");
  }
  std::vector<int> values;
  for (const auto& image : h.images) values.push_back(image.at(static_cast<std::size_t>(k - 1)));
  return kernel_partition(values);
}

PartitionTuple delta_of(const IndexFunction& h, int d) {
  std::vector<SetPartition> out;
  for (int k = 1; k <= d; ++k) out.push_back(sigma_of(h, k));
  return PartitionTuple(std::move(out));
}

Complex alternating_moment(const OperatorFamily& f, const IndexFunction& h, AdjointPattern pattern) {
  check_index_function(f, h);
  const auto idx = h.linear(f.index());
  if (f.kind() == FamilyKind::kMatrix) {
    Matrix acc = Matrix::Identity(f.coeff_dim(), f.coeff_dim());
    for (std::size_t s = 0; s < idx.size(); ++s) {
      const Matrix& m = f.matrices()[idx[s]].matrix();
      acc = adjoint_at(pattern, s) ? Matrix(acc * m.adjoint()) : Matrix(acc * m);
    }
    return acc.trace() / static_cast<double>(f.coeff_dim());
  }
  std::vector<GroupAlgebraElement> factors;
  for (std::size_t s = 0; s < idx.size(); ++s) {
    factors.push_back(adjoint_at(pattern, s) ? f.adjoint_element(idx[s]) : f.element(idx[s]));
  }
  return ga_trace_product(factors);
}

void for_each_moment(const OperatorFamily& f, int p, const MomentVisitor& visit,
                     std::uint64_t budget, AdjointPattern pattern) {
  require_even_p(p, "for_each_moment");
  check_power_budget(f.size(), p, budget, "index functions");
  if (f.kind() == FamilyKind::kMatrix) {
    for_each_matrix_moment(f, p, visit, pattern);
  } else {
    for_each_element_moment(f, p, visit, pattern);
  }
}

MomentReport is_p_orthogonal(const OperatorFamily& f, int p, double tol, std::uint64_t budget,
                             AdjointPattern pattern) {
  if (!(tol >= 0.0)) throw ArgumentError("is_p_orthogonal: tolerance must be >= 0");
  MomentReport report;
  std::vector<std::size_t> worst;
  for_each_moment(
      f, p,
      [&](std::span<const std::size_t> h, Complex m) {
        if (!has_injective_coordinate(f.index(), h)) return;
        ++report.count_checked;
        const double v = std::abs(m);
        if (v > report.max_abs_violation) {
          report.max_abs_violation = v;
          worst.assign(h.begin(), h.end());
        }
      },
      budget, pattern);
  report.ok = report.max_abs_violation <= tol;
  if (!report.ok) report.worst_h = IndexFunction::from_linear(f.index(), worst);
  return report;
}

Complex phi(const OperatorFamily& f, const PartitionTuple& eta, int p, std::uint64_t budget,
            AdjointPattern pattern) {
  check_tuple(eta, f.d(), p, "phi");
  Complex sum = 0.0;
  std::vector<int> scratch;
  for_each_moment(
      f, p,
      [&](std::span<const std::size_t> h, Complex m) {
        for (int k = 1; k <= f.d(); ++k) {
          if (kernel_of(f.index(), h, k, scratch) != eta[static_cast<std::size_t>(k - 1)]) return;
        }
        sum += m;
      },
      budget, pattern);
  return sum;
}

Complex psi(const OperatorFamily& f, const PartitionTuple& sigmas, int p, std::uint64_t budget,
            AdjointPattern pattern) {
  check_tuple(sigmas, f.d(), p, "psi");
  Complex sum = 0.0;
  std::vector<int> scratch;
  for_each_moment(
      f, p,
      [&](std::span<const std::size_t> h, Complex m) {
        for (int k = 1; k <= f.d(); ++k) {
          if (!refines(sigmas[static_cast<std::size_t>(k - 1)], kernel_of(f.index(), h, k, scratch))) {
            return;
          }
        }
        sum += m;
      },
      budget, pattern);
  return sum;
}

MomentTable::MomentTable(const OperatorFamily& f, int p, std::uint64_t budget, AdjointPattern pattern)
    : p_(p), d_(f.d()), lattice_((require_even_p(p, "MomentTable"), p)) {
  if (d_ < 1) throw ArgumentError("MomentTable: need d >= 1");
  check_power_budget(lattice_.size(), d_, budget, "partition tuples");
  std::size_t count = 1;
  for (int k = 0; k < d_; ++k) count *= lattice_.size();
  phi_.assign(count, Complex(0.0));

  std::vector<int> scratch;
  for_each_moment(
      f, p,
      [&](std::span<const std::size_t> h, Complex m) {
        std::size_t t = 0;
        for (int k = 1; k <= d_; ++k) t = t * lattice_.size() + lattice_.index_of(kernel_of(f.index(), h, k, scratch));
        phi_[t] += m;
        total_ += m;
        if (has_injective_coordinate(f.index(), h)) injective_ += m;
        ++functions_;
      },
      budget, pattern);

  psi_ = phi_;
  std::vector<Complex> next(count);
  const std::size_t size = lattice_.size();
  std::size_t stride = count;
  for (int k = 0; k < d_; ++k) {
    stride /= size;
    for (std::size_t t = 0; t < count; ++t) {
      const std::size_t i = (t / stride) % size;
      const std::size_t base = t - i * stride;
      Complex sum = 0.0;
      for (std::size_t j : lattice_.coarser(i)) sum += psi_[base + j * stride];
      next[t] = sum;
    }
    psi_.swap(next);
  }
}

PartitionTuple MomentTable::tuple(std::size_t t) const {
  std::vector<SetPartition> out(static_cast<std::size_t>(d_));
  for (int k = d_ - 1; k >= 0; --k) {
    out[static_cast<std::size_t>(k)] = lattice_[t % lattice_.size()];
    t /= lattice_.size();
  }
  return PartitionTuple(std::move(out));
}

std::size_t MomentTable::index_of(const PartitionTuple& eta) const {
  check_tuple(eta, d_, p_, "MomentTable");
  std::size_t t = 0;
  for (const auto& sigma : eta.entries()) t = t * lattice_.size() + lattice_.index_of(sigma);
  return t;
}

DecompositionReport mobius_decomposition_check(const OperatorFamily& f, int p, std::uint64_t budget,
                                               AdjointPattern pattern) {
  const MomentTable table(f, p, budget, pattern);
  const auto& lattice = table.lattice();
  const std::size_t size = lattice.size();
  Complex sum = 0.0;
  std::vector<std::size_t> digits(static_cast<std::size_t>(table.d()));
  for (std::size_t t = 0; t < table.tuple_count(); ++t) {
    std::size_t rest = t;
    bool all_coarser = true;
    std::int64_t weight = 1;
    for (int k = table.d() - 1; k >= 0; --k) {
      const std::size_t i = rest % size;
      rest /= size;
      if (i == lattice.finest_index()) {
        all_coarser = false;
        break;
      }
      weight *= lattice.mobius_from_finest(i);
    }
    if (all_coarser) sum += static_cast<double>(weight) * table.psi_at(t);
  }
  DecompositionReport report;
  report.lhs = table.total();
  report.injective_part = table.injective_part();
  report.mobius_part = (table.d() % 2 == 0 ? 1.0 : -1.0) * sum;
  report.rhs = report.injective_part + report.mobius_part;
  report.abs_err = std::abs(report.lhs - report.rhs);
  report.scale = family_scale(f, p, budget);
  return report;
}

}  // namespace porth
