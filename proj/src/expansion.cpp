#include "stabcert/expansion.hpp"

#include <cmath>

namespace stabcert {

ExpandedMatrix expand(const MetzlerMatrix& m) {
  const std::size_t n = m.size();
  std::vector<std::pair<std::size_t, std::size_t>> origin;
  for (std::size_t row = 0; row < n; ++row)
    for (std::size_t col = 0; col < n; ++col)
      if (row != col && m(row, col) != 0.0) origin.emplace_back(col, row);  // edge col -> row

  const std::size_t total = n + origin.size();
  SquareMatrix exp(total);
  for (std::size_t i = 0; i < n; ++i) exp(i, i) = m(i, i);
  for (std::size_t k = 0; k < origin.size(); ++k) {
    const auto [from, to] = origin[k];
    const double w = std::sqrt(m(to, from));
    const std::size_t added = n + k;
    exp(added, added) = -1.0;
    exp(added, from) = w;  // edge from -> added
    exp(to, added) = w;    // edge added -> to
  }
  return ExpandedMatrix{m.base(), std::move(exp), std::move(origin)};
}

bool contract_check(const ExpandedMatrix& e, double tolerance) {
  SquareMatrix work = e.expanded;
  const std::size_t n = e.original.size();
  while (work.size() > n) work = schur_reduce(work);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(work(i, j) - e.original(i, j)) > tolerance) return false;
  return true;
}

}  // namespace stabcert
