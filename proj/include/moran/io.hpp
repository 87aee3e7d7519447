#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "moran/mutation.hpp"
#include "moran/spectra.hpp"

namespace moran {

/**
 * Mutation matrix JSON: {"K": int, "rates": [[...]]} with numeric entries or
 * decimal strings; strings parse exactly into rationals.  Diagonal entries are
 * ignored and recomputed during validation.
 */
template <class F>
MutationMatrix<F> mutation_from_json(const nlohmann::json& j) {
  if (!j.contains("K") || !j.contains("rates"))
    throw validation_error("mutation JSON needs fields 'K' and 'rates'");
  const int K = j.at("K").get<int>();
  const auto& rows = j.at("rates");
  if (!rows.is_array() || static_cast<int>(rows.size()) != K)
    throw validation_error("mutation JSON: 'rates' must be a K x K array");
  std::vector<std::vector<F>> raw(K, std::vector<F>(K, field_traits<F>::from_long(0)));
  for (int i = 0; i < K; ++i) {
    const auto& row = rows.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != K)
      throw validation_error("mutation JSON: 'rates' must be a K x K array");
    for (int jj = 0; jj < K; ++jj) {
      const auto& cell = row.at(jj);
      if (cell.is_string())
        raw[i][jj] = field_traits<F>::from_rational(parse_rational(cell.get<std::string>()));
      else if (cell.is_number())
        raw[i][jj] = field_traits<F>::from_rational(rational_from_double(cell.get<double>()));
      else
        throw validation_error("mutation JSON: entries must be numbers or strings");
    }
  }
  return MutationMatrix<F>::validate(raw);
}

template <class F>
MutationMatrix<F> mutation_from_json_file(const std::string& path);

/// Catalog export: JSON list of {re, im, multiplicity, label}.
std::string catalog_to_json(const SpectrumCatalog& cat);

nlohmann::json read_json_file(const std::string& path);

}  // namespace moran
