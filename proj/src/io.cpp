#include "moran/io.hpp"

#include <fstream>

namespace moran {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw argument_error("cannot read file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error("bad JSON in " + path + ": " + e.what());
  }
  return j;
}

template <class F>
MutationMatrix<F> mutation_from_json_file(const std::string& path) {
  return mutation_from_json<F>(read_json_file(path));
}

template MutationMatrix<double> mutation_from_json_file<double>(const std::string&);
template MutationMatrix<Rational> mutation_from_json_file<Rational>(const std::string&);

std::string catalog_to_json(const SpectrumCatalog& cat) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  const SpectrumCatalog sorted_cat = cat.sorted();
  for (const auto& e : sorted_cat.entries()) {
    nlohmann::ordered_json item;
    item["re"] = e.value.real();
    item["im"] = e.value.imag();
    item["multiplicity"] = e.multiplicity;
    std::string label;
    for (std::size_t i = 0; i < e.labels.size(); ++i) {
      if (i) label += ";";
      label += e.labels[i];
    }
    item["label"] = label;
    arr.push_back(item);
  }
  return arr.dump(2) + "\n";
}

}  // namespace moran
