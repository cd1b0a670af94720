#pragma once

#include <map>
#include <string>
#include <vector>

#include "core/hardy.hpp"
#include "core/kernel.hpp"
#include "core/semigroup.hpp"
#include "core/symbol.hpp"
#include "core/weight.hpp"

namespace g2k {

// Named collections of weights, tensor weights, symbols, semigroup models
// and circle polynomials used by the experiments. Config files may add
// entries; built-ins cover normal and non-normal generators in both the
// C_A = 1 and C_A > 1 regimes.
class Catalog {
 public:
  static Catalog builtin();

  void add_from_config(const nlohmann::json& cfg);

  const Weight& weight(const std::string& id) const;
  const TensorWeight& tensor(const std::string& id) const;
  const Symbol& symbol(const std::string& id) const;
  const SemigroupModel& model(const std::string& id) const;
  const CirclePoly& poly(const std::string& id) const;

  std::vector<std::string> weight_ids() const;
  std::vector<std::string> tensor_ids() const;
  std::vector<std::string> symbol_ids() const;
  std::vector<std::string> model_ids() const;
  std::vector<std::string> poly_ids() const;

  std::map<std::string, Weight> weights;
  std::map<std::string, TensorWeight> tensors;
  std::map<std::string, Symbol> symbols;
  std::map<std::string, SemigroupModel> models;
  std::map<std::string, CirclePoly> polys;
};

}  // namespace g2k
