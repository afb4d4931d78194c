#pragma once

#include <string>

#include <json.hpp>

#include "homc/tensor.hpp"

namespace homc {

using ordered_json = nlohmann::ordered_json;

// A chain-spec file: {"order": m-1, "states": n, "entries": [...]} with the
// entries in linear-index order (first index fastest), or "sparse_entries":
// [{"index": [i1,...,im], "p": value}, ...] with omitted entries zero.
// Exactly one of the two spellings must be present. Indices are 1-based.
struct ChainSpecFile {
  int order = 0;   // chain order, m - 1
  int states = 0;  // n
  bool sparse = false;
  StochasticTensor chain;

  ChainSpecFile(int order_, int states_, bool sparse_, StochasticTensor chain_)
      : order(order_), states(states_), sparse(sparse_), chain(std::move(chain_)) {}
};

// Columns are validated at 1e-9 on load — looser than the internal 1e-12 —
// because file numbers are decimal and fractions like 1/3 carry
// representation error. Throws InputError naming the offending field or
// index on any malformed input; never crashes on bad files.
ChainSpecFile parse_chain_spec(const ordered_json& doc, const std::string& origin);
ChainSpecFile load_chain_spec(const std::string& path);

// Serialization. Doubles are written with shortest round-trip precision, so
// save followed by load reproduces the tensor bit for bit.
ordered_json chain_spec_json(const StochasticTensor& p, bool sparse);
void save_chain_spec(const std::string& path, const StochasticTensor& p,
                     bool sparse);

// Tensor rendered as nested arrays: positions nest outermost-last-index to
// innermost-first-index, so flattening the nesting reproduces the
// linear-index order used by "entries".
ordered_json tensor_json(const Tensor& t);

}  // namespace homc
