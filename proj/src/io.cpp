#include "homc/io.hpp"

#include <fstream>
#include <set>
#include <utility>

#include "homc/errors.hpp"

namespace homc {

namespace {

int require_natural(const ordered_json& doc, const char* key,
                    const std::string& origin) {
  if (!doc.contains(key)) {
    throw InputError(origin + ": missing required field '" + key + "'");
  }
  const ordered_json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw InputError(origin + ": field '" + key +
                     "' must be a positive integer");
  }
  const long long value = v.get<long long>();
  if (value > 1000000) {
    throw InputError(origin + ": field '" + key + "' is implausibly large (" +
                     std::to_string(value) + ")");
  }
  return static_cast<int>(value);
}

Tensor dense_entries(const ordered_json& entries, const TensorShape& shape,
                     const std::string& origin) {
  if (!entries.is_array()) {
    throw InputError(origin + ": 'entries' must be an array of numbers");
  }
  const std::int64_t expected = shape.entry_count();
  if (static_cast<std::int64_t>(entries.size()) != expected) {
    throw InputError(origin + ": 'entries' has " +
                     std::to_string(entries.size()) + " values, expected n^m = " +
                     std::to_string(expected));
  }
  Tensor t(shape);
  for (std::int64_t i = 0; i < expected; ++i) {
    const ordered_json& v = entries[static_cast<std::size_t>(i)];
    if (!v.is_number()) {
      throw InputError(origin + ": 'entries[" + std::to_string(i) +
                       "]' is not a number");
    }
    t[i] = v.get<double>();
  }
  return t;
}

Tensor sparse_entries(const ordered_json& entries, const TensorShape& shape,
                      const std::string& origin) {
  if (!entries.is_array()) {
    throw InputError(origin + ": 'sparse_entries' must be an array of objects");
  }
  Tensor t(shape);
  std::set<std::int64_t> seen;
  for (std::size_t row = 0; row < entries.size(); ++row) {
    const std::string where =
        origin + ": 'sparse_entries[" + std::to_string(row) + "]'";
    const ordered_json& e = entries[row];
    if (!e.is_object() || !e.contains("index") || !e.contains("p")) {
      throw InputError(where + " must be an object with 'index' and 'p'");
    }
    const ordered_json& idx = e.at("index");
    if (!idx.is_array() ||
        static_cast<int>(idx.size()) != shape.order) {
      throw InputError(where + ": 'index' must be a " +
                       std::to_string(shape.order) + "-tuple");
    }
    IndexTuple tuple;
    for (const ordered_json& part : idx) {
      if (!part.is_number_integer()) {
        throw InputError(where + ": 'index' components must be integers");
      }
      tuple.push_back(part.get<int>());
      if (tuple.back() < 1 || tuple.back() > shape.dimension) {
        throw InputError(where + ": index component " +
                         std::to_string(tuple.back()) +
                         " is outside 1.." + std::to_string(shape.dimension));
      }
    }
    if (!e.at("p").is_number()) {
      throw InputError(where + ": 'p' must be a number");
    }
    const std::int64_t offset = linear_offset(tuple, shape.dimension);
    if (!seen.insert(offset).second) {
      throw InputError(where + ": duplicate index");
    }
    t[offset] = e.at("p").get<double>();
  }
  return t;
}

}  // namespace

ChainSpecFile parse_chain_spec(const ordered_json& doc,
                               const std::string& origin) {
  if (!doc.is_object()) {
    throw InputError(origin + ": top level must be an object");
  }
  const int order = require_natural(doc, "order", origin);
  const int states = require_natural(doc, "states", origin);
  if (states < 2) {
    throw InputError(origin + ": 'states' must be at least 2");
  }
  const TensorShape shape = TensorShape::of(order + 1, states);

  const bool has_dense = doc.contains("entries");
  const bool has_sparse = doc.contains("sparse_entries");
  if (has_dense == has_sparse) {
    throw InputError(origin +
                     ": exactly one of 'entries'/'sparse_entries' must be "
                     "present");
  }
  Tensor t = has_dense ? dense_entries(doc.at("entries"), shape, origin)
                       : sparse_entries(doc.at("sparse_entries"), shape, origin);
  // Decimal files get the looser 1e-9 admission; the message from the
  // validator names the first offending column.
  try {
    return ChainSpecFile(order, states, has_sparse,
                         StochasticTensor(std::move(t), 1e-9));
  } catch (const InputError& e) {
    throw InputError(origin + ": " + e.what());
  }
}

ChainSpecFile load_chain_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open chain-spec file '" + path + "'");
  }
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("chain-spec file '" + path + "' is not valid JSON: " +
                     e.what());
  }
  return parse_chain_spec(doc, "'" + path + "'");
}

ordered_json chain_spec_json(const StochasticTensor& p, bool sparse) {
  const TensorShape& shape = p.shape();
  ordered_json doc;
  doc["order"] = shape.order - 1;
  doc["states"] = shape.dimension;
  if (!sparse) {
    ordered_json entries = ordered_json::array();
    for (std::size_t i = 0; i < shape.entry_count(); ++i) entries.push_back(p[i]);
    doc["entries"] = std::move(entries);
  } else {
    ordered_json entries = ordered_json::array();
    for (std::size_t i = 0; i < shape.entry_count(); ++i) {
      if (p[i] == 0.0) continue;
      ordered_json e;
      e["index"] = tuple_at_offset(i, shape.dimension, shape.order);
      e["p"] = p[i];
      entries.push_back(std::move(e));
    }
    doc["sparse_entries"] = std::move(entries);
  }
  return doc;
}

void save_chain_spec(const std::string& path, const StochasticTensor& p,
                     bool sparse) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write chain-spec file '" + path + "'");
  }
  out << chain_spec_json(p, sparse).dump(2) << '\n';
}

namespace {

ordered_json nest_tensor(const Tensor& t, int positions_left,
                         std::int64_t base, std::int64_t stride) {
  if (positions_left == 0) return ordered_json(t[base]);
  const int n = t.shape().dimension;
  ordered_json arr = ordered_json::array();
  const std::int64_t inner_stride = stride / n;
  for (int i = 0; i < n; ++i) {
    arr.push_back(nest_tensor(t, positions_left - 1, base + i * stride,
                              inner_stride));
  }
  return arr;
}

}  // namespace

ordered_json tensor_json(const Tensor& t) {
  const TensorShape& shape = t.shape();
  std::int64_t outer_stride = 1;
  for (int i = 0; i < shape.order - 1; ++i) outer_stride *= shape.dimension;
  return nest_tensor(t, shape.order, 0, outer_stride);
}

}  // namespace homc
