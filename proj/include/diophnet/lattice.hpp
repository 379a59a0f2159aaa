#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "diophnet/encoding.hpp"
#include "diophnet/network.hpp"

namespace diophnet {

using IntVector = std::vector<std::int64_t>;

/// Row basis of an integer lattice: `vectors.size()` linearly independent
/// vectors of a common dimension.
struct LatticeBasis {
  std::vector<IntVector> vectors;

  std::size_t rank() const { return vectors.size(); }
  std::size_t dimension() const { return vectors.empty() ? 0 : vectors.front().size(); }

  bool operator==(const LatticeBasis&) const = default;
};

/// LLL reduction with Lovasz parameter delta in (1/4, 1).
///
/// Gram-Schmidt data is kept in exact rational arithmetic, so the output is
/// size-reduced (|mu_ij| <= 1/2) and satisfies the Lovasz condition exactly.
/// Throws RankError for dependent input vectors.
LatticeBasis lll_reduce(const LatticeBasis& basis, double delta = 0.75);

struct LllInitResult {
  Network net;
  bool fell_back = false;
  std::string note;
};

/// Builds one lattice vector per layer from the encoded parameters (zero
/// padded to a common length), reduces the basis and decodes it back into the
/// layers.  Falls back to the plain quantized parameters decode(encode(theta))
/// when the blocks are rank deficient, when a reduced vector does not fit its
/// layer's shape, or when the reduced parameters are larger in max-magnitude.
LllInitResult lll_init(const Network& net, const EncodingMap& map, double delta = 0.75);

}  // namespace diophnet
