#ifndef ALDAG_INFOTHEO_HPP
#define ALDAG_INFOTHEO_HPP

#include <span>

#include "aldag/dataset.hpp"

namespace aldag {

/// Plug-in conditional mutual information, in nats. Nonnegative up to
/// floating tolerance.
struct CmiValue {
    double value = 0.0;
};

/// Plug-in entropy H = -sum p ln p over the empirical joint of `vars`,
/// in nats, with 0 ln 0 := 0.
double empirical_entropy(const CategoricalDataset& data, std::span<const int> vars);

/// Plug-in conditional mutual information I(a; b | c) in nats, estimated
/// from relative frequencies; cells with zero joint count contribute 0.
/// Equals empirical H(a,c) + H(b,c) - H(a,b,c) - H(c).
CmiValue conditional_mutual_information(const CategoricalDataset& data, int a, int b,
                                        std::span<const int> c);

}  // namespace aldag

#endif  // ALDAG_INFOTHEO_HPP
