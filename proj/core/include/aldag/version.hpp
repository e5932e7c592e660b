#ifndef ALDAG_VERSION_HPP
#define ALDAG_VERSION_HPP

namespace aldag {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace aldag

#endif  // ALDAG_VERSION_HPP
