#ifndef HOMENT_VERSION_HPP
#define HOMENT_VERSION_HPP

namespace homent {

inline constexpr const char* version = "0.1.0";

}  // namespace homent

#endif  // HOMENT_VERSION_HPP
