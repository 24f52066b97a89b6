#include "ddsim/dscp.hpp"

#include <string>

#include "ddsim/error.hpp"

namespace ddsim {

const DscpInfo& dscp_info(Dscp code) {
  for (const auto& info : kDscpTable) {
    if (info.code == code) return info;
  }
  throw Error(Errc::kDomainError,
              "unknown DSCP " + std::to_string(static_cast<int>(code)));
}

std::optional<Dscp> dscp_from_code(std::uint8_t code) {
  for (const auto& info : kDscpTable) {
    if (info.decimal == code) return info.code;
  }
  return std::nullopt;
}

int dscp_precedence(Dscp code) {
  switch (code) {
    case Dscp::kBestEffort: return 0;
    case Dscp::kCS7: return 13;
    default: break;
  }
  // AF code points are 8·class + 2·drop, class 1..4, drop 1..3.
  const int v = static_cast<int>(code);
  const int af_class = v >> 3;
  const int drop = (v >> 1) & 0x3;
  return (af_class - 1) * 3 + (4 - drop);
}

}  // namespace ddsim
