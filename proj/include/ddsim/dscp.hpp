#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace ddsim {

// DSCP code points used by the firewall. The enumerator value is the 6-bit
// code point itself.
enum class Dscp : std::uint8_t {
  kBestEffort = 0,  // 000000
  kAF11 = 10,
  kAF12 = 12,
  kAF13 = 14,
  kAF21 = 18,
  kAF22 = 20,
  kAF23 = 22,
  kAF31 = 26,
  kAF32 = 28,
  kAF33 = 30,
  kAF41 = 34,
  kAF42 = 36,
  kAF43 = 38,
  kCS7 = 56,  // 111000
};

struct DscpInfo {
  Dscp code;
  std::string_view name;
  std::uint8_t decimal;
  std::string_view binary;
};

inline constexpr std::array<DscpInfo, 14> kDscpTable{{
    {Dscp::kAF11, "AF11", 10, "001010"},
    {Dscp::kAF12, "AF12", 12, "001100"},
    {Dscp::kAF13, "AF13", 14, "001110"},
    {Dscp::kAF21, "AF21", 18, "010010"},
    {Dscp::kAF22, "AF22", 20, "010100"},
    {Dscp::kAF23, "AF23", 22, "010110"},
    {Dscp::kAF31, "AF31", 26, "011010"},
    {Dscp::kAF32, "AF32", 28, "011100"},
    {Dscp::kAF33, "AF33", 30, "011110"},
    {Dscp::kAF41, "AF41", 34, "100010"},
    {Dscp::kAF42, "AF42", 36, "100100"},
    {Dscp::kAF43, "AF43", 38, "100110"},
    {Dscp::kCS7, "CS7", 56, "111000"},
    {Dscp::kBestEffort, "BestEffort", 0, "000000"},
}};

const DscpInfo& dscp_info(Dscp code);
std::optional<Dscp> dscp_from_code(std::uint8_t code);

// Survival rank under policing among non-exempt traffic; higher survives
// longer. CS7 > AF4x > AF3x > AF2x > AF1x > BestEffort, and within an AF
// class the low-drop column ranks above medium and high.
int dscp_precedence(Dscp code);

}  // namespace ddsim
