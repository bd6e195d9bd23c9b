#include <cstdlib>
#include <stdexcept>
#include <string>

#include "fieldnav/kernels/kernels.hpp"

namespace fieldnav::kernels {
namespace {

constexpr Dispatch kScalar{Isa::kScalar, &scalar::score_endpoints, &scalar::classify, &scalar::moments,
                           &scalar::scale};

#if defined(FIELDNAV_HAVE_AVX2)
constexpr Dispatch kAvx2{Isa::kAvx2, &avx2::score_endpoints, &avx2::classify, &avx2::moments, &avx2::scale};
#endif

const Dispatch& select_at_startup() {
  if (const char* forced = std::getenv("FIELDNAV_SIMD"); forced != nullptr) {
    const std::string choice{forced};
    if (choice == "scalar") {
      return kScalar;
    }
    if (choice == "avx2") {
      return table(Isa::kAvx2);
    }
    throw std::invalid_argument("FIELDNAV_SIMD must be 'scalar' or 'avx2', got '" + choice + "'");
  }
  return available(Isa::kAvx2) ? table(Isa::kAvx2) : kScalar;
}

}  // namespace

bool available(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(FIELDNAV_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
  }
  return false;
}

const Dispatch& table(Isa isa) {
  if (!available(isa)) {
    throw std::invalid_argument("kernel ISA not available on this machine: " + std::string{name(isa)});
  }
#if defined(FIELDNAV_HAVE_AVX2)
  if (isa == Isa::kAvx2) {
    return kAvx2;
  }
#endif
  return kScalar;
}

const Dispatch& active() {
  static const Dispatch& selected = select_at_startup();
  return selected;
}

std::string_view name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

}  // namespace fieldnav::kernels
