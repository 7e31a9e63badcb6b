#include <atomic>

#include "surfrep/kernels.hpp"
#include "surfrep/types.hpp"

namespace surfrep::kern {

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  static const bool ok = __builtin_cpu_supports("avx2") &&
                         __builtin_cpu_supports("fma") && avx2_ops() != nullptr;
  return ok;
#else
  return false;
#endif
}

namespace {
std::atomic<Lane> g_forced{Lane::Auto};
}

void force_lane(Lane lane) {
  if (lane == Lane::Avx2 && !avx2_available())
    throw PreconditionError("avx2 lane not available on this host");
  g_forced.store(lane);
}

Lane forced_lane() { return g_forced.load(); }

const Ops& ops() {
  const Lane lane = g_forced.load();
  if (lane == Lane::Scalar) return scalar_ops();
  if (lane == Lane::Avx2) return *avx2_ops();
  return avx2_available() ? *avx2_ops() : scalar_ops();
}

const char* lane_name() { return ops().name; }

}  // namespace surfrep::kern
