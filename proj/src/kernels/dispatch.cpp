#include <atomic>
#include <stdexcept>

#include "biconf/kernels.hpp"

namespace biconf::kernels {
namespace {

struct Table {
  Backend backend;
  decltype(&scalar::chain_unary) unary;
  decltype(&scalar::chain_binary) binary;
};

constexpr Table kScalarTable{Backend::kScalar, &scalar::chain_unary,
                             &scalar::chain_binary};
#if defined(BICONF_HAVE_AVX2)
constexpr Table kAvx2Table{Backend::kAvx2, &avx2::chain_unary,
                           &avx2::chain_binary};
#endif

bool cpu_has_avx2() {
#if defined(BICONF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Table* detect() {
#if defined(BICONF_HAVE_AVX2)
  if (cpu_has_avx2()) return &kAvx2Table;
#endif
  return &kScalarTable;
}

std::atomic<const Table*>& active() {
  static std::atomic<const Table*> table{detect()};
  return table;
}

}  // namespace

bool backend_available(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
      return cpu_has_avx2();
  }
  return false;
}

Backend active_backend() { return active().load()->backend; }

void set_backend(Backend b) {
  if (!backend_available(b)) {
    throw std::invalid_argument("kernel backend not available: " +
                                std::string(backend_name(b)));
  }
#if defined(BICONF_HAVE_AVX2)
  if (b == Backend::kAvx2) {
    active().store(&kAvx2Table);
    return;
  }
#endif
  active().store(&kScalarTable);
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
  }
  return "unknown";
}

void chain_unary(const double* ga, const double* ha, UnaryCoeffs c,
                 double* g_out, double* h_out) {
  active().load(std::memory_order_relaxed)->unary(ga, ha, c, g_out, h_out);
}

void chain_binary(const double* ga, const double* ha, const double* gb,
                  const double* hb, BinaryCoeffs c, double* g_out,
                  double* h_out) {
  active().load(std::memory_order_relaxed)
      ->binary(ga, ha, gb, hb, c, g_out, h_out);
}

}  // namespace biconf::kernels
