#include "afra/numkit/kernels.hpp"

#include <cstdlib>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace afra::numkit::kernels {

namespace {

int resolve_threads() {
  if (const char* env = std::getenv("AFRA_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int g_max_threads = -1;

// Loop body shared by the serial and parallel paths. For every output
// element the k-accumulation order is ascending, independent of loop order,
// so all variants agree bitwise.
template <bool TA, bool TB>
inline void matmul_rows(const double* a, const double* b, double* c, int m,
                        int k, int n, bool accumulate, int i_begin, int i_end) {
  for (int i = i_begin; i < i_end; ++i) {
    double* crow = c + static_cast<std::size_t>(i) * n;
    if (!accumulate) std::memset(crow, 0, sizeof(double) * static_cast<std::size_t>(n));
    if constexpr (!TB) {
      // saxpy over rows of b keeps the j loop contiguous.
      for (int kk = 0; kk < k; ++kk) {
        const double aik = TA ? a[static_cast<std::size_t>(kk) * m + i]
                              : a[static_cast<std::size_t>(i) * k + kk];
        const double* brow = b + static_cast<std::size_t>(kk) * n;
        for (int j = 0; j < n; ++j) crow[j] += aik * brow[j];
      }
    } else {
      // b is [n,k]; both operands are contiguous dots.
      for (int j = 0; j < n; ++j) {
        const double* brow = b + static_cast<std::size_t>(j) * k;
        double acc = 0.0;
        if constexpr (TA) {
          for (int kk = 0; kk < k; ++kk) acc += a[static_cast<std::size_t>(kk) * m + i] * brow[kk];
        } else {
          const double* arow = a + static_cast<std::size_t>(i) * k;
          for (int kk = 0; kk < k; ++kk) acc += arow[kk] * brow[kk];
        }
        crow[j] += acc;
      }
    }
  }
}

template <bool TA, bool TB>
void matmul_impl(const double* a, const double* b, double* c, int m, int k,
                 int n, bool accumulate, int threads) {
#ifdef _OPENMP
  if (threads > 1 && m > 1) {
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int i = 0; i < m; ++i) {
      matmul_rows<TA, TB>(a, b, c, m, k, n, accumulate, i, i + 1);
    }
    return;
  }
#endif
  (void)threads;
  matmul_rows<TA, TB>(a, b, c, m, k, n, accumulate, 0, m);
}

void dispatch(const double* a, const double* b, double* c, int m, int k, int n,
              bool trans_a, bool trans_b, bool accumulate, int threads) {
  if (trans_a) {
    if (trans_b) {
      matmul_impl<true, true>(a, b, c, m, k, n, accumulate, threads);
    } else {
      matmul_impl<true, false>(a, b, c, m, k, n, accumulate, threads);
    }
  } else {
    if (trans_b) {
      matmul_impl<false, true>(a, b, c, m, k, n, accumulate, threads);
    } else {
      matmul_impl<false, false>(a, b, c, m, k, n, accumulate, threads);
    }
  }
}

}  // namespace

int max_threads() {
  if (g_max_threads < 0) g_max_threads = resolve_threads();
  return g_max_threads;
}

void set_max_threads(int n) { g_max_threads = (n == 0) ? resolve_threads() : n; }

void matmul(const double* a, const double* b, double* c, int m, int k, int n,
            bool trans_a, bool trans_b, bool accumulate) {
  // Below this work size thread startup dominates.
  const bool parallel =
      max_threads() > 1 &&
      static_cast<long long>(m) * k * n >= 1LL << 16;
  dispatch(a, b, c, m, k, n, trans_a, trans_b, accumulate,
           parallel ? max_threads() : 1);
}

void matmul_serial(const double* a, const double* b, double* c, int m, int k,
                   int n, bool trans_a, bool trans_b, bool accumulate) {
  dispatch(a, b, c, m, k, n, trans_a, trans_b, accumulate, 1);
}

void matmul_reference(const double* a, const double* b, double* c, int m,
                      int k, int n, bool trans_a, bool trans_b,
                      bool accumulate) {
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int kk = 0; kk < k; ++kk) {
        const double av = trans_a ? a[static_cast<std::size_t>(kk) * m + i]
                                  : a[static_cast<std::size_t>(i) * k + kk];
        const double bv = trans_b ? b[static_cast<std::size_t>(j) * k + kk]
                                  : b[static_cast<std::size_t>(kk) * n + j];
        acc += av * bv;
      }
      double& out = c[static_cast<std::size_t>(i) * n + j];
      out = accumulate ? out + acc : acc;
    }
  }
}

}  // namespace afra::numkit::kernels
