#pragma once

namespace afra::numkit::kernels {

// Effective thread cap: AFRA_THREADS env var if set, else OpenMP default,
// else 1. set_max_threads(0) re-reads the environment.
int max_threads();
void set_max_threads(int n);

// c[m,n] = (or +=) op(a) * op(b) where op transposes when the flag is set.
// a is [m,k] (or [k,m] if trans_a), b is [k,n] (or [n,k] if trans_b).
// The parallel and serial paths run the identical loop body per output
// element, so results are bitwise equal for any thread count.
void matmul(const double* a, const double* b, double* c, int m, int k, int n,
            bool trans_a, bool trans_b, bool accumulate);
void matmul_serial(const double* a, const double* b, double* c, int m, int k,
                   int n, bool trans_a, bool trans_b, bool accumulate);

// Textbook triple loop kept as the reference implementation for tests and
// the kernel benchmark.
void matmul_reference(const double* a, const double* b, double* c, int m,
                      int k, int n, bool trans_a, bool trans_b,
                      bool accumulate);

}  // namespace afra::numkit::kernels
