#ifndef GRAPHSURF_LINALG_HPP
#define GRAPHSURF_LINALG_HPP

namespace graphsurf {

// Determinant and inverse of small (n <= 3) row-major matrices.

inline double det_n(int n, const double* a) {
  switch (n) {
    case 1: return a[0];
    case 2: return a[0] * a[3] - a[1] * a[2];
    default:
      return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
             a[2] * (a[3] * a[7] - a[4] * a[6]);
  }
}

inline void invert_n(int n, const double* a, double det, double* out) {
  const double inv = 1.0 / det;
  switch (n) {
    case 1: out[0] = inv; break;
    case 2:
      out[0] = a[3] * inv;
      out[1] = -a[1] * inv;
      out[2] = -a[2] * inv;
      out[3] = a[0] * inv;
      break;
    default:
      out[0] = (a[4] * a[8] - a[5] * a[7]) * inv;
      out[1] = (a[2] * a[7] - a[1] * a[8]) * inv;
      out[2] = (a[1] * a[5] - a[2] * a[4]) * inv;
      out[3] = (a[5] * a[6] - a[3] * a[8]) * inv;
      out[4] = (a[0] * a[8] - a[2] * a[6]) * inv;
      out[5] = (a[2] * a[3] - a[0] * a[5]) * inv;
      out[6] = (a[3] * a[7] - a[4] * a[6]) * inv;
      out[7] = (a[1] * a[6] - a[0] * a[7]) * inv;
      out[8] = (a[0] * a[4] - a[1] * a[3]) * inv;
      break;
  }
}

} // namespace graphsurf

#endif
