# cython: boundscheck=False, wraparound=False, initializedcheck=False
# cython: language_level=3
"""Bond-apply kernel, compiled backend."""

name = "compiled"


def apply_bond_accumulate(const double complex[:, :] gate,
                          const double complex[::1] vec,
                          double complex[::1] out,
                          Py_ssize_t left_dim, Py_ssize_t right_dim):
    """out += gate acting on the middle 4-dim slot of vec viewed as (L, 4, R)."""
    cdef double complex g00 = gate[0, 0], g01 = gate[0, 1], g02 = gate[0, 2], g03 = gate[0, 3]
    cdef double complex g10 = gate[1, 0], g11 = gate[1, 1], g12 = gate[1, 2], g13 = gate[1, 3]
    cdef double complex g20 = gate[2, 0], g21 = gate[2, 1], g22 = gate[2, 2], g23 = gate[2, 3]
    cdef double complex g30 = gate[3, 0], g31 = gate[3, 1], g32 = gate[3, 2], g33 = gate[3, 3]
    cdef Py_ssize_t a, r, base, i1, i2, i3
    cdef double complex v0, v1, v2, v3
    for a in range(left_dim):
        base = a * 4 * right_dim
        for r in range(right_dim):
            i1 = base + right_dim + r
            i2 = base + 2 * right_dim + r
            i3 = base + 3 * right_dim + r
            v0 = vec[base + r]
            v1 = vec[i1]
            v2 = vec[i2]
            v3 = vec[i3]
            out[base + r] = out[base + r] + g00 * v0 + g01 * v1 + g02 * v2 + g03 * v3
            out[i1] = out[i1] + g10 * v0 + g11 * v1 + g12 * v2 + g13 * v3
            out[i2] = out[i2] + g20 * v0 + g21 * v1 + g22 * v2 + g23 * v3
            out[i3] = out[i3] + g30 * v0 + g31 * v1 + g32 * v2 + g33 * v3
