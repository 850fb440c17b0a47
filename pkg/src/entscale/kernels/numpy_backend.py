"""Bond-apply kernel, numpy fallback backend."""
import numpy as np

name = "numpy"


def apply_bond_accumulate(gate, vec, out, left_dim, right_dim):
    """out += gate acting on the middle 4-dim slot of vec viewed as (L, 4, R)."""
    # (4,4) @ (L,4,R) broadcasts over the leading axis
    out.reshape(left_dim, 4, right_dim)[...] += np.matmul(
        gate, vec.reshape(left_dim, 4, right_dim))
