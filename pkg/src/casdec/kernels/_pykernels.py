"""Pure-Python/numpy reference implementations of the hot kernels."""

import numpy as np


def topk_indices(row, k):
    """Indices of the k largest entries, descending; ties -> lower index."""
    row = np.asarray(row)
    n = row.shape[0]
    k = min(k, n)
    # stable argsort of -row orders equal values by ascending index
    order = np.argsort(-row, kind="stable")
    return order[:k].astype(np.int64)


def lcs_length(a, b) -> int:
    """Length of the longest common subsequence of two id sequences."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        row_prev = prev
        for j, y in enumerate(b):
            if x == y:
                cur.append(row_prev[j] + 1)
            else:
                left = cur[j]
                up = row_prev[j + 1]
                cur.append(left if left >= up else up)
        prev = cur
    return prev[-1]
