"""
m-full Integers and Admissible Coordinate Values

An integer is m-full when every prime valuation is 0 or >= m. These sets give the
admissible absolute values of a projective coordinate under the Campana condition;
m-th powers play the same role for the Darmon condition.

Author: Mohammed Ismail AbdElmageid
"""
import math
from typing import List

import numpy as np
from sympy import factorint, integer_nthroot, primerange

from core.points import Variant


def is_mfull(n: int, m: int) -> bool:
    if n < 1:
        return False
    return all(e >= m for e in factorint(n).values())


def enumerate_mfull(limit: int, m: int) -> List[int]:
    """Sorted m-full positive integers <= limit

    Products of prime powers p^a with a >= m, built prime by prime in increasing order.
    """
    limit = int(limit)
    if limit < 1:
        return []
    if m <= 1:
        return list(range(1, limit + 1))
    root, _ = integer_nthroot(limit, m)
    primes = list(primerange(2, root + 1))
    found = []

    def extend(start: int, current: int):
        found.append(current)
        for index in range(start, len(primes)):
            p = primes[index]
            power = current * p ** m
            if power > limit:
                break
            while power <= limit:
                extend(index + 1, power)
                power *= p

    extend(0, 1)
    return sorted(found)


def enumerate_powers(limit: int, m: int) -> List[int]:
    """k^m <= limit for k >= 1"""
    limit = int(limit)
    if limit < 1:
        return []
    root, _ = integer_nthroot(limit, m)
    return [k ** m for k in range(1, root + 1)]


def admissible_values(limit: int, m, variant: Variant) -> np.ndarray:
    """Absolute values a coordinate may take when its divisor carries weight m"""
    limit = int(limit)
    if limit < 1:
        return np.zeros(0, dtype=np.int64)
    if m == math.inf:
        return np.array([1], dtype=np.int64)
    if m == 1 or variant is Variant.WEAK_CAMPANA:
        return np.arange(1, limit + 1, dtype=np.int64)
    if variant.is_darmon_family:
        return np.array(enumerate_powers(limit, m), dtype=np.int64)
    return np.array(enumerate_mfull(limit, m), dtype=np.int64)
