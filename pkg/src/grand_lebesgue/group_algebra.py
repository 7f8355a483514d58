"""Finite abelian groups ``Z_n1 x ... x Z_nk`` with normalized Haar measure.

Elements are flat indices in row-major order over the factor shape.
Convolution carries the ``1/order`` factor, so constants are idempotent and
``order * delta_0`` is the unit.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .measure_space import (ArrayLike, DomainError,
                            MeasureSpace, as_function)


class UnsupportedGroupError(ValueError):
    pass


@dataclass(frozen=True)
class GroupStructure:
    factors: tuple
    order: int = field(init=False)

    def __post_init__(self):
        fs = tuple(int(n) for n in self.factors)
        if not fs or any(n < 1 for n in fs):
            raise DomainError("factors must be a nonempty sequence of integers >= 1")
        object.__setattr__(self, "factors", fs)
        object.__setattr__(self, "order", math.prod(fs))

    @classmethod
    def cyclic(cls, n: int) -> "GroupStructure":
        return cls((n,))

    @classmethod
    def parse(cls, text: str) -> "GroupStructure":
        """Parse ``"Z8"`` or ``"Z2xZ3"`` (``×`` and ``*`` also separate factors)."""
        pieces = re.split(r"\s*[x×*]\s*", text.strip())
        factors = []
        for piece in pieces:
            m = re.fullmatch(r"[Zz]_?(\d+)", piece)
            if not m:
                raise ValueError(f"cannot parse group {text!r}")
            factors.append(int(m.group(1)))
        return cls(tuple(factors))

    def __str__(self):
        return "x".join(f"Z{n}" for n in self.factors)

    @property
    def is_cyclic(self) -> bool:
        return len(self.factors) == 1

    def to_multi(self, x: int) -> tuple:
        self._check_element(x)
        return tuple(int(c) for c in np.unravel_index(x, self.factors))

    def from_multi(self, coords: Sequence[int]) -> int:
        coords = [int(c) % n for c, n in zip(coords, self.factors)]
        return int(np.ravel_multi_index(coords, self.factors))

    def _check_element(self, x):
        if not (isinstance(x, (int, np.integer)) and 0 <= x < self.order):
            raise DomainError(f"{x!r} is not an element of {self}")

    @cached_property
    def _coords(self) -> np.ndarray:
        return np.stack(np.unravel_index(np.arange(self.order), self.factors), axis=1)

    @cached_property
    def subtraction_table(self) -> np.ndarray:
        """``table[x, y]`` is the index of ``x - y``."""
        c = self._coords
        diff = (c[:, None, :] - c[None, :, :]) % np.array(self.factors)
        table = np.ravel_multi_index(tuple(np.moveaxis(diff, -1, 0)), self.factors)
        table.setflags(write=False)
        return table

    def add(self, x: int, y: int) -> int:
        self._check_element(x)
        self._check_element(y)
        return self.from_multi(np.add(self.to_multi(x), self.to_multi(y)))

    def neg(self, x: int) -> int:
        self._check_element(x)
        return self.from_multi([-c for c in self.to_multi(x)])


def haar_space(group: GroupStructure) -> MeasureSpace:
    return MeasureSpace.uniform(group.order)


def _pair(f, g, group):
    space = haar_space(group)
    return as_function(f, space), as_function(g, space)


def convolve(f: ArrayLike, g: ArrayLike, group: GroupStructure) -> np.ndarray:
    """``(f*g)(x) = (1/order) sum_y f(y) g(x-y)``, evaluated directly."""
    f, g = _pair(f, g, group)
    return (g[group.subtraction_table] @ f) / group.order


def convolve_fft(f: ArrayLike, g: ArrayLike, group: GroupStructure) -> np.ndarray:
    """Same as :func:`convolve` through the separable multidimensional DFT."""
    f, g = _pair(f, g, group)
    shape = group.factors
    prod = np.fft.fftn(f.reshape(shape)) * np.fft.fftn(g.reshape(shape))
    return np.real(np.fft.ifftn(prod)).ravel() / group.order


def translate(f: ArrayLike, x: int, group: GroupStructure) -> np.ndarray:
    """``(tau_x f)(y) = f(y - x)``."""
    v = as_function(f, haar_space(group))
    group._check_element(x)
    return v[group.subtraction_table[:, x]]


def unit(group: GroupStructure) -> np.ndarray:
    """``order * delta_0``, the identity for normalized convolution."""
    e = np.zeros(group.order)
    e[0] = group.order
    return e


@dataclass(frozen=True, eq=False)
class ApproximateIdentityFamily:
    members: tuple
    l1_bound: float
    group: GroupStructure
    labels: tuple = ()

    def __post_init__(self):
        space = haar_space(self.group)
        members = tuple(as_function(m, space) for m in self.members)
        object.__setattr__(self, "members", members)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(len(members))))
        for m in members:
            if float(np.dot(space.weights, np.abs(m))) > self.l1_bound + 1e-12:
                raise DomainError("member exceeds the family's L1 bound")

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @classmethod
    def unit_family(cls, group: GroupStructure) -> "ApproximateIdentityFamily":
        return cls((unit(group),), 1.0, group, ("unit",))


def fejer_kernel(n: int, m: int) -> np.ndarray:
    """``F_m(j) = (1/m) (sin(pi m j/n) / sin(pi j/n))^2``, ``F_m(0) = m``."""
    if not 1 <= m < n:
        raise DomainError(f"Fejer order must lie in [1, {n}), got {m}")
    j = np.arange(1, n)
    out = np.empty(n)
    out[0] = m
    out[1:] = (np.sin(np.pi * m * j / n) / np.sin(np.pi * j / n)) ** 2 / m
    return out


def default_fejer_orders(n: int) -> list[int]:
    """``1, 2, 4, ...`` below ``n``, closed by ``n - 1``."""
    orders = [1 << k for k in range(max(n - 1, 1).bit_length()) if (1 << k) < n]
    if n > 1 and orders[-1] != n - 1:
        orders.append(n - 1)
    return orders


def fejer_family(group: GroupStructure,
                 orders: Sequence[int] | None = None) -> ApproximateIdentityFamily:
    if not group.is_cyclic:
        raise UnsupportedGroupError("Fejer kernels are defined on cyclic groups only")
    n = group.order
    orders = default_fejer_orders(n) if orders is None else list(orders)
    members = [fejer_kernel(n, m) for m in orders]
    return ApproximateIdentityFamily(tuple(members), 1.0, group, tuple(orders))


