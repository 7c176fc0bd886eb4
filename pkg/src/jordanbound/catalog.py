"""Benchmark groups with known orders and known pipeline outcomes.

Every builder returns a list of generator matrices. :func:`build_entry`
wraps a builder with its expected order and expected pipeline index.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import IllConditionedError, InvalidParameters, UnknownCatalogEntry
from .linalg import as_matrix, condition_number, mat_inverse

MAX_CONJUGATOR_CONDITION = 10.0


def _root_of_unity(m: int) -> complex:
    return cmath.exp(2j * math.pi / m)


def _cyclic_index(m: int) -> int:
    # |1 - e^{2 pi i / m}| = 2 sin(pi/m) < 1/2 exactly when m >= 13
    return 1 if m == 1 or 2 * math.sin(math.pi / m) < 0.5 else m


def make_scalar_group(n: int, m: int) -> list[np.ndarray]:
    """``{zeta I_n : zeta^m = 1}``, generated by ``e^{2 pi i/m} I_n``."""
    _positive(n=n, m=m)
    return [as_matrix(_root_of_unity(m) * np.eye(n))]


def make_cyclic_rotation(m: int) -> list[np.ndarray]:
    _positive(m=m)
    return [as_matrix([[_root_of_unity(m)]])]


def _zero_sum_matrix(perm: list[int]) -> np.ndarray:
    """Matrix of a coordinate permutation on the zero-sum subspace, basis ``e_i - e_{i+1}``.

    A zero-sum vector ``w`` has coordinates ``c_k = w_1 + ... + w_k`` in that
    basis, so the matrix is ``partial_sums @ P @ B`` with integer entries.
    """
    k = len(perm)
    p = np.zeros((k, k))
    for i, j in enumerate(perm):
        p[j, i] = 1.0
    basis = np.zeros((k, k - 1))
    for i in range(k - 1):
        basis[i, i], basis[i + 1, i] = 1.0, -1.0
    partial = np.tril(np.ones((k - 1, k)))
    return partial @ p @ basis


def make_symmetric_zero_sum(n: int) -> list[np.ndarray]:
    """``Sym(n+1)`` permuting coordinates of the zero-sum hyperplane in ``C^{n+1}``.

    Generators are the transposition ``(1 2)`` and the cycle ``(1 2 ... n+1)``;
    for ``n = 1`` both are ``[[-1]]`` so only one is returned.
    """
    _positive(n=n)
    swap = list(range(n + 1))
    swap[0], swap[1] = 1, 0
    cycle = [(i + 1) % (n + 1) for i in range(n + 1)]
    gens = [as_matrix(_zero_sum_matrix(swap))]
    if n > 1:
        gens.append(as_matrix(_zero_sum_matrix(cycle)))
    return gens


def make_quaternion_q8() -> list[np.ndarray]:
    return [as_matrix([[1j, 0], [0, -1j]]), as_matrix([[0, 1], [-1, 0]])]


def make_block_product(*factors) -> list[np.ndarray]:
    """Block-diagonal direct product; each factor is a list of generators of one block."""
    if not factors:
        raise InvalidParameters("block product needs at least one factor")
    dims = [_factor_dim(f) for f in factors]
    n = sum(dims)
    gens = []
    offset = 0
    for f, d in zip(factors, dims):
        for g in f:
            big = np.eye(n, dtype=np.complex128)
            big[offset:offset + d, offset:offset + d] = g
            gens.append(as_matrix(big))
        offset += d
    return gens


def _factor_dim(f) -> int:
    if not f:
        raise InvalidParameters("each factor needs at least one generator (use [[1]] for a trivial block)")
    return np.asarray(f[0]).shape[0]


def conjugate_group(gens, s) -> list[np.ndarray]:
    """``s g s^-1`` for every generator; ``s`` must have condition number at most 10."""
    s = as_matrix(s)
    cond = condition_number(s)
    if cond > MAX_CONJUGATOR_CONDITION:
        raise IllConditionedError(f"conjugator condition number {cond:.3g} exceeds {MAX_CONJUGATOR_CONDITION:g}")
    s_inv = mat_inverse(s)
    return [as_matrix(s @ g @ s_inv) for g in gens]


def default_conjugator(n: int) -> np.ndarray:
    """Fixed non-unitary basis change: ``[[2]]`` for n = 1, else identity plus ones on the superdiagonal.

    Condition numbers: 2.62 (n = 2), 4.05 (n = 3).
    """
    if n == 1:
        return as_matrix([[2.0]])
    return as_matrix(np.eye(n) + np.eye(n, k=1))


def _positive(**params):
    for key, value in params.items():
        if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 1:
            raise InvalidParameters(f"{key} must be a positive integer, got {value!r}")


@dataclass
class CatalogEntry:
    name: str
    parameters: dict
    expected_order: int
    expected_index: int | None
    generators: list = field(repr=False)
    dim: int = 1
    conjugated: bool = False

    @property
    def label(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in self.parameters.items() if k != "parts")
        parts = self.parameters.get("parts")
        if parts:
            args = "+".join(p.label for p in parts)
        tag = f"{self.name}({args})"
        return f"{tag}^S" if self.conjugated else tag

    def conjugate(self, s=None) -> CatalogEntry:
        s = default_conjugator(self.dim) if s is None else s
        return CatalogEntry(self.name, self.parameters, self.expected_order, self.expected_index,
                            conjugate_group(self.generators, s), self.dim, True)


def scalar(n: int, m: int) -> CatalogEntry:
    return CatalogEntry("scalar", {"n": n, "m": m}, m, _cyclic_index(m), make_scalar_group(n, m), n)


def cyclic(m: int) -> CatalogEntry:
    return CatalogEntry("cyclic", {"m": m}, m, _cyclic_index(m), make_cyclic_rotation(m), 1)


def sym_zero_sum(n: int) -> CatalogEntry:
    order = math.factorial(n + 1)
    # every non-identity permutation has an eigenvalue at distance >= sqrt(3) from 1
    return CatalogEntry("sym-zero-sum", {"n": n}, order, order, make_symmetric_zero_sum(n), n)


def q8() -> CatalogEntry:
    return CatalogEntry("q8", {}, 8, 8, make_quaternion_q8(), 2)


def block(*parts: CatalogEntry) -> CatalogEntry:
    order = math.prod(p.expected_order for p in parts)
    # distances of block-diagonal elements are the max over blocks, so A = A_1 x A_2 x ...
    index = None
    if all(p.expected_index is not None for p in parts):
        index = math.prod(p.expected_index for p in parts)
    gens = make_block_product(*[p.generators for p in parts])
    return CatalogEntry("block", {"parts": list(parts)}, order, index, gens, sum(p.dim for p in parts))


BUILDERS = {
    "scalar": (scalar, ("n", "m")),
    "cyclic": (cyclic, ("m",)),
    "sym-zero-sum": (sym_zero_sum, ("n",)),
    "q8": (q8, ()),
}


def build_entry(name: str, parameters: dict | None = None, parts=None) -> CatalogEntry:
    """Look up a catalog builder by name and call it with integer parameters.

    ``block`` takes ``parts``, a list of ``(name, parameters)`` pairs.
    """
    parameters = dict(parameters or {})
    if name == "block":
        if parameters:
            raise InvalidParameters(f"block takes parts only, got {sorted(parameters)}")
        if not parts:
            raise InvalidParameters("block needs at least one part")
        return block(*[build_entry(pn, pp) for pn, pp in parts])
    if name not in BUILDERS:
        raise UnknownCatalogEntry(f"unknown catalog entry {name!r}; known: {', '.join(sorted(BUILDERS) + ['block'])}")
    builder, names = BUILDERS[name]
    if set(parameters) != set(names):
        raise InvalidParameters(f"{name} takes parameters {list(names)}, got {sorted(parameters)}")
    _positive(**parameters)
    return builder(**{k: parameters[k] for k in names})


def acceptance_catalog(conjugated: bool = True) -> list[CatalogEntry]:
    """Benchmark set: scalar m in {1,4,6}, cyclic 1..16, sym-zero-sum 1..3, Q8, C13 + Sym(3)."""
    entries = [scalar(2, 1), scalar(3, 4), scalar(2, 6)]
    entries += [cyclic(m) for m in range(1, 17)]
    entries += [sym_zero_sum(n) for n in (1, 2, 3)]
    entries += [q8(), block(cyclic(13), sym_zero_sum(2))]
    if conjugated:
        entries += [e.conjugate() for e in list(entries)]
    return entries
