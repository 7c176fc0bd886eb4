"""Enumeration of finite matrix groups and subgroup machinery.

Group elements are identified by a quantized hash key (each real and
imaginary component rounded to a ``1e-6`` grid) and every hash hit is
confirmed by a Frobenius-distance check against ``eq_tol``. New elements are
always formed as (stored element) x (generator) so round-off does not
compound through re-multiplication of derived products.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np

from .errors import (
    DimensionMismatchError,
    GroupTooLargeError,
    NotFiniteGroupError,
    OrderCapExceededError,
    SingularGeneratorError,
    SingularMatrixError,
)
from .linalg import DEFAULT_TOL, Tolerance, as_matrix, eigenvalues, identity, mat_inverse

HASH_GRID = 1e-6
DEFAULT_MAX_ORDER = 1_000_000
# eigenvalue moduli of a finite-order generator must be 1; allowed slack
UNIT_MODULUS_SLACK = 1e-6
# full Cayley table is precomputed up to this order
TABLE_LIMIT = 4096


def hash_key(m: np.ndarray) -> bytes:
    q = np.rint(np.ascontiguousarray(m).view(np.float64) / HASH_GRID).astype(np.int64)
    return q.tobytes()


@dataclass(frozen=True)
class SubgroupHandle:
    member_indices: tuple[int, ...]
    generator_indices: tuple[int, ...] = ()

    @property
    def order(self) -> int:
        return len(self.member_indices)

    def __contains__(self, idx) -> bool:
        return idx in self._members

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.member_indices)


@dataclass(eq=False)
class FiniteMatrixGroup:
    """An enumerated finite group of ``n x n`` complex matrices.

    ``elements[0]`` is the identity. Products and inverses are resolved to
    element indices through :meth:`lookup` and cached.
    """

    dim: int
    elements: np.ndarray
    generator_indices: tuple[int, ...]
    tol: Tolerance = DEFAULT_TOL
    hash_index: dict = field(default_factory=dict, repr=False)
    _mul_cache: dict = field(default_factory=dict, repr=False)
    _inv_cache: dict = field(default_factory=dict, repr=False)
    _table: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if not self.hash_index:
            for i, e in enumerate(self.elements):
                self.hash_index.setdefault(hash_key(e), []).append(i)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return self.order

    def lookup(self, m) -> int | None:
        m = np.asarray(m, dtype=np.complex128)
        if m.shape != (self.dim, self.dim):
            raise DimensionMismatchError(f"expected {self.dim}x{self.dim}, got {m.shape}")
        for i in self.hash_index.get(hash_key(m), ()):
            if np.linalg.norm(self.elements[i] - m) <= self.tol.eq_tol:
                return i
        return None

    def _resolve(self, m, what) -> int:
        k = self.lookup(m)
        if k is None:
            raise NotFiniteGroupError(
                f"{what} is not within eq_tol of any element; the set is not closed "
                "(numerical breakdown or not a group)"
            )
        return k

    def mul(self, i: int, j: int) -> int:
        if self._table is not None:
            return int(self._table[i, j])
        key = (i, j)
        k = self._mul_cache.get(key)
        if k is None:
            k = self._resolve(self.elements[i] @ self.elements[j], f"product e{i}*e{j}")
            self._mul_cache[key] = k
        return k

    def inv(self, i: int) -> int:
        k = self._inv_cache.get(i)
        if k is None:
            k = self._resolve(mat_inverse(self.elements[i]), f"inverse of e{i}")
            self._inv_cache[i] = k
        return k

    def cayley_table(self) -> np.ndarray:
        """Full multiplication table (``table[i, j]`` is the index of ``e_i e_j``)."""
        if self._table is None:
            if self.order > TABLE_LIMIT:
                raise GroupTooLargeError(f"Cayley table limited to order {TABLE_LIMIT}")
            table = np.empty((self.order, self.order), dtype=np.int64)
            for i in range(self.order):
                prods = self.elements[i] @ self.elements
                for j in range(self.order):
                    table[i, j] = self._resolve(prods[j], f"product e{i}*e{j}")
            self._table = table
        return self._table


def _check_generator(k: int, g: np.ndarray, residual_tol: float) -> None:
    try:
        mat_inverse(g, residual_tol=max(residual_tol, 1e-9))
    except SingularMatrixError as exc:
        raise SingularGeneratorError(f"generator {k} is singular: {exc}") from exc
    moduli = np.abs(eigenvalues(g))
    worst = float(np.max(np.abs(moduli - 1.0)))
    if worst > UNIT_MODULUS_SLACK:
        raise NotFiniteGroupError(
            f"generator {k} has an eigenvalue of modulus {moduli[np.argmax(np.abs(moduli - 1))]:.12g}; "
            "finite-order elements have all eigenvalues on the unit circle"
        )


def close_generators(gens, max_order: int = DEFAULT_MAX_ORDER, tol: Tolerance = DEFAULT_TOL,
                     dim: int | None = None) -> FiniteMatrixGroup:
    """Breadth-first closure of ``gens`` under right multiplication.

    ``dim`` is only needed when ``gens`` is empty. Raises
    :class:`OrderCapExceededError` once more than ``max_order`` distinct
    elements appear, and :class:`NotFiniteGroupError` when a generator cannot
    have finite order or the entries diverge.
    """
    gens = [as_matrix(g) for g in gens]
    if not gens and dim is None:
        raise DimensionMismatchError("dimension is required for an empty generator list")
    n = gens[0].shape[0] if gens else dim
    for k, g in enumerate(gens):
        if g.shape != (n, n):
            raise DimensionMismatchError(f"generator {k} has shape {g.shape}, expected {(n, n)}")
        _check_generator(k, g, tol.residual_tol)

    elements = [np.array(identity(n))]
    index = {hash_key(elements[0]): [0]}

    def find(m):
        for i in index.get(hash_key(m), ()):
            if np.linalg.norm(elements[i] - m) <= tol.eq_tol:
                return i
        return None

    gen_indices = []
    queue = deque([0])
    # seed generators first so their indices follow insertion order
    for g in gens:
        k = find(g)
        if k is None:
            if len(elements) >= max_order:
                raise OrderCapExceededError(f"group order exceeds max_order={max_order}")
            k = len(elements)
            elements.append(np.array(g))
            index.setdefault(hash_key(g), []).append(k)
            queue.append(k)
        gen_indices.append(k)

    while queue:
        i = queue.popleft()
        for g in gens:
            m = elements[i] @ g
            if not np.all(np.isfinite(m)):
                raise NotFiniteGroupError("matrix entries diverged during closure; the generators do not generate a finite group")
            if find(m) is None:
                if len(elements) >= max_order:
                    raise OrderCapExceededError(
                        f"group order exceeds max_order={max_order}; finiteness not certified"
                    )
                elements.append(m)
                index.setdefault(hash_key(m), []).append(len(elements) - 1)
                queue.append(len(elements) - 1)

    stack = np.array(elements, dtype=np.complex128).reshape(len(elements), n, n)
    stack.setflags(write=False)
    return FiniteMatrixGroup(dim=n, elements=stack, generator_indices=tuple(gen_indices),
                             tol=tol, hash_index=index)


def element_lookup(g: FiniteMatrixGroup, m) -> int | None:
    return g.lookup(m)


def subgroup_generated(g: FiniteMatrixGroup, seed_indices) -> SubgroupHandle:
    seeds = sorted({int(s) for s in seed_indices})
    for s in seeds:
        if not 0 <= s < g.order:
            raise IndexError(f"element index {s} out of range")
    members = {0, *seeds}
    queue = deque(members)
    while queue:
        i = queue.popleft()
        for s in seeds:
            k = g.mul(i, s)
            if k not in members:
                members.add(k)
                queue.append(k)
    return SubgroupHandle(tuple(sorted(members)), tuple(seeds))


def whole_group(g: FiniteMatrixGroup) -> SubgroupHandle:
    return SubgroupHandle(tuple(range(g.order)), tuple(g.generator_indices))


def commutation_residual(g: FiniteMatrixGroup, s: SubgroupHandle) -> tuple[float, tuple[int, int] | None]:
    """Largest ``||e_i e_j - e_j e_i||_F`` over pairs in ``s`` and the pair attaining it."""
    idx = np.array(s.member_indices)
    mats = g.elements[idx]
    worst, pair = 0.0, None
    for a, i in enumerate(idx):
        left = mats[a] @ mats
        right = mats @ mats[a]
        r = np.linalg.norm(left - right, axis=(1, 2))
        b = int(np.argmax(r))
        if r[b] > worst:
            worst, pair = float(r[b]), (int(i), int(idx[b]))
    return worst, pair


def is_abelian(g: FiniteMatrixGroup, s: SubgroupHandle, tol: Tolerance = DEFAULT_TOL) -> bool:
    return commutation_residual(g, s)[0] <= tol.residual_tol


def normality_violation(g: FiniteMatrixGroup, s: SubgroupHandle) -> tuple[int, int] | None:
    """First ``(y, i)`` with ``y^-1 e_i y`` outside ``s``, ``y`` ranging over the generators."""
    members = set(s.member_indices)
    for y in g.generator_indices:
        y_inv = g.inv(y)
        for i in s.member_indices:
            if g.mul(g.mul(y_inv, i), y) not in members:
                return (y, i)
    return None


def is_normal(g: FiniteMatrixGroup, s: SubgroupHandle, tol: Tolerance = DEFAULT_TOL) -> bool:
    return normality_violation(g, s) is None


def left_cosets(g: FiniteMatrixGroup, s: SubgroupHandle) -> list[int]:
    """One representative per left coset ``x s``, the smallest index in each."""
    seen = np.zeros(g.order, dtype=bool)
    reps = []
    for x in range(g.order):
        if seen[x]:
            continue
        reps.append(x)
        for h in s.member_indices:
            seen[g.mul(x, h)] = True
    return reps


def cyclic_subgroup(g: FiniteMatrixGroup, i: int) -> SubgroupHandle:
    return subgroup_generated(g, [i])


def subgroup_lattice(g: FiniteMatrixGroup, max_group_order: int = 64) -> list[SubgroupHandle]:
    """Every subgroup, as the join-closure of the cyclic subgroups.

    Each subgroup is a join of cyclic subgroups, so closing the family under
    joins with cyclic subgroups reaches the same fixpoint as closing under
    all pairwise joins.
    """
    if g.order > max_group_order:
        raise GroupTooLargeError(f"|G| = {g.order} exceeds max_group_order = {max_group_order}")
    g.cayley_table()
    cyclic = {}
    for i in range(g.order):
        h = cyclic_subgroup(g, i)
        cyclic.setdefault(h.member_indices, h)
    found = dict(cyclic)
    frontier = list(found)
    while frontier:
        new = []
        for members in frontier:
            for c in cyclic:
                if set(c) <= set(members):
                    continue
                h = subgroup_generated(g, set(members) | set(c))
                if h.member_indices not in found:
                    found[h.member_indices] = h
                    new.append(h.member_indices)
        frontier = new
    return sorted(found.values(), key=lambda h: (h.order, h.member_indices))


def pairwise_join_fixpoint(g: FiniteMatrixGroup) -> set[tuple[int, ...]]:
    """Literal pairwise-join fixpoint over all found subgroups (slow; cross-check only)."""
    family = {cyclic_subgroup(g, i).member_indices for i in range(g.order)}
    while True:
        joins = {subgroup_generated(g, set(a) | set(b)).member_indices
                 for a, b in combinations(family, 2)}
        if joins <= family:
            return family
        family |= joins
