"""Generic seeds in a rational-function field: ordinary mutation, the
log-volume form's mutation invariance, and frozen-variable modification by
Casimir-times-monomial replacements."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DependentSystem, NotCasimir
from .poisson_core import PoissonStructure, is_log_canonical, log_volume
from .polyring import Poly, RatFun, VarSet, jacobian, numeric_rank
from .rationals import QQ, QQ0, QQ1

SYMMETRIZER_BOUND = 12


@dataclass
class Seed:
    """(cluster, exchange set, integer matrix) with the cluster a free
    transcendence basis; indices are 1-based, M has a row per cluster entry
    and a column per exchange index."""

    vars: VarSet
    cluster: list
    ex: list
    M: list
    labels: list = None

    def __post_init__(self):
        self.cluster = [
            f if isinstance(f, RatFun) else RatFun.from_poly(f) for f in self.cluster
        ]
        n = len(self.cluster)
        if self.labels is None:
            self.labels = [f"phi{i}" for i in range(1, n + 1)]
        if sorted(set(self.ex)) != sorted(self.ex) or any(
            not 1 <= k <= n for k in self.ex
        ):
            raise ValueError("bad exchange set")
        if len(self.M) != n or any(len(row) != len(self.ex) for row in self.M):
            raise ValueError("matrix shape must be |cluster| x |ex|")

    def col_of(self, k: int) -> int:
        return self.ex.index(k)

    def principal_part(self):
        return [[self.M[i - 1][self.col_of(j)] for j in self.ex] for i in self.ex]

    def check(self, rng=None, samples: int = 8) -> None:
        """Algebraic independence (numeric Jacobian rank) and
        skew-symmetrizability of the principal part."""
        if rng is None:
            rng = random.Random(0)
        r = numeric_rank(jacobian(self.cluster, self.vars), rng, retries=samples)
        if r != len(self.cluster):
            raise DependentSystem("cluster is not algebraically independent")
        if self.ex and skew_symmetrizer(self.principal_part()) is None:
            raise ValueError("principal part is not skew-symmetrizable")

    def copy(self) -> "Seed":
        return Seed(
            self.vars,
            list(self.cluster),
            list(self.ex),
            [list(row) for row in self.M],
            list(self.labels),
        )


def skew_symmetrizer(B, bound: int = SYMMETRIZER_BOUND):
    """A positive integer diagonal d with d_i B_ij = -d_j B_ji, entries at
    most ``bound``; None when no such diagonal exists."""
    n = len(B)
    for i in range(n):
        if B[i][i] != 0:
            return None
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        queue = [start]
        while queue:
            i = queue.pop()
            for j in range(n):
                if B[i][j] == 0 and B[j][i] == 0:
                    continue
                if B[i][j] == 0 or B[j][i] == 0:
                    return None
                ratio = Fraction(-B[j][i], B[i][j])  # d_j = d_i * B_ij / (-B_ji)... solve
                if ratio <= 0:
                    return None
                val = d[i] / ratio
                if d[j] is None:
                    d[j] = val
                    queue.append(j)
                elif d[j] != val:
                    return None
    # scale each value to a positive integer
    denom = 1
    for x in d:
        denom = denom * x.denominator // _gcd(denom, x.denominator)
    out = [int(x * denom) for x in d]
    g = 0
    for x in out:
        g = _gcd(g, x)
    out = [x // g for x in out]
    if any(x <= 0 or x > bound for x in out):
        return None
    # verify
    for i in range(n):
        for j in range(n):
            if out[i] * B[i][j] != -out[j] * B[j][i]:
                return None
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a) if a else abs(b)


def mutate(s: Seed, k: int) -> Seed:
    """Exchange the k-th cluster variable and mutate the matrix."""
    if k not in s.ex:
        raise ValueError(f"direction {k} is not exchangeable")
    c = s.col_of(k)
    n = len(s.cluster)
    pos = RatFun.const(s.vars, 1)
    neg = RatFun.const(s.vars, 1)
    for j in range(1, n + 1):
        mjk = s.M[j - 1][c]
        if mjk > 0:
            pos = pos * s.cluster[j - 1] ** mjk
        elif mjk < 0:
            neg = neg * s.cluster[j - 1] ** (-mjk)
    new_phi = (pos + neg) / s.cluster[k - 1]

    newM = [list(row) for row in s.M]
    for i in range(1, n + 1):
        for jcol, j in enumerate(s.ex):
            if i == k or j == k:
                newM[i - 1][jcol] = -s.M[i - 1][jcol]
            else:
                mik = s.M[i - 1][c]
                mkj = s.M[k - 1][jcol]
                newM[i - 1][jcol] = s.M[i - 1][jcol] + (
                    abs(mik) * mkj + mik * abs(mkj)
                ) // 2
    cluster = list(s.cluster)
    cluster[k - 1] = new_phi
    return Seed(s.vars, cluster, list(s.ex), newM, list(s.labels))


def generalized_mutate(s: Seed, k: int, exchange_sum: RatFun) -> Seed:
    """Abstract generalized exchange: replace the k-th variable by
    (caller-supplied sum of monomials in the other variables) / phi_k; the
    matrix is carried along unchanged."""
    if k not in s.ex:
        raise ValueError(f"direction {k} is not exchangeable")
    cluster = list(s.cluster)
    cluster[k - 1] = exchange_sum / s.cluster[k - 1]
    return Seed(s.vars, cluster, list(s.ex), [list(r) for r in s.M], list(s.labels))


def seed_log_volume(s: Seed):
    if len(s.cluster) != len(s.vars):
        raise DependentSystem("log-volume requires |cluster| = |vars|")
    return log_volume(s.cluster, s.vars)


def log_volume_invariance(s: Seed, path) -> bool:
    """The log-volume form changes at most by sign along a mutation path."""
    mu0 = seed_log_volume(s).coefficient
    cur = s
    for k in path:
        cur = mutate(cur, k)
    mu1 = seed_log_volume(cur).coefficient
    return mu1 == mu0 or mu1 == -mu0


@dataclass
class FrozenModification:
    """phi_bar_j = c_j * (monomial in the frozen variables); ``casimirs``
    maps a frozen index to c_j and ``monomials`` to {frozen index: exponent}."""

    casimirs: dict
    monomials: dict

    @staticmethod
    def identity(frozen_indices, vars: VarSet) -> "FrozenModification":
        one = RatFun.const(vars, 1)
        return FrozenModification(
            {j: one for j in frozen_indices},
            {j: {j: 1} for j in frozen_indices},
        )

    def replacement(self, j: int, seed: Seed) -> RatFun:
        out = self.casimirs[j]
        for t, e in self.monomials[j].items():
            out = out * seed.cluster[t - 1] ** e
        return out


def modified_cluster(s: Seed, mod: FrozenModification):
    frozen = [j for j in range(1, len(s.cluster) + 1) if j not in s.ex]
    if sorted(mod.casimirs) != frozen or sorted(mod.monomials) != frozen:
        raise ValueError("modification must cover exactly the frozen indices")
    out = []
    for j in range(1, len(s.cluster) + 1):
        if j in s.ex:
            out.append(s.cluster[j - 1])
        else:
            out.append(mod.replacement(j, s))
    return out


def modified_log_volume(
    s: Seed, mod: FrozenModification, pi: PoissonStructure, spot_check: bool = True
):
    """Log-volume of the modified cluster; certifies the Casimir property of
    every designated factor and, when possible, spot-checks invariance under
    one mutation."""
    for j, c in mod.casimirs.items():
        if c.is_constant():
            continue
        for nm in pi.vars.names:
            br = pi.bracket(c, RatFun.var(pi.vars, nm))
            if not br.is_zero():
                raise NotCasimir(f"factor at index {j} moves coordinate {nm}")
    mu = log_volume(modified_cluster(s, mod), s.vars)
    if spot_check and s.ex:
        s2 = mutate(s, s.ex[0])
        mu2 = log_volume(modified_cluster(s2, mod), s.vars)
        if not (mu2.coefficient == mu.coefficient or mu2.coefficient == -mu.coefficient):
            raise DependentSystem("modified log-volume is not mutation invariant")
    return mu
