"""Cluster functions on SL(n+1) built from a double reduced word of the
longest element: the frozen-variable modification, lowest degree terms at
the identity via truncated exponentials, the selection of a polynomial
integrable system on the linearization, and the index of the dual Lie
algebra via Kostant's cascade of strongly orthogonal roots."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import CountShortfall, TruncationInsufficient, WrongWord
from .poisson_core import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    IntegrableSystemReport,
    LinearPoissonStructure,
    PoissonStructure,
    involutivity_certificate,
)
from .polyring import (
    Jet,
    Poly,
    PolyMatrix,
    RatFun,
    VarSet,
    det,
    jacobian,
    jet_lowest_term,
    lowest_term,
    numeric_rank,
    truncated_exp,
)
from .rationals import QQ, QQ0, QQ1
from .typea import (
    ReducedWord,
    WeylElt,
    bott_samelson,
    fundamental_weight,
    kplus_kminus,
    longest_word,
    pairing,
    simple_root,
    weyl_matrix,
)


@dataclass
class DoubleWord:
    neg: ReducedWord
    pos: ReducedWord

    def __post_init__(self):
        m = self.neg.m
        w0 = WeylElt.longest(m)
        if self.neg.element() != w0 or self.pos.element() != w0:
            raise WrongWord("both halves must be reduced words of the longest element")


def standard_double_word(n: int) -> DoubleWord:
    w = longest_word(n + 1)
    return DoubleWord(w, w)


# -- the ambient chart -------------------------------------------------------


def sl_varset(n: int) -> VarSet:
    """Free coordinates of a traceless (n+1)x(n+1) matrix: all entries except
    the last diagonal one."""
    m = n + 1
    names = [
        f"u{i}{j}" for i in range(1, m + 1) for j in range(1, m + 1)
        if (i, j) != (m, m)
    ]
    return VarSet(names)


def sl_u_entry(vars: VarSet, i: int, j: int, m: int) -> Poly:
    if (i, j) != (m, m):
        return Poly.var(vars, f"u{i}{j}")
    out = Poly.zero(vars)
    for t in range(1, m):
        out = out - Poly.var(vars, f"u{t}{t}")
    return out


def sl_u_matrix(n: int, vars: VarSet = None) -> PolyMatrix:
    m = n + 1
    if vars is None:
        vars = sl_varset(n)
    return PolyMatrix(
        [[sl_u_entry(vars, i, j, m) for j in range(1, m + 1)] for i in range(1, m + 1)]
    )


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def sl_dual_linear_structure(n: int, check: bool = True) -> LinearPoissonStructure:
    """Linearization at the identity of the multiplicative structure on
    SL(n+1): the degree-1 part of (sign(p-i)+sign(q-j))/2 * x_iq * x_pj in
    exponential coordinates, restricted to traceless matrices."""
    m = n + 1
    vars = sl_varset(n)
    pairs = [(i, j) for i in range(1, m + 1) for j in range(1, m + 1) if (i, j) != (m, m)]
    size = len(pairs)
    mat = [[Poly.zero(vars) for _ in range(size)] for _ in range(size)]
    for a, (i, j) in enumerate(pairs):
        for b, (p, q) in enumerate(pairs):
            c = QQ(_sign(p - i) + _sign(q - j), 2)
            if c == 0:
                continue
            term = Poly.zero(vars)
            if i == q:
                term = term + sl_u_entry(vars, p, j, m)
            if p == j:
                term = term + sl_u_entry(vars, i, q, m)
            mat[a][b] = term * c
    return LinearPoissonStructure(vars, mat, check_jacobi=check)


def minor(mat: PolyMatrix, rows, cols):
    return det(mat.submatrix([r - 1 for r in sorted(rows)], [c - 1 for c in sorted(cols)]))


def interval(a: int, b: int):
    return list(range(a, b + 1))


# -- the cluster -------------------------------------------------------------


@dataclass
class BFZCluster:
    n: int
    dword: DoubleWord
    vars: VarSet
    order: int
    fs: list  # Jet, index i in [1, r]
    phis: list  # Jet, index k in [1, l0]
    psis: list  # Jet, index k in [1, l0]
    g_index: dict  # i -> k with psi_k the last occurrence of letter i
    gprimes: dict  # i in I2 -> Jet f_i g_i - f_{i*} g_{i*}
    I0: list
    I1: list
    I2: list

    @property
    def r(self) -> int:
        return self.n

    @property
    def l0(self) -> int:
        return len(self.phis)

    def istar(self, i: int) -> int:
        return self.n + 1 - i

    def g(self, i: int) -> Jet:
        return self.psis[self.g_index[i] - 1]

    def modified_functions(self):
        """The extended cluster after the frozen modification: f's, phi's and
        psi's, with the last-occurrence psi of each letter in I2 replaced by
        the corresponding difference function."""
        funcs = list(self.fs) + list(self.phis)
        replaced = {self.g_index[i]: i for i in self.I2}
        for k in range(1, self.l0 + 1):
            if k in replaced:
                funcs.append(self.gprimes[replaced[k]])
            else:
                funcs.append(self.psis[k - 1])
        return funcs

    def low(self, j: Jet):
        got = jet_lowest_term(j)
        if got is None:
            raise TruncationInsufficient("jet order too small for this function")
        return got


def _istar_sets(n: int):
    I0, I1, I2 = [], [], []
    for i in range(1, n + 1):
        istar = n + 1 - i
        if i == istar:
            I0.append(i)
        elif i < istar:
            I1.append(i)
        else:
            I2.append(i)
    return I0, I1, I2


def build_bfz(n: int, dword: DoubleWord = None, order: int = None, cap_factor: int = 4) -> BFZCluster:
    """Evaluate the extended cluster at a truncated exponential of a traceless
    matrix, doubling the jet order until every lowest term is certified exact."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if dword is None:
        dword = standard_double_word(n)
    m = n + 1
    if dword.neg.m != m:
        raise WrongWord(f"double word is for SL({dword.neg.m}), expected SL({m})")
    D = order if order is not None else max(n, 2)
    cap = max(cap_factor * n, D)
    while True:
        cluster = _build_at_order(n, dword, D)
        if cluster is not None:
            return cluster
        if D >= cap:
            raise TruncationInsufficient(f"jet order cap {cap} reached")
        D = min(2 * D, cap)


def _build_at_order(n, dword, D):
    m = n + 1
    vars = sl_varset(n)
    u = sl_u_matrix(n, vars)
    X = truncated_exp(u, D)
    w0 = WeylElt.longest(m)
    I0, I1, I2 = _istar_sets(n)

    fs = []
    for i in range(1, n + 1):
        fs.append(minor(X, interval(1, i), w0.act_set(interval(1, i))))

    neg = dword.neg
    phis = []
    for k in range(1, len(neg) + 1):
        ik = neg.letters[k - 1]
        rows = neg.prefix(k).act_set(interval(1, ik))
        cols = w0.act_set(interval(1, ik))
        phis.append(minor(X, rows, cols))

    pos = dword.pos
    l0 = len(pos)
    psis = []
    for k in range(1, l0 + 1):
        jk = pos.letters[k - 1]
        suffix = WeylElt.identity(m)
        for t in range(l0, k, -1):
            suffix = suffix * WeylElt.simple(pos.letters[t - 1], m)
        rows = w0.act_set(interval(1, jk))
        cols = suffix.act_set(interval(1, jk))
        psis.append(minor(X, rows, cols))

    g_index = {}
    for k in range(1, l0 + 1):
        g_index[pos.letters[k - 1]] = k

    gprimes = {}
    for i in I2:
        istar = m - i
        gp = fs[i - 1] * psis[g_index[i] - 1] - fs[istar - 1] * psis[g_index[istar] - 1]
        gprimes[i] = gp

    cluster = BFZCluster(
        n, dword, vars, D, fs, phis, psis, g_index, gprimes, I0, I1, I2
    )
    for f in cluster.modified_functions():
        if jet_lowest_term(f) is None:
            return None
    return cluster


# -- closed forms at the standard word ----------------------------------------


def gexp_formulas(n: int) -> dict:
    """The closed-form lowest terms at the standard double word, as
    polynomials in the plain traceless matrix (sign conventions are left
    open: every comparison is up to sign)."""
    m = n + 1
    vars = sl_varset(n)
    u = sl_u_matrix(n, vars)

    cluster_lows = set()
    for k in range(2, m + 1):
        for l in range(k, m + 1):
            if 2 * l <= n + k:
                cluster_lows.add(_sign_canonical(minor(u, interval(k, l), interval(n + k - l + 1, m))))
                cluster_lows.add(_sign_canonical(minor(u, interval(n + k - l + 1, m), interval(k, l))))

    f_lows = {}
    # the i x i minor formula requires i <= n+1-i
    for i in range(1, m // 2 + 1):
        f_lows[i] = minor(u, interval(1, i), interval(n - i + 2, m))

    g_lows = {}
    I0, I1, _ = _istar_sets(n)
    for i in I0 + I1:
        g_lows[i] = minor(u, interval(n - i + 2, m), interval(1, i))

    gprime_lows = {}
    for i in _istar_sets(n)[2]:
        total = Poly.zero(vars)
        left = interval(1, n - i + 1)
        right = interval(i + 1, m)
        for k in range(n - i + 2, i + 1):
            total = total + minor(u, right, left) * minor(u, sorted(left + [k]), sorted(right + [k]))
            total = total + minor(u, left, right) * minor(u, sorted(right + [k]), sorted(left + [k]))
        gprime_lows[i] = total

    return {
        "cluster": cluster_lows,
        "f": f_lows,
        "g": g_lows,
        "gprime": gprime_lows,
    }


def _sign_canonical(p: Poly) -> Poly:
    if p.is_zero():
        return p
    _, lc = p.leading()
    return -p if lc < 0 else p


def _up_to_sign(a: Poly, b: Poly) -> bool:
    return a == b or a == -b


def gexp_check(n: int, cluster: BFZCluster = None) -> bool:
    """Verify the closed-form lowest terms at the standard double word."""
    if cluster is None:
        cluster = build_bfz(n)
    std = standard_double_word(n)
    if (
        tuple(cluster.dword.neg.letters) != tuple(std.neg.letters)
        or tuple(cluster.dword.pos.letters) != tuple(std.pos.letters)
    ):
        raise WrongWord("closed forms hold for the standard double word only")
    forms = gexp_formulas(n)
    m = n + 1

    # frozen rows/columns formulas
    for i in range(1, n + 1):
        low_i, _ = cluster.low(cluster.fs[i - 1])
        low_star, _ = cluster.low(cluster.fs[m - i - 1])
        if not _up_to_sign(low_i, low_star):
            return False
        if i in forms["f"] and not _up_to_sign(low_i, forms["f"][i]):
            return False
    for i, expect in forms["g"].items():
        low_g, _ = cluster.low(cluster.g(i))
        if not _up_to_sign(low_g, expect):
            return False
    for i, expect in forms["gprime"].items():
        low_gp, _ = cluster.low(cluster.gprimes[i])
        if not _up_to_sign(low_gp, expect):
            return False

    # cluster-variable lows: the nonconstant ones match the two minor
    # families as sets; the constant ones are exactly the letters whose
    # suffix is empty
    got = set()
    kminus_pos, _ = kplus_kminus(cluster.dword.pos)
    _, kplus_neg = kplus_kminus(cluster.dword.neg)
    for k in range(1, cluster.l0 + 1):
        low_phi, d = cluster.low(cluster.phis[k - 1])
        if d == 0:
            if kplus_neg[k] is not None:
                return False
            continue
        got.add(_sign_canonical(low_phi))
    for k in range(1, cluster.l0 + 1):
        if k in {cluster.g_index[i] for i in range(1, n + 1)}:
            continue
        low_psi, d = cluster.low(cluster.psis[k - 1])
        if d == 0:
            return False
        got.add(_sign_canonical(low_psi))
    return got == forms["cluster"]


# -- selection ----------------------------------------------------------------


def choose_integrable_system_bfz(
    cluster: BFZCluster,
    seed: int = DEFAULT_SEED,
    samples: int = DEFAULT_SAMPLES,
    pi0: LinearPoissonStructure = None,
) -> IntegrableSystemReport:
    """Degree-jump selection over the combined word on the row side, the
    admissible last-occurrence rule on the column side, plus the modified
    difference functions; certified involutive and independent of the
    expected cardinality l0 + r."""
    n = cluster.n
    l0 = cluster.l0
    letters_combined = list(range(n, 0, -1)) + list(cluster.dword.neg.letters)
    index_of = list(range(-n, 0)) + list(range(1, l0 + 1))

    def fn_at(k):
        return cluster.fs[-k - 1] if k < 0 else cluster.phis[k - 1]

    degs = {}
    for k in index_of:
        _, d = cluster.low(fn_at(k))
        degs[k] = d

    kplus = {}
    for pos_idx, k in enumerate(index_of):
        letter = letters_combined[pos_idx]
        nxt = None
        for later in index_of[pos_idx + 1:]:
            if later > 0 and cluster.dword.neg.letters[later - 1] == letter:
                nxt = later
                break
        kplus[k] = nxt

    selected = []
    labels = []
    for k in index_of:
        succ = kplus[k]
        succ_deg = degs[succ] if succ is not None else 0
        if degs[k] == succ_deg + 1:
            selected.append(fn_at(k))
            labels.append(f"row{k}")

    kminus_pos, _ = kplus_kminus(cluster.dword.pos)
    g_of = {cluster.g_index[i]: i for i in range(1, n + 1)}
    psi_degs = {}
    for k in range(1, l0 + 1):
        _, d = cluster.low(cluster.psis[k - 1])
        psi_degs[k] = d

    def jump(k):
        pred = kminus_pos[k]
        pred_deg = psi_degs[pred] if pred else 0
        return psi_degs[k] == pred_deg + 1

    for k in range(1, l0 + 1):
        i = g_of.get(k)
        admissible = False
        if i not in cluster.I2 and jump(k):
            admissible = True
        if i in cluster.I1:
            k1 = cluster.g_index[cluster.istar(i)]
            if jump(k1):
                admissible = True
        if admissible:
            selected.append(cluster.psis[k - 1])
            labels.append(f"col{k}")
    for i in cluster.I2:
        selected.append(cluster.gprimes[i])
        labels.append(f"diff{i}")

    expected = l0 + n
    if len(selected) != expected:
        raise CountShortfall(
            f"selected {len(selected)} functions, expected {expected}"
        )

    lows = [cluster.low(f)[0] for f in selected]
    if pi0 is None:
        pi0 = sl_dual_linear_structure(n, check=False)
    involutive = involutivity_certificate(pi0, lows)
    rng = random.Random(seed)
    rank = numeric_rank(jacobian(lows, cluster.vars), rng, retries=samples)
    if rank != expected:
        raise CountShortfall(f"independent count {rank} below {expected}")
    word_str = ",".join(map(str, cluster.dword.neg.letters))
    return IntegrableSystemReport(
        variables=list(cluster.vars.names),
        functions=[str(f) for f in lows],
        involutive=involutive,
        independent_count=rank,
        magic_number=expected,
        seed=seed,
        construction=f"bfz n={n} word={word_str} labels={';'.join(labels)}",
        selected_indices=labels,
    )


# -- modified log-volume degree via jets ---------------------------------------


def modified_mu_low_degree(n: int, dword: DoubleWord = None, cap_factor: int = 4) -> int:
    """deg of the lowest term of the log-volume form of the modified extended
    cluster, computed from the jet Jacobian in the exponential chart."""
    D = max(2 * n, 4)
    cap = max(cap_factor * n, D, 8)
    while True:
        cluster = build_bfz(n, dword, order=D)
        funcs = cluster.modified_functions()
        if len(funcs) != len(cluster.vars):
            raise CountShortfall("modified cluster does not match the chart size")
        grads = [
            [f.poly.derivative(nm) for f in funcs] for nm in cluster.vars.names
        ]
        jmat = PolyMatrix(
            [[Jet(p, D - 1) for p in row] for row in grads]
        )
        d = det(jmat)
        got = jet_lowest_term(d)
        if got is not None:
            total = 0
            for f in funcs:
                total += cluster.low(f)[1]
            return got[1] + len(cluster.vars) - total
        if D >= cap:
            raise TruncationInsufficient(f"jet order cap {cap} reached")
        D = min(2 * D, cap)


# -- Kostant cascade and the index ----------------------------------------------


@dataclass
class CascadeData:
    n: int
    roots: list  # pairs (a, b) meaning eps_a - eps_b
    e_plus: list  # rational matrix
    e_minus: list

    def strongly_orthogonal(self) -> bool:
        roots = set(self.roots)
        for (a, b) in roots:
            for (c, d) in roots:
                if (a, b) >= (c, d):
                    continue
                for s in (1, -1):
                    coords = [0] * (self.n + 1)
                    coords[a - 1] += 1
                    coords[b - 1] -= 1
                    coords[c - 1] += s
                    coords[d - 1] -= s
                    nonzero = sorted(x for x in coords if x)
                    if nonzero == [-1, 1]:
                        return False
        return True


def kostant_cascade(n: int) -> CascadeData:
    """Greedy construction on type-A intervals: take the highest root of each
    orthogonal subsystem recursively."""
    if n < 1:
        raise ValueError("n must be >= 1")
    m = n + 1
    roots = []
    a, b = 1, m
    while a < b:
        roots.append((a, b))
        a, b = a + 1, b - 1
    e_plus = [[QQ0] * m for _ in range(m)]
    e_minus = [[QQ0] * m for _ in range(m)]
    for (i, j) in roots:
        e_plus[i - 1][j - 1] = QQ1
        e_minus[j - 1][i - 1] = QQ1
    data = CascadeData(n, roots, e_plus, e_minus)
    if not data.strongly_orthogonal():
        raise ValueError("cascade failed strong orthogonality")
    return data


def _mat_mul(a, b):
    m = len(a)
    return [
        [sum((a[i][k] * b[k][j] for k in range(m)), QQ0) for j in range(m)]
        for i in range(m)
    ]


def _mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _commutator(a, b):
    return _mat_sub(_mat_mul(a, b), _mat_mul(b, a))


def stabilizer_dimension(n: int) -> int:
    """Dimension of the stabilizer of e_+ + e_- in the dual Lie algebra: the
    solution space of the three membership conditions, expected to equal n."""
    m = n + 1
    cascade = kostant_cascade(n)
    ep, em = cascade.e_plus, cascade.e_minus

    # unknowns: h (m diagonal entries, trace pinned to 0 by an extra row),
    # n_+ entries (i<j), n_- entries (i>j)
    unknowns = []
    for t in range(m):
        unknowns.append(("h", t, t))
    for i in range(m):
        for j in range(m):
            if i < j:
                unknowns.append(("p", i, j))
    for i in range(m):
        for j in range(m):
            if i > j:
                unknowns.append(("m", i, j))

    def basis_matrix(i, j):
        e = [[QQ0] * m for _ in range(m)]
        e[i][j] = QQ1
        return e

    columns = []
    for kind, i, j in unknowns:
        e = basis_matrix(i, j)
        zero = [[QQ0] * m for _ in range(m)]
        h = e if kind == "h" else zero
        np_ = e if kind == "p" else zero
        nm_ = e if kind == "m" else zero
        c1 = _commutator([[h[a][b] + np_[a][b] for b in range(m)] for a in range(m)], em)
        c2 = [
            [
                x + y
                for x, y in zip(ra, rb)
            ]
            for ra, rb in zip(_commutator(np_, em), _commutator(nm_, ep))
        ]
        c3 = _commutator([[h[a][b] - nm_[a][b] for b in range(m)] for a in range(m)], ep)
        col = []
        # c1 strictly lower entries must vanish
        for a in range(m):
            for b in range(m):
                if a > b:
                    col.append(c1[a][b])
        # c2 diagonal entries must vanish
        for a in range(m):
            col.append(c2[a][a])
        # c3 strictly upper entries must vanish
        for a in range(m):
            for b in range(m):
                if a < b:
                    col.append(c3[a][b])
        # trace of h must vanish
        col.append(sum((h[a][a] for a in range(m)), QQ0))
        columns.append(col)

    nrows = len(columns[0])
    matrix = [[columns[c][r] for c in range(len(columns))] for r in range(nrows)]
    from .polyring import _rational_rank

    rank = _rational_rank(matrix)
    dim = len(unknowns) - rank
    return dim


# -- explicit chart on the open part of the group -------------------------------


@dataclass
class BFZChart:
    """The extended cluster as honest rational functions on the chart
    (b, a, eta) with eta_j = 1 + e_j, together with the full Poisson
    structure there: two Bott-Samelson blocks and torus mixing terms."""

    n: int
    vars: VarSet
    pi: PoissonStructure
    fs: list
    phis: list
    psis: list
    g_index: dict
    I0: list
    I1: list
    I2: list

    def g(self, i: int) -> RatFun:
        return self.psis[self.g_index[i] - 1]

    def casimir(self, i: int) -> RatFun:
        """f_i / g_{i*}, a Casimir of the chart structure."""
        return self.fs[i - 1] / self.g(self.n + 1 - i)

    def all_functions(self):
        return list(self.fs) + list(self.phis) + list(self.psis)

    def modified_functions(self):
        funcs = list(self.fs) + list(self.phis)
        replaced = {self.g_index[i]: i for i in self.I2}
        for k in range(1, len(self.psis) + 1):
            if k in replaced:
                i = replaced[k]
                istar = self.n + 1 - i
                funcs.append(
                    self.fs[i - 1] * self.g(i) - self.fs[istar - 1] * self.g(istar)
                )
            else:
                funcs.append(self.psis[k - 1])
        return funcs


def _unimodular_inverse(mat: PolyMatrix) -> PolyMatrix:
    """Inverse of a square polynomial matrix with constant determinant."""
    m = mat.rows
    d = det(mat)
    if not d.is_constant():
        raise ValueError("matrix determinant is not constant")
    dc = d.constant_value()
    cof = []
    for i in range(m):
        row = []
        for j in range(m):
            sub = mat.submatrix(
                [a for a in range(m) if a != j], [b for b in range(m) if b != i]
            )
            x = det(sub) * (QQ1 / dc)
            if (i + j) % 2:
                x = -x
            row.append(x)
        cof.append(row)
    return PolyMatrix(cof)


def bfz_chart(n: int, dword: DoubleWord = None) -> BFZChart:
    """Realize the extended cluster on the chart given by the two unipotent
    parts and the torus, with all structure entries rational."""
    if dword is None:
        dword = standard_double_word(n)
    m = n + 1
    l0 = len(dword.neg)
    bnames = [f"b{k}" for k in range(1, l0 + 1)]
    anames = [f"a{k}" for k in range(1, l0 + 1)]
    enames = [f"e{j}" for j in range(1, n + 1)]
    vars = VarSet(bnames + anames + enames)

    def chart_poly(p: Poly, prefix: str) -> Poly:
        mapping = {
            f"z{k}": Poly.var(vars, f"{prefix}{k}") for k in range(1, l0 + 1)
        }
        return p.substitute(mapping, Poly.const(vars, 1))

    # the group element: lower part from b, upper part from a, torus from eta
    bs_b = bott_samelson(dword.pos, m)
    bs_a = bott_samelson(dword.neg, m)
    bs_b = bs_b.map(lambda p: chart_poly(p, "b"))
    bs_a = bs_a.map(lambda p: chart_poly(p, "a"))
    w0mat = weyl_matrix(longest_word(m), m, vars)
    w0inv = _unimodular_inverse(w0mat)
    lower = _unimodular_inverse(bs_b) * w0mat
    upper = bs_a * w0inv

    eta = [RatFun.from_poly(Poly.const(vars, 1) + Poly.var(vars, f"e{j}")) for j in range(1, n + 1)]
    tdiag = []
    for j in range(1, m + 1):
        num = eta[j - 1] if j <= n else RatFun.const(vars, 1)
        den = eta[j - 2] if j >= 2 else RatFun.const(vars, 1)
        tdiag.append(num / den)
    g = (lower * upper).map(lambda p: RatFun.from_poly(p))
    g = PolyMatrix(
        [[g.entries[i][j] * tdiag[j] for j in range(m)] for i in range(m)]
    )

    w0 = WeylElt.longest(m)
    fs = [minor(g, interval(1, i), w0.act_set(interval(1, i))) for i in range(1, n + 1)]
    phis = []
    for k in range(1, l0 + 1):
        ik = dword.neg.letters[k - 1]
        phis.append(
            minor(g, dword.neg.prefix(k).act_set(interval(1, ik)), w0.act_set(interval(1, ik)))
        )
    psis = []
    for k in range(1, l0 + 1):
        jk = dword.pos.letters[k - 1]
        suffix = WeylElt.identity(m)
        for t in range(l0, k, -1):
            suffix = suffix * WeylElt.simple(dword.pos.letters[t - 1], m)
        psis.append(
            minor(g, w0.act_set(interval(1, jk)), suffix.act_set(interval(1, jk)))
        )
    g_index = {}
    for k in range(1, l0 + 1):
        g_index[dword.pos.letters[k - 1]] = k

    # Poisson structure: Bott-Samelson block for b (word pos) and a (word neg)
    from .schubert import build_cell

    cell_b = build_cell(m, dword.pos, check=False)
    cell_a = build_cell(m, dword.neg, check=False)

    size = len(vars)
    zero = Poly.zero(vars)
    P = [[zero for _ in range(size)] for _ in range(size)]

    def set_entry(x, y, val):
        P[x][y] = val
        P[y][x] = -val

    for j in range(l0):
        for k in range(l0):
            if j < k:
                set_entry(
                    j, k, chart_poly(cell_b.pi_z.bracket_matrix[j][k].as_poly(), "b")
                )
                set_entry(
                    l0 + j,
                    l0 + k,
                    chart_poly(cell_a.pi_z.bracket_matrix[j][k].as_poly(), "a"),
                )

    def root_of(word, k):
        return word.prefix(k - 1).act(simple_root(word.letters[k - 1], m))

    betas_b = [root_of(dword.pos, k) for k in range(1, l0 + 1)]
    betas_a = [root_of(dword.neg, k) for k in range(1, l0 + 1)]
    omegas = [fundamental_weight(j, m) for j in range(1, n + 1)]

    for k in range(l0):
        wbeta = w0.act(betas_b[k])
        bk = Poly.var(vars, f"b{k + 1}")
        for j in range(l0):
            c = pairing(wbeta, betas_a[j])
            if c:
                set_entry(k, l0 + j, bk * Poly.var(vars, f"a{j + 1}") * c)
        for j in range(n):
            c = pairing(wbeta, omegas[j])
            if c:
                etaj = Poly.const(vars, 1) + Poly.var(vars, f"e{j + 1}")
                set_entry(k, 2 * l0 + j, bk * etaj * c)
    for k in range(l0):
        ak = Poly.var(vars, f"a{k + 1}")
        for j in range(n):
            c = -pairing(betas_a[k], omegas[j])
            if c:
                etaj = Poly.const(vars, 1) + Poly.var(vars, f"e{j + 1}")
                set_entry(l0 + k, 2 * l0 + j, ak * etaj * c)

    pi = PoissonStructure.from_polys(vars, P)
    I0, I1, I2 = _istar_sets(n)
    return BFZChart(n, vars, pi, fs, phis, psis, g_index, I0, I1, I2)
