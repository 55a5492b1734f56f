"""Exact rational linear algebra: small dense helpers and a sparse echelon form.

Dense matrices are lists of rows of mpq.  Sparse vectors are dicts
``column -> nonzero mpq``; columns are any sortable keys.
"""

from __future__ import annotations

from gmpy2 import mpq


def _copy(mat):
    return [[mpq(x) for x in row] for row in mat]


def rank(mat) -> int:
    m = _copy(mat)
    if not m:
        return 0
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, rows):
            if m[i][c]:
                f = m[i][c] / m[r][c]
                for k in range(c, cols):
                    m[i][k] -= f * m[r][k]
        r += 1
        if r == rows:
            break
    return r


def nullspace(mat) -> list[list[mpq]]:
    """Basis of {x : mat x = 0}, one basis vector per free column."""
    m = _copy(mat)
    cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        v = [mpq(0)] * cols
        v[free] = mpq(1)
        for row, pc in enumerate(pivots):
            v[pc] = -m[row][free]
        basis.append(v)
    return basis


def inverse(mat) -> list[list[mpq]]:
    n = len(mat)
    m = [list(map(mpq, row)) + [mpq(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return [row[n:] for row in m]


def det(mat):
    m = _copy(mat)
    n = len(m)
    out = mpq(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return mpq(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                for k in range(c, n):
                    m[i][k] -= f * m[c][k]
    return out


class Echelon:
    """Incrementally built reduced row echelon form of sparse vectors.

    ``order`` fixes the column ranking: pivots are taken at the smallest column
    under ``key``.  Rows are kept fully reduced, so the basis is canonical for
    the spanned space.  With ``track=True`` every basis row remembers which
    input vectors (by insertion index) combine to it.
    """

    def __init__(self, key=None, track=False):
        self.key = key or (lambda c: c)
        self.rows: dict = {}  # pivot column -> row (pivot coefficient 1)
        self.track = track
        self.combos: dict = {}
        self._count = 0

    def reduce(self, vec, combo=None):
        """Reduce ``vec`` against the basis; returns (residual, combo)."""
        vec = dict(vec)
        combo = dict(combo or {})
        changed = True
        while changed:
            changed = False
            for col in [c for c in vec if c in self.rows]:
                f = vec.get(col)
                if not f:
                    continue
                for c, v in self.rows[col].items():
                    s = vec.get(c, 0) - f * v
                    if s:
                        vec[c] = s
                    else:
                        vec.pop(c, None)
                if self.track:
                    for i, v in self.combos[col].items():
                        s = combo.get(i, 0) - f * v
                        if s:
                            combo[i] = s
                        else:
                            combo.pop(i, None)
                changed = True
        return vec, combo

    def add(self, vec) -> bool:
        """Insert a vector; returns True if it enlarged the span."""
        idx = self._count
        self._count += 1
        res, combo = self.reduce(vec, {idx: mpq(1)} if self.track else None)
        if not res:
            return False
        col = min(res, key=self.key)
        p = res[col]
        res = {c: v / p for c, v in res.items()}
        combo = {i: v / p for i, v in combo.items()}
        for other_col, row in self.rows.items():
            f = row.get(col)
            if f:
                for c, v in res.items():
                    s = row.get(c, 0) - f * v
                    if s:
                        row[c] = s
                    else:
                        row.pop(c, None)
                if self.track:
                    oc = self.combos[other_col]
                    for i, v in combo.items():
                        s = oc.get(i, 0) - f * v
                        if s:
                            oc[i] = s
                        else:
                            oc.pop(i, None)
        self.rows[col] = res
        if self.track:
            self.combos[col] = combo
        return True

    def contains(self, vec) -> bool:
        return not self.reduce(vec)[0]

    def express(self, vec):
        """Coefficients (by insertion index) writing ``vec`` in the inputs, or None."""
        if not self.track:
            raise ValueError("Echelon built without tracking")
        res, combo = self.reduce(vec, {})
        if res:
            return None
        return {i: -v for i, v in combo.items()}

    def __len__(self):
        return len(self.rows)

    def basis(self):
        """Rows sorted by pivot column; each row a sorted tuple of (column, value)."""
        return tuple(
            tuple(sorted(self.rows[c].items(), key=lambda t: self.key(t[0])))
            for c in sorted(self.rows, key=self.key)
        )
