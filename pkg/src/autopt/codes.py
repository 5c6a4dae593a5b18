"""Stabiliser codes as GF(4) additive codes with a logical basis."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gf4 import TOKEN_VALUE, as_gf4, format_gf4, omega, phi, rank2, rref2, trace_product


class CodeError(ValueError):
    pass


class ParseError(CodeError):
    def __init__(self, msg: str, line: int, col: int = 1):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Validity:
    ok: bool
    block: str = ""  # "GG", "GB" or "BB"
    row: int = -1
    col: int = -1
    got: int = 0
    want: int = 0

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "valid"
        return f"{self.block}[{self.row},{self.col}] = {self.got}, expected {self.want}"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.uint8, copy=True)
    a.flags.writeable = False
    return a


def validate(code: "StabCode") -> Validity:
    """Check independence of G and the block Gram condition on [G; B]."""
    n, k, G, B = code.n, code.k, code.G, code.B
    if G.shape != (n - k, n) or B.shape != (2 * k, n):
        raise CodeError(f"shape mismatch for n={n}, k={k}: G{G.shape}, B{B.shape}")
    if n - k and rank2(phi(G)) != n - k:
        return Validity(False, "rank")
    checks = (
        ("GG", G, G, np.zeros((n - k, n - k), np.uint8)),
        ("GB", G, B, np.zeros((n - k, 2 * k), np.uint8)),
        ("BB", B, B, omega(k)),
    )
    for name, U, V, want in checks:
        if U.shape[0] == 0 or V.shape[0] == 0:
            continue
        got = trace_product(U, V)
        bad = np.argwhere(got != want)
        if bad.size:
            i, j = bad[0]
            return Validity(False, name, int(i), int(j), int(got[i, j]), int(want[i, j]))
    return Validity(True)


@dataclass(frozen=True, eq=False)
class StabCode:
    """An [[n,k]] code: generators ``G`` ((n-k) x n) and logical basis ``B`` (2k x n).

    Rows of ``B`` are ordered X_1..X_k, Z_1..Z_k. Construction fails unless
    the pair is valid.
    """

    n: int
    k: int
    G: np.ndarray
    B: np.ndarray
    name: str = field(default="", compare=False)

    def __post_init__(self):
        G = as_gf4(self.G) if np.size(self.G) else np.zeros((0, self.n), np.uint8)
        B = as_gf4(self.B) if np.size(self.B) else np.zeros((0, self.n), np.uint8)
        object.__setattr__(self, "G", _frozen(G.reshape(self.n - self.k, self.n)
                                              if G.size == 0 else G))
        object.__setattr__(self, "B", _frozen(B.reshape(2 * self.k, self.n)
                                              if B.size == 0 else B))
        report = validate(self)
        if not report:
            raise CodeError(f"invalid code {self.name or ''}: {report}".replace("  ", " "))

    def __eq__(self, other):
        return (isinstance(other, StabCode) and self.n == other.n and self.k == other.k
                and np.array_equal(self.G, other.G) and np.array_equal(self.B, other.B))

    def __hash__(self):
        return hash((self.n, self.k, self.G.tobytes(), self.B.tobytes()))

    @property
    def label(self) -> str:
        return f"[[{self.n},{self.k}]]"

    def replace(self, G=None, B=None, name=None) -> "StabCode":
        return StabCode(self.n, self.k, self.G if G is None else G,
                        self.B if B is None else B, self.name if name is None else name)


def dual_basis(B) -> np.ndarray:
    """``Omega_{2k} B``: swap the X and Z halves of the basis."""
    B = as_gf4(B)
    if B.shape[0] % 2:
        raise CodeError("basis must have an even number of rows")
    k = B.shape[0] // 2
    if k and not np.array_equal(trace_product(B, B), omega(k)):
        raise CodeError("basis is not symplectic")
    return np.concatenate([B[k:], B[:k]], axis=0)


def canonical_key(code: StabCode) -> bytes:
    """RREF of phi(G), flattened; equal iff the stabiliser groups are equal."""
    return rref2(phi(code.G)).tobytes()


# -- text format ------------------------------------------------------------


def parse_code(text: str, name: str = "") -> StabCode:
    lines = text.splitlines()
    body = [(i + 1, ln) for i, ln in enumerate(lines) if not ln.lstrip().startswith("#")]
    # header
    while body and not body[0][1].strip():
        body.pop(0)
    if not body:
        raise ParseError("empty input", 1)
    lineno, header = body.pop(0)
    parts = header.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ParseError("expected header 'n k'", lineno)
    n, k = int(parts[0]), int(parts[1])
    if k > n:
        raise ParseError(f"k={k} exceeds n={n}", lineno)

    def read_rows(count, what):
        rows = []
        while len(rows) < count:
            if not body:
                raise ParseError(f"expected {count} rows of {what}, got {len(rows)}",
                                 len(lines) + 1)
            ln_no, ln = body.pop(0)
            if not ln.strip():
                if rows or what == "B":
                    raise ParseError(f"unexpected blank line in {what}", ln_no)
                continue
            toks = ln.split()
            if len(toks) != n:
                raise ParseError(f"expected {n} entries, got {len(toks)}", ln_no)
            row = []
            col = 1
            for tok in toks:
                col = ln.index(tok, col - 1) + 1
                if tok not in TOKEN_VALUE:
                    raise ParseError(f"unknown token {tok!r}", ln_no, col)
                row.append(TOKEN_VALUE[tok])
                col += len(tok)
            rows.append(row)
        return rows

    G = read_rows(n - k, "G")
    if k:
        if not body or body[0][1].strip():
            ln_no = body[0][0] if body else len(lines) + 1
            raise ParseError("expected blank line between G and B", ln_no)
        body.pop(0)
    B = read_rows(2 * k, "B")
    for ln_no, ln in body:
        if ln.strip():
            raise ParseError("trailing content", ln_no)
    G = np.array(G, dtype=np.uint8).reshape(n - k, n)
    B = np.array(B, dtype=np.uint8).reshape(2 * k, n)
    try:
        return StabCode(n, k, G, B, name)
    except CodeError as exc:
        raise CodeError(f"validation failed: {exc}") from None


def serialize_code(code: StabCode) -> str:
    out = [f"{code.n} {code.k}"]
    out += format_gf4(code.G) if code.G.size else []
    if code.k:
        out.append("")
        out += format_gf4(code.B)
    return "\n".join(out) + "\n"


def load_code(path: str) -> StabCode:
    with open(path, encoding="utf-8") as fh:
        return parse_code(fh.read(), name=str(path))


# -- fixtures -----------------------------------------------------------------
#
# Every distinct generator-basis matrix printed in the results tables. The
# suffix names the first table row that prints the variant: m1/m2 for the
# metric, cN for the class.

_FIXTURE_TEXT = {
    "4_1_2": """4 1
1 W W 0
0 1 1 W
w 0 w w

w 1 0 0
0 w w 0
""",
    "4_1_2.m1c3": """4 1
1 W w 0
0 1 W 1
w 0 1 W

w 1 0 0
0 w 1 0
""",
    "4_1_2.m2c3": """4 1
1 W w 0
0 1 W w
w 0 1 W

w 1 0 0
0 w 1 0
""",
    "4_2_2": """4 2
1 1 1 1
w w w w

1 1 0 0
w w 0 0
w 0 w 0
1 0 1 0
""",
    "4_2_2.m1c5": """4 2
W w 1 1
1 W w w

W w 0 0
1 W 0 0
1 0 w 0
W 0 1 0
""",
    "4_2_2.m1c6": """4 2
1 1 1 1
W w w w

1 1 0 0
W w 0 0
W 0 w 0
1 0 1 0
""",
    "4_2_2.m1c9": """4 2
w 1 1 1
W w w w

w 1 0 0
W w 0 0
W 0 w 0
w 0 1 0
""",
    "4_2_2.m2c6": """4 2
1 1 1 1
W W w w

1 1 0 0
W W 0 0
W 0 w 0
1 0 1 0
""",
    "5_1_2": """5 1
w w 0 w 0
0 0 w w 1
0 1 1 1 0
1 0 0 1 w

0 w 0 w 1
0 0 1 0 w
""",
    "5_1_2.m2c3": """5 1
w 1 0 w 0
0 0 w w 1
0 w 1 1 0
1 0 0 1 w

0 1 0 w 1
0 0 1 0 w
""",
    "5_1_3": """5 1
W 1 w 1 0
1 0 w W 1
0 1 1 W w
1 W 0 1 w

w 1 1 0 0
1 W w 0 0
""",
    "5_1_3.m2c2": """5 1
W w w 1 0
w 0 w w 1
0 w 1 w W
w W 0 1 W

1 w 1 0 0
w W w 0 0
""",
    "5_2_1": """5 2
0 0 w w w
0 1 1 1 0
1 0 0 1 1

0 w 0 w w
w w 0 w 0
0 0 1 0 1
0 0 0 1 1
""",
    "5_2_2": """5 2
0 w 0 0 w
w 0 w w w
1 1 1 1 1

0 1 0 1 1
0 1 1 0 1
0 0 w 0 w
0 0 0 w w
""",
    "5_2_2.m1c6": """5 2
0 w 0 0 w
w 0 w w w
1 1 1 W 1

0 1 0 W 1
0 1 1 0 1
0 0 w 0 w
0 0 0 w w
""",
    "6_1_3": """6 1
1 0 0 0 0 w
0 1 1 w W 0
0 W 0 W W w
0 1 w 0 w w
w W w w 0 W

0 0 w w w 0
0 0 0 1 w w
""",
    "6_1_3.m1c3": """6 1
1 0 0 0 0 w
0 1 1 w W 0
0 W 0 W W w
0 1 w 0 1 w
w W w w 0 W

0 0 w w 1 0
0 0 0 1 1 w
""",
    "6_1_3.m2c3": """6 1
1 0 0 0 0 w
0 1 1 w w 0
0 W 0 1 w w
0 1 w 0 W w
w W w w 0 W

0 0 w w W 0
0 0 0 W W w
""",
    "7_1_3": """7 1
1 0 w 0 w W 0
1 w w w 0 0 0
1 0 0 w w 0 W
w 0 W 0 W w 0
w 1 W 1 0 0 0
w 0 0 1 W 0 1

0 w 0 w 0 0 W
0 1 0 1 0 0 1
""",
    "7_1_3.m2c2": """7 1
1 0 w 0 w W 0
1 W w 0 0 0 W
1 W 0 w w 0 0
w 0 W 0 1 w 0
w 1 W 0 0 0 1
w 1 0 W 1 0 0

0 W 0 w 0 0 W
0 1 0 W 0 0 1
""",
    "7_1_3.m2c3": """7 1
1 0 w 0 w W 0
1 w w w 0 0 0
1 0 0 w w 0 W
w 0 W 0 W w 0
w 1 W W 0 0 0
w 0 0 W W 0 w

0 w 0 w 0 0 W
0 1 0 W 0 0 w
""",
}

FIXTURES = tuple(_FIXTURE_TEXT)
_cache: dict[str, StabCode] = {}


def builtin(name: str) -> StabCode:
    if name not in _FIXTURE_TEXT:
        raise KeyError(f"unknown builtin code {name!r}; choose from {', '.join(FIXTURES)}")
    if name not in _cache:
        _cache[name] = parse_code(_FIXTURE_TEXT[name], name=name)
    return _cache[name]


def family(name: str) -> str:
    """``"5_1_3.m2c2"`` -> ``"5_1_3"``."""
    return name.split(".")[0]
