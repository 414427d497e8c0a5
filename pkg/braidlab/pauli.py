"""
Phased Pauli strings and weighted sums of them

A string on ``n`` qubits is stored as two bitmasks and a phase exponent,

    P = i^r X^x Z^z

where bit ``q`` of ``x`` (``z``) marks an X (Z) factor on qubit ``q``. A ``Y``
letter is ``x = z = 1`` and carries an extra ``i`` inside ``r``, so the phase
reported to users is ``i^(r - popcount(x & z))``.

Dense matrices put qubit 0 on the most significant bit of the basis index.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

import numpy as np

MAX_DENSE_QUBITS = 10
CHOP_TOLERANCE = 1e-12

_PHASE_TOKENS = ("+", "+i", "-", "-i")
_PHASE_VALUES = (1, 1j, -1, -1j)
_LETTERS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}

Number = Union[int, float, complex]


def _popcount(v: int) -> int:
    return bin(v).count("1")


def _index_mask(mask: int, n: int) -> int:
    """Move qubit-ordered bits onto basis-index bit positions (qubit 0 is MSB)."""
    out = 0
    for q in range(n):
        if (mask >> q) & 1:
            out |= 1 << (n - 1 - q)
    return out


@lru_cache(maxsize=4096)
def _action(n: int, x: int, z: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Permutation and signs of ``X^x Z^z`` on computational basis states.

    ``(X^x Z^z v)[j] == signs[j] * v[perm[j]]``
    """
    idx = np.arange(1 << n)
    x_idx = _index_mask(x, n)
    z_idx = _index_mask(z, n)

    parity = np.zeros(1 << n, dtype=np.int64)
    for bit in range(n):
        if (z_idx >> bit) & 1:
            parity ^= (idx >> bit) & 1

    perm = idx ^ x_idx
    signs = (1 - 2 * parity)[perm].astype(np.float64)
    perm.setflags(write=False)
    signs.setflags(write=False)
    return perm, signs


@dataclass(frozen=True)
class PauliString:
    n_qubits: int
    x: int = 0
    z: int = 0
    r: int = 0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"Need at least one qubit, got {self.n_qubits}")
        limit = 1 << self.n_qubits
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError(f"Bitmask does not fit in {self.n_qubits} qubits")
        object.__setattr__(self, "r", self.r % 4)

    @staticmethod
    def identity(n: int) -> "PauliString":
        return PauliString(n)

    @staticmethod
    def single(n: int, qubit: int, letter: str) -> "PauliString":
        return PauliString.from_sparse(n, {qubit: letter})

    @staticmethod
    def from_sparse(n: int, letters: Mapping[int, str], phase: int = 0) -> "PauliString":
        """
        Build from ``{qubit: letter}``, ``phase`` is the user-facing exponent of ``i``.
        """
        x = z = 0
        for q, letter in letters.items():
            if not 0 <= q < n:
                raise IndexError(f"Qubit {q} is out of range for {n} qubits")
            try:
                bx, bz = _LETTERS[letter.upper()]
            except KeyError:
                raise ValueError(f"Unknown Pauli letter '{letter}'") from None
            x |= bx << q
            z |= bz << q
        return PauliString(n, x, z, phase + _popcount(x & z))

    @staticmethod
    def from_label(label: str) -> "PauliString":
        """
        Parse text like ``"+i XIZY"``, ``"-ZZ"`` or ``"XY"``.

        Qubit 0 is the leftmost letter.
        """
        s = label.strip()
        phase = 0
        for token, k in (("+i", 1), ("-i", 3), ("i", 1), ("+", 0), ("-", 2)):
            if s.startswith(token):
                phase = k
                s = s[len(token):]
                break
        letters = s.replace(" ", "")
        if not letters:
            raise ValueError(f"Failed to parse Pauli label '{label}'")
        return PauliString.from_sparse(
            len(letters), {q: c for q, c in enumerate(letters) if c != "I"}, phase
        )

    @property
    def phase_exponent(self) -> int:
        return (self.r - _popcount(self.x & self.z)) % 4

    @property
    def phase(self) -> complex:
        return _PHASE_VALUES[self.phase_exponent]

    @property
    def letters(self) -> str:
        out = []
        for q in range(self.n_qubits):
            bx, bz = (self.x >> q) & 1, (self.z >> q) & 1
            out.append("IXZY"[bx + 2 * bz])
        return "".join(out)

    @property
    def support(self) -> Tuple[int, ...]:
        mask = self.x | self.z
        return tuple(q for q in range(self.n_qubits) if (mask >> q) & 1)

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def is_hermitian(self) -> bool:
        return self.phase_exponent % 2 == 0

    def label(self) -> str:
        return f"{_PHASE_TOKENS[self.phase_exponent]} {self.letters}"

    def __str__(self) -> str:
        return self.label()

    def with_phase(self, k: int) -> "PauliString":
        """Multiply by ``i^k``."""
        return PauliString(self.n_qubits, self.x, self.z, self.r + k)

    def strip_phase(self) -> "PauliString":
        return PauliString(self.n_qubits, self.x, self.z, _popcount(self.x & self.z))

    def adjoint(self) -> "PauliString":
        return PauliString(
            self.n_qubits, self.x, self.z, -self.r + 2 * _popcount(self.x & self.z)
        )

    def __matmul__(self, other: "PauliString") -> "PauliString":
        if not isinstance(other, PauliString):
            return NotImplemented
        return multiply(self, other)

    def __neg__(self) -> "PauliString":
        return self.with_phase(2)

    def __mul__(self, c: Number) -> "OperatorSum":
        if isinstance(c, PauliString):
            return NotImplemented
        return OperatorSum.from_terms(self.n_qubits, [(c, self)])

    __rmul__ = __mul__

    def __add__(self, other) -> "OperatorSum":
        return OperatorSum.from_terms(self.n_qubits, [(1, self)]) + other

    def apply(self, vectors: np.ndarray) -> np.ndarray:
        """
        Act on a statevector or on the columns of a ``2^n x m`` array.
        """
        perm, signs = _action(self.n_qubits, self.x, self.z)
        vectors = np.asarray(vectors)
        if vectors.shape[0] != 1 << self.n_qubits:
            raise ValueError(
                f"Expect leading dimension {1 << self.n_qubits}, got {vectors.shape}"
            )
        factor = (1j) ** self.r
        if vectors.ndim == 1:
            return factor * signs * vectors[perm]
        return factor * signs[:, None] * vectors[perm]

    def to_dense(self, max_qubits: int = MAX_DENSE_QUBITS) -> np.ndarray:
        return to_dense(self, max_qubits=max_qubits)


def _check_dims(a, b):
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"Qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    _check_dims(a, b)
    r = a.r + b.r + 2 * _popcount(a.z & b.x)
    return PauliString(a.n_qubits, a.x ^ b.x, a.z ^ b.z, r)


def commutes(a: PauliString, b: PauliString) -> bool:
    _check_dims(a, b)
    return (_popcount(a.x & b.z) + _popcount(a.z & b.x)) % 2 == 0


@dataclass(frozen=True)
class OperatorSum:
    """
    Canonical weighted sum of Pauli strings.

    Every stored string has user-facing phase ``+1``; the phase lives in the
    coefficient. Strings are unique and tiny coefficients are dropped.
    """

    n_qubits: int
    terms: Tuple[Tuple[complex, PauliString], ...] = ()

    @staticmethod
    def from_terms(
        n: int, terms: Iterable[Tuple[Number, PauliString]], tol: float = CHOP_TOLERANCE
    ) -> "OperatorSum":
        acc: Dict[Tuple[int, int], complex] = {}
        for c, p in terms:
            if p.n_qubits != n:
                raise ValueError(f"Qubit count mismatch: {p.n_qubits} vs {n}")
            key = (p.x, p.z)
            acc[key] = acc.get(key, 0j) + complex(c) * p.phase
        out = tuple(
            (c, PauliString(n, x, z, _popcount(x & z)))
            for (x, z), c in acc.items()
            if abs(c) >= tol
        )
        return OperatorSum(n, out)

    @staticmethod
    def from_labels(terms: Mapping[str, Number]) -> "OperatorSum":
        parsed = [(c, PauliString.from_label(s)) for s, c in terms.items()]
        if not parsed:
            raise ValueError("Need at least one term to infer qubit count")
        return OperatorSum.from_terms(parsed[0][1].n_qubits, parsed)

    @staticmethod
    def zero(n: int) -> "OperatorSum":
        return OperatorSum(n)

    def __iter__(self) -> Iterator[Tuple[complex, PauliString]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, p: PauliString) -> complex:
        for c, q in self.terms:
            if (q.x, q.z) == (p.x, p.z):
                return c / p.phase
        return 0j

    def simplify(self, tol: float = CHOP_TOLERANCE) -> "OperatorSum":
        return OperatorSum.from_terms(self.n_qubits, self.terms, tol=tol)

    def is_hermitian(self, tol: float = CHOP_TOLERANCE) -> bool:
        return all(abs(c.imag) <= tol * max(1.0, abs(c)) for c, _ in self.terms)

    def adjoint(self) -> "OperatorSum":
        return OperatorSum(self.n_qubits, tuple((c.conjugate(), p) for c, p in self.terms))

    def norm(self) -> float:
        """Sum of absolute coefficients, an upper bound on the operator norm."""
        return float(sum(abs(c) for c, _ in self.terms))

    def _coerce(self, other) -> "OperatorSum":
        if isinstance(other, OperatorSum):
            _check_dims(self, other)
            return other
        if isinstance(other, PauliString):
            return OperatorSum.from_terms(self.n_qubits, [(1, other)])
        return OperatorSum.from_terms(
            self.n_qubits, [(other, PauliString.identity(self.n_qubits))]
        )

    def __add__(self, other) -> "OperatorSum":
        other = self._coerce(other)
        return OperatorSum.from_terms(self.n_qubits, self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self) -> "OperatorSum":
        return self * -1

    def __sub__(self, other) -> "OperatorSum":
        return self + (-self._coerce(other))

    def __mul__(self, c: Number) -> "OperatorSum":
        if isinstance(c, (OperatorSum, PauliString)):
            return NotImplemented
        return OperatorSum.from_terms(self.n_qubits, [(a * c, p) for a, p in self.terms])

    __rmul__ = __mul__

    def __matmul__(self, other) -> "OperatorSum":
        other = self._coerce(other)
        return OperatorSum.from_terms(
            self.n_qubits,
            [(a * b, multiply(p, q)) for a, p in self.terms for b, q in other.terms],
        )

    def __rmatmul__(self, other) -> "OperatorSum":
        return self._coerce(other) @ self

    def commutator(self, other) -> "OperatorSum":
        other = self._coerce(other)
        return self @ other - other @ self

    def apply(self, vectors: np.ndarray) -> np.ndarray:
        vectors = np.asarray(vectors, dtype=complex)
        out = np.zeros_like(vectors)
        for c, p in self.terms:
            out += c * p.apply(vectors)
        return out

    def to_dense(self, max_qubits: int = MAX_DENSE_QUBITS) -> np.ndarray:
        return to_dense(self, max_qubits=max_qubits)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c:.6g})*{p.letters}" for c, p in self.terms)


def to_dense(
    op: Union[PauliString, OperatorSum], max_qubits: int = MAX_DENSE_QUBITS
) -> np.ndarray:
    n = op.n_qubits
    if n > max_qubits:
        raise ValueError(f"Refusing to build dense matrix for {n} > {max_qubits} qubits")

    dim = 1 << n
    idx = np.arange(dim)
    if isinstance(op, PauliString):
        terms: Iterable[Tuple[complex, PauliString]] = [(1, op)]
    else:
        terms = op.terms

    out = np.zeros((dim, dim), dtype=complex)
    for c, p in terms:
        perm, signs = _action(n, p.x, p.z)
        out[idx, perm] += c * (1j) ** p.r * signs
    return out
