"""Hecke eigenvalue providers.

Exact integer q-expansions of the level-1 holomorphic eigenforms used as
desk-scale test forms (Ramanujan's Delta and the weight-16 form E4*Delta),
JSON ingestion of Maass-form coefficient tables, and the coefficient-bound
checks (Deligne, Kim-Sarnak, Hecke relations) that keep them honest.

Expansion arithmetic is exact throughout: series products are carried out
by number-theoretic transforms modulo five 30-bit primes and recombined by
the Chinese remainder theorem into wide integers.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import os
from pathlib import Path

import numpy as np

from .errors import DomainError, InvariantError, SchemaError

__all__ = [
    "HolomorphicForm",
    "MaassFormData",
    "delta_qexp",
    "eigenform_weight16",
    "normalize",
    "load_maass_coefficients",
    "rankin_selberg_partial",
    "hecke_check",
    "divisor_counts",
    "synthetic_maass_data",
]

_CACHE_MAGIC = b"OSLX"
_CACHE_VERSION = 1
_COEF_BYTES = 24  # signed little-endian; holds |a(n)| < 2^191


@dataclasses.dataclass(frozen=True)
class HolomorphicForm:
    """A Hecke-normalized holomorphic eigenform given by its q-expansion.

    ``a[n]`` are the exact integer Fourier coefficients for 1 <= n <= M
    (``a[0]`` is unused and zero) and ``lam[n] = a[n]/n^{(weight-1)/2}``.
    """

    weight: int
    a: tuple
    lam: np.ndarray

    @property
    def M(self) -> int:
        return len(self.a) - 1


@dataclasses.dataclass(frozen=True)
class MaassFormData:
    """Coefficient data for a (possibly synthetic) Maass form.

    mu is the spectral parameter (Laplace eigenvalue 1/4 + mu^2), parity is
    0 or 1, epsilon the reflection eigenvalue. provenance records a digest
    of the source file together with its self-description.
    """

    mu: float
    parity: int
    epsilon: int
    lam: np.ndarray
    provenance: str

    @property
    def M(self) -> int:
        return len(self.lam) - 1


# ----------------------------------------------------------------------------
# Exact series arithmetic: NTT convolution mod five primes + CRT.

_NTT_PRIMES = (998244353, 167772161, 469762049, 754974721, 1004535809)
_NTT_ROOTS = (3, 3, 3, 11, 3)


def _ntt(a: np.ndarray, p: int, g: int, invert: bool) -> np.ndarray:
    n = len(a)
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for i in range(bits):
        rev |= ((idx >> i) & 1) << (bits - 1 - i)
    a = a[rev].astype(np.uint64)
    pp = np.uint64(p)
    root = pow(g, (p - 1) // n, p)
    if invert:
        root = pow(root, p - 2, p)
    length = 2
    while length <= n:
        half = length // 2
        w_len = pow(root, n // length, p)
        # twiddle powers w^0..w^{half-1} by vectorized doubling
        tw = np.ones(1, dtype=np.uint64)
        while len(tw) < half:
            step = pow(w_len, len(tw), p)
            tw = np.concatenate([tw, (tw * np.uint64(step)) % pp])
        tw = tw[:half]
        blk = a.reshape(-1, length)
        u = blk[:, :half]
        v = (blk[:, half:] * tw[None, :]) % pp
        a = np.concatenate([(u + v) % pp, (u + pp - v) % pp], axis=1).ravel()
        length *= 2
    if invert:
        n_inv = np.uint64(pow(n, p - 2, p))
        a = (a * n_inv) % pp
    return a


def _conv_exact(a: list, b: list, out_len: int) -> list:
    """Exact integer convolution truncated to out_len coefficients."""
    n = 1
    while n < len(a) + len(b) - 1:
        n *= 2
    residues = []
    for p, g in zip(_NTT_PRIMES, _NTT_ROOTS):
        fa = np.zeros(n, dtype=np.uint64)
        fa[: len(a)] = np.array([x % p for x in a], dtype=np.uint64)
        fb = np.zeros(n, dtype=np.uint64)
        fb[: len(b)] = np.array([x % p for x in b], dtype=np.uint64)
        Fa = _ntt(fa, p, g, False)
        Fb = _ntt(fb, p, g, False)
        residues.append(_ntt((Fa * Fb) % np.uint64(p), p, g, True)[:out_len])
    P = 1
    for p in _NTT_PRIMES:
        P *= p
    basis = []
    for p in _NTT_PRIMES:
        Mi = P // p
        basis.append(Mi * pow(Mi % p, p - 2, p))
    half = P // 2
    cols = [r.tolist() for r in residues]
    out = []
    for i in range(out_len):
        x = sum(int(cols[j][i]) * basis[j] for j in range(5)) % P
        out.append(x - P if x > half else x)
    return out


# ----------------------------------------------------------------------------
# q-expansions.


def _eta3_sparse(n_terms: int) -> list:
    """Coefficients of prod(1-q^m)^3 = sum (-1)^k (2k+1) q^{k(k+1)/2}."""
    c = [0] * n_terms
    k = 0
    while k * (k + 1) // 2 < n_terms:
        c[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return c


def _cache_dir() -> Path:
    root = os.environ.get("OSCILLAX_CACHE_DIR")
    if root:
        return Path(root)
    return Path.home() / ".cache" / "oscillax"


def _cache_path(form_id: str, M: int) -> Path:
    return _cache_dir() / f"{form_id}-{M}.qexp"


def _cache_write(path: Path, weight: int, coeffs: list) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "wb") as fh:
            fh.write(_CACHE_MAGIC)
            fh.write(_CACHE_VERSION.to_bytes(4, "little"))
            fh.write(weight.to_bytes(4, "little"))
            fh.write(len(coeffs).to_bytes(8, "little"))
            for c in coeffs:
                fh.write(int(c).to_bytes(_COEF_BYTES, "little", signed=True))
    except OSError:
        pass  # cache is best-effort


def _cache_read(path: Path, weight: int, M: int):
    try:
        with open(path, "rb") as fh:
            if fh.read(4) != _CACHE_MAGIC:
                return None
            if int.from_bytes(fh.read(4), "little") != _CACHE_VERSION:
                return None
            if int.from_bytes(fh.read(4), "little") != weight:
                return None
            n = int.from_bytes(fh.read(8), "little")
            if n < M + 1:
                return None
            data = fh.read((M + 1) * _COEF_BYTES)
            if len(data) != (M + 1) * _COEF_BYTES:
                return None
            return [
                int.from_bytes(data[i * _COEF_BYTES : (i + 1) * _COEF_BYTES], "little", signed=True)
                for i in range(M + 1)
            ]
    except OSError:
        return None


def _make_form(weight: int, coeffs: list) -> HolomorphicForm:
    if coeffs[1] != 1:
        raise InvariantError("expansion engine produced a(1) != 1")
    n = np.arange(len(coeffs), dtype=float)
    n[0] = 1.0
    lam = np.array([float(c) for c in coeffs]) / n ** ((weight - 1) / 2.0)
    lam[0] = 0.0
    return HolomorphicForm(weight=weight, a=tuple(coeffs), lam=lam)


def _delta_coeffs(M: int) -> list:
    """a(1..M) of Delta, as [0, a(1), ..., a(M)]."""
    # Delta = q * (prod(1-q^m)^3)^8; cube via Jacobi's identity, then
    # three exact squarings
    s3 = _eta3_sparse(M)
    s6 = _conv_exact(s3, s3, M)
    s12 = _conv_exact(s6, s6, M)
    s24 = _conv_exact(s12, s12, M)
    return [0] + s24[: M]


def delta_qexp(M: int) -> HolomorphicForm:
    """Ramanujan's Delta: weight 12, a(n) = tau(n), exact integers."""
    if not (1 <= M <= 10**6):
        raise DomainError("delta_qexp requires 1 <= M <= 1e6")
    path = _cache_path("delta", M)
    cached = _cache_read(path, 12, M)
    if cached is not None:
        return _make_form(12, cached)
    coeffs = _delta_coeffs(M)
    _cache_write(path, 12, coeffs)
    return _make_form(12, coeffs)


def _sigma3_table(M: int) -> np.ndarray:
    s = np.zeros(M + 1, dtype=np.int64)
    for d in range(1, M + 1):
        s[d::d] += d**3
    return s


def eigenform_weight16(M: int) -> HolomorphicForm:
    """The unique weight-16 cusp eigenform E4*Delta, exact integers."""
    if not (1 <= M <= 10**6):
        raise DomainError("eigenform_weight16 requires 1 <= M <= 1e6")
    path = _cache_path("e4delta", M)
    cached = _cache_read(path, 16, M)
    if cached is not None:
        return _make_form(16, cached)
    delta = _delta_coeffs(M)
    s3 = _sigma3_table(M)
    e4 = [1] + [240 * int(s3[n]) for n in range(1, M + 1)]
    prod = _conv_exact(e4, delta, M + 1)
    coeffs = [0] + prod[1 : M + 1]
    _cache_write(path, 16, coeffs)
    return _make_form(16, coeffs)


def normalize(form: HolomorphicForm) -> HolomorphicForm:
    """Recompute lambda(n) = a(n)/n^{(weight-1)/2} from the integer table."""
    if len(form.a) < 2:
        raise DomainError("normalize requires a populated coefficient table")
    return _make_form(form.weight, list(form.a))


# ----------------------------------------------------------------------------
# Maass ingestion.


def divisor_counts(M: int) -> np.ndarray:
    """d(n) for 0 <= n <= M by sieve (d[0] = 0)."""
    d = np.zeros(M + 1, dtype=np.int64)
    for k in range(1, M + 1):
        d[k::k] += 1
    return d


def load_maass_coefficients(path) -> MaassFormData:
    """Load and validate a Maass coefficient file (JSON schema, see module
    docstring of the data sample).

    Raises SchemaError for malformed files and InvariantError (naming the
    offending n) when the table violates normalization or the Kim-Sarnak
    bound with 5% slack.
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("type") != "maass":
        raise SchemaError(f"{path}: expected an object with type == 'maass'")
    try:
        mu = float(doc["mu"])
        parity = int(doc["parity"])
        epsilon = int(doc["epsilon"])
        coeffs = [float(v) for v in doc["coefficients"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: missing or ill-typed field: {exc}") from exc
    if mu <= 0.0:
        raise SchemaError(f"{path}: mu must be positive")
    if parity not in (0, 1):
        raise SchemaError(f"{path}: parity must be 0 or 1")
    if epsilon not in (1, -1):
        raise SchemaError(f"{path}: epsilon must be +1 or -1")
    if not coeffs:
        raise SchemaError(f"{path}: empty coefficient table")
    M = len(coeffs)
    lam = np.zeros(M + 1)
    lam[1:] = coeffs
    if abs(lam[1] - 1.0) > 1e-12:
        raise InvariantError("lambda(1) != 1 (n=1)")
    d = divisor_counts(M)
    n = np.arange(M + 1, dtype=float)
    n[0] = 1.0
    bound = 1.05 * d * n ** (7.0 / 64.0)
    bad = np.nonzero(np.abs(lam[1:]) > bound[1:])[0]
    if len(bad):
        k = int(bad[0]) + 1
        raise InvariantError(
            f"coefficient bound violated at n={k}: |lambda|={abs(lam[k]):.6g} "
            f"> {bound[k]:.6g}"
        )
    provenance = f"{path.name}:sha256:{hashlib.sha256(raw).hexdigest()[:16]}"
    if isinstance(doc.get("description"), str):
        provenance += " (" + doc["description"] + ")"
    return MaassFormData(mu=mu, parity=parity, epsilon=epsilon, lam=lam, provenance=provenance)


# ----------------------------------------------------------------------------
# Coefficient checks.


def rankin_selberg_partial(form, x: float) -> float:
    """Sum of lambda(n)^2 over n <= x."""
    if x > form.M:
        raise DomainError(f"rankin_selberg_partial: x={x} exceeds table length {form.M}")
    k = int(math.floor(x))
    if k < 1:
        return 0.0
    return float(np.sum(form.lam[1 : k + 1] ** 2))


def hecke_check(form, p: int, k: int) -> float:
    """Residual of lambda(p^{k+1}) = lambda(p) lambda(p^k) - lambda(p^{k-1}).

    Convention lambda(p^{-1}) = 0 makes k=0 exact for any table with
    lambda(1)=1.
    """
    if p < 2 or k < 0:
        raise DomainError("hecke_check requires p >= 2 and k >= 0")
    if p ** (k + 1) > form.M:
        raise DomainError("hecke_check: p^(k+1) exceeds table length")
    lam = form.lam
    prev = 0.0 if k == 0 else float(lam[p ** (k - 1)])
    return abs(float(lam[p ** (k + 1)]) - float(lam[p]) * float(lam[p**k]) + prev)


# ----------------------------------------------------------------------------
# Synthetic sample generation (test fixture; not an automorphic form).


def synthetic_maass_data(mu: float, parity: int, epsilon: int, M: int, seed: int) -> dict:
    """A Hecke-consistent but non-automorphic coefficient table.

    lambda(p) is drawn uniformly from [-2, 2] at primes, extended by the
    Hecke recursion at prime powers and multiplicativity elsewhere. The
    result exercises every transform that only needs *some* coefficient
    sequence; it must not be used in identity tests that require a true
    form, and is labeled accordingly.
    """
    rng = np.random.default_rng(seed)
    lam = np.zeros(M + 1)
    lam[1] = 1.0
    sieve = np.ones(M + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(M**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    primes = np.nonzero(sieve)[0]
    for p in primes:
        lam[p] = rng.uniform(-2.0, 2.0)
        pk, prev, cur = p, 1.0, lam[p]
        while pk * p <= M:
            pk *= p
            prev, cur = cur, lam[p] * cur - prev
            lam[pk] = cur
    smallest = np.zeros(M + 1, dtype=np.int64)
    for p in primes:
        sel = smallest[p::p] == 0
        smallest[p::p][sel] = p
    for n in range(2, M + 1):
        p = smallest[n]
        q = 1
        m = n
        while m % p == 0:
            m //= p
            q *= p
        if m > 1:
            lam[n] = lam[q] * lam[m]
    return {
        "type": "maass",
        "mu": float(mu),
        "parity": int(parity),
        "epsilon": int(epsilon),
        "description": "synthetic Hecke-consistent sample; not automorphic",
        "coefficients": [float(v) for v in lam[1:]],
    }
