import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

import pandas as pd

from sturmlab.arithmetic import (
    CFExpansion,
    LegendreVerdict,
    RationalInterval,
    certified_cf,
    format_fraction,
    legendre_check,
)
from sturmlab.complexity import ComplexityProfile, branching_indices, return_time
from sturmlab.exceptions import InvariantViolation, PrecisionError
from sturmlab.words import Factor, WordStream


DEFAULT_CUTOFF_Q = 100
DEFAULT_S_MAX_FACTOR = 4

logger = logging.getLogger("sturmlab.approximation")


@dataclass
class RepetitionCertificate:
    """
    Decomposition of the prefix of length r(n) as W (UV)^(t+1) U with t(u+v) + u = n.
    The two occurrences of the repeated length-n factor sit |UV| apart.
    """
    n: int
    W: Factor
    U: Factor
    V: Factor
    t: int
    alpha: Fraction

    @property
    def w(self) -> int:
        return len(self.W)

    @property
    def u(self) -> int:
        return len(self.U)

    @property
    def v(self) -> int:
        return len(self.V)

    @property
    def period(self) -> int:
        return self.u + self.v

    @property
    def return_time(self) -> int:
        return self.w + (self.t + 1) * self.period + self.u

    def word(self) -> Factor:
        """The reconstructed prefix W (UV)^(t+1) U."""
        return self.W + (self.U + self.V) * (self.t + 1) + self.U

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "w": self.w,
            "u": self.u,
            "v": self.v,
            "t": self.t,
            "alpha": format_fraction(self.alpha),
        }


def repetition_decomposition(w: WordStream, n: int, L: int) -> RepetitionCertificate:
    """
    Decompose the prefix of length r(n) around its repeated length-n factor.

    The factor X ending at r(n) occurs exactly once before (a third occurrence would give a
    smaller return time), at position i. With period pi = r(n) - n - i, the prefix is
    W = x[:i] followed by x[i:r(n)], which has period pi; pi is its minimal period, so the
    decomposition is unique. Here t = n // pi may be 0 when r(n) >= 2n.

    >>> from sturmlab.sturmian import fibonacci_word
    >>> cert = repetition_decomposition(fibonacci_word(), 2, 50)
    >>> cert.W, cert.U, cert.V, cert.t
    ((), (0, 1), (0,), 0)

    :raises PrecisionError: when r(n) is not found within the first L symbols
    """
    r = return_time(w, n, L)
    if r is None:
        raise PrecisionError(f"r({n}) of {w.name} is unknown within the first {L} symbols")
    prefix = w.prefix(r)
    repeated = prefix[r - n:]
    start = prefix.find(repeated)
    period = r - n - start
    t, u = divmod(n, period)
    block = tuple(prefix[start:start + period])
    cert = RepetitionCertificate(
        n=n,
        W=tuple(prefix[:start]),
        U=block[:u],
        V=block[u:],
        t=t,
        alpha=Fraction(r, n),
    )
    if cert.word() != tuple(prefix) or cert.t * cert.period + cert.u != n:
        raise InvariantViolation(f"repetition decomposition of {w.name} at n={n} does not reconstruct the prefix")
    logger.debug(f"n={n}: r={r}, w={cert.w}, u={cert.u}, v={cert.v}, t={t}")
    return cert


def repetition_prefix(w: WordStream, n: int, L: int) -> Optional[RepetitionCertificate]:
    """
    Repetition certificate witnessing r(n) < 2n, or None when r(n) >= 2n.

    Example usage:
    >>> from sturmlab.sturmian import periodic_word
    >>> cert = repetition_prefix(periodic_word("001"), 6, 50)
    >>> cert.period, cert.t, cert.alpha
    (3, 2, Fraction(3, 2))

    :raises PrecisionError: when r(n) is not found within the first L symbols
    """
    r = return_time(w, n, L)
    if r is None:
        raise PrecisionError(f"r({n}) of {w.name} is unknown within the first {L} symbols")
    if r >= 2 * n:
        return None
    return repetition_decomposition(w, n, L)


@dataclass
class ApproximantRecord:
    """
    Rational number numerator / (b^w (b^(u+v) - 1)) whose base-b expansion is W (UV)^inf,
    together with the error bound b^(-alpha n) it inherits from a repetition certificate.
    """
    numerator: int
    b: int
    w: int
    period: int
    n: int
    alpha: Fraction
    verified: Optional[bool] = None
    legendre: Optional[LegendreVerdict] = None
    in_certified_cf: Optional[bool] = None

    @property
    def denominator(self) -> int:
        return self.b ** self.w * (self.b ** self.period - 1)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def error_bound(self) -> Fraction:
        return Fraction(1, self.b ** int(self.alpha * self.n))

    @property
    def gcd(self) -> int:
        return math.gcd(self.numerator, self.denominator)

    @property
    def denominator_within_bound(self) -> bool:
        """b^w (b^(u+v) - 1) <= b^((alpha - 1) n)."""
        return self.denominator <= self.b ** int((self.alpha - 1) * self.n)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "alpha": format_fraction(self.alpha),
            "b": self.b,
            "w": self.w,
            "u_plus_v": self.period,
            "numerator": str(self.numerator),
            "denominator": str(self.denominator),
            "value": format_fraction(self.value),
            "gcd": str(self.gcd),
            "error_bound_exponent": int(self.alpha * self.n),
            "verified": self.verified,
            "legendre": self.legendre.value if self.legendre else None,
            "in_certified_cf": self.in_certified_cf,
        }


def _digits_value(digits: Factor, b: int) -> int:
    value = 0
    for digit in digits:
        value = value * b + digit
    return value


def approximant_from_certificate(
    cert: RepetitionCertificate,
    b: int,
    source: RationalInterval = None,
) -> ApproximantRecord:
    """
    Build the rational approximant of a repetition certificate.

    >>> cert = RepetitionCertificate(n=1, W=(1,), U=(), V=(0,), t=1, alpha=Fraction(3, 1))
    >>> approximant_from_certificate(cert, 2).value
    Fraction(1, 2)

    :param cert: the certificate (its symbols must be base-b digits)
    :param b: base
    :param source: enclosure of the real whose digits produced the certificate; when given,
    |xi - value| <= b^(-alpha n) is checked for every xi in it and recorded as `verified`
    :return: the approximant record
    """
    if any(x >= b for x in cert.W + cert.U + cert.V):
        raise ValueError(f"certificate symbols are not base-{b} digits")
    repeat = b ** cert.period - 1
    numerator = _digits_value(cert.W, b) * repeat + _digits_value(cert.U + cert.V, b)
    record = ApproximantRecord(numerator=numerator, b=b, w=cert.w, period=cert.period, n=cert.n,
                               alpha=cert.alpha)
    if source is not None:
        record.verified = source.max_distance(record.value) <= record.error_bound
        if not record.verified:
            logger.warning(f"approximant {record.value} at n={cert.n} is farther than "
                           f"{b}^-{int(cert.alpha * cert.n)} from part of the source interval")
    return record


def certificates_along_branching(
    w: WordStream,
    n_max: int,
    L: int,
    b: int,
    source: RationalInterval = None,
    cf: CFExpansion = None,
) -> List[ApproximantRecord]:
    """
    Approximants for every branching index n_k <= n_max with alpha_k = r(n_k)/n_k < 2.

    With a source interval each record is checked against its error bound and run through the
    Legendre test (which always applies since alpha n <= 2n - 1); with a certified expansion
    the reduced value is looked up among its convergents when they reach its denominator.
    """
    branching = branching_indices(w, n_max, L)
    if source is not None and cf is None:
        cf = certified_cf(source)
    records = []
    for n in branching.indices:
        cert = repetition_prefix(w, n, L)
        if cert is None:
            continue
        record = approximant_from_certificate(cert, b, source=source)
        if source is not None:
            record.legendre = legendre_check(source, record.value)
        if cf is not None and len(cf) >= 2 and cf.denominators[-1] >= record.value.denominator:
            record.in_certified_cf = record.value in cf.convergents
        records.append(record)
    logger.info(f"built {len(records)} approximants for {w.name} from {len(branching.indices)} branching indices")
    return records


def exponent_five_halves_witnesses(x: RationalInterval, cf: CFExpansion) -> List[Fraction]:
    """
    Certified convergents p/q with |xi - p/q| < q^(-5/2) for every xi in x, in order.

    >>> exponent_five_halves_witnesses(RationalInterval(Fraction(1, 3)), CFExpansion([0, 3]))
    [Fraction(0, 1), Fraction(1, 3)]
    """
    witnesses = []
    for c in cf.convergents:
        distance = x.max_distance(c)
        # d < q^(-5/2)  <=>  d^2 q^5 < 1
        if distance * distance * c.denominator ** 5 < 1:
            witnesses.append(c)
    return witnesses


@dataclass
class ShapeDecomposition:
    """q = b^r (b^s - 1) / m."""
    r: int
    s: int
    m: int

    def denominator(self, b: int) -> Fraction:
        return Fraction(b ** self.r * (b ** self.s - 1), self.m)

    def to_dict(self) -> dict:
        return {"r": self.r, "s": self.s, "m": self.m}


def _strip_base_primes(q: int, b: int) -> int:
    g = math.gcd(q, b)
    while g > 1:
        q //= g
        g = math.gcd(q, b)
    return q


def shape_decompose(q: int, b: int, M: int, s_max: int) -> Optional[ShapeDecomposition]:
    """
    Find q = b^r (b^s - 1) / m with 1 <= m <= M, taking the smallest s, then the smallest r.

    >>> shape_decompose(12, 2, 3, 30)
    ShapeDecomposition(r=2, s=2, m=1)
    >>> shape_decompose(5, 2, 3, 30)
    ShapeDecomposition(r=0, s=4, m=3)
    >>> shape_decompose(7, 2, 1, 2) is None
    True
    """
    if q < 1:
        raise ValueError(f"q must be >= 1 (received {q})")
    bound = M * q
    coprime_part = _strip_base_primes(q, b)
    for s in range(1, s_max + 1):
        repunit = b ** s - 1
        if repunit > bound:
            break
        # the part of q coprime to b has to divide b^s - 1
        if pow(b, s, coprime_part) != 1 % coprime_part:
            continue
        numerator = repunit
        r = 0
        while numerator <= bound:
            if numerator % q == 0:
                return ShapeDecomposition(r=r, s=s, m=numerator // q)
            numerator *= b
            r += 1
    return None


@dataclass
class MConstant:
    """M = 2 (b^(2(rho + 1)) + 1)."""
    rho: int
    b: int
    M: int


def estimate_M(rho: int, b: int) -> MConstant:
    """
    >>> estimate_M(1, 2).M, estimate_M(1, 3).M, estimate_M(2, 2).M
    (34, 164, 130)
    """
    if rho < 1:
        raise ValueError(f"rho must be >= 1 (received {rho})")
    return MConstant(rho=rho, b=b, M=2 * (b ** (2 * (rho + 1)) + 1))


def near_reduced_bound(rho: int, b: int) -> int:
    """Largest gcd(numerator, denominator) expected of an approximant: 2 b^(2(rho + 1))."""
    return 2 * b ** (2 * (rho + 1))


@dataclass
class ConvergentClassification:
    j: int
    p: int
    q: int
    passes_Mq2: bool
    shape: Optional[ShapeDecomposition] = None
    violation: bool = False

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "p": str(self.p),
            "q": str(self.q),
            "passes_Mq2": self.passes_Mq2,
            "shape": self.shape.to_dict() if self.shape else None,
            "violation": self.violation,
        }


@dataclass
class ClassificationReport:
    b: int
    M: int
    cutoff_q: int
    s_max: int
    convergents: List[ConvergentClassification] = field(default_factory=list)

    @property
    def passing(self) -> List[ConvergentClassification]:
        return [c for c in self.convergents if c.passes_Mq2]

    @property
    def violations(self) -> List[int]:
        """Denominators q >= cutoff_q that pass the 1/(M q^2) filter without a decomposition."""
        return [c.q for c in self.convergents if c.violation]

    @property
    def unclassified_small_q(self) -> int:
        return sum(1 for c in self.passing if c.shape is None and not c.violation)

    @property
    def max_m(self) -> Optional[int]:
        return max((c.shape.m for c in self.passing if c.shape), default=None)

    def to_frame(self) -> pd.DataFrame:
        rows = [{
            "j": c.j,
            "p": c.p,
            "q": c.q,
            "passes_Mq2": c.passes_Mq2,
            "r": c.shape.r if c.shape else None,
            "s": c.shape.s if c.shape else None,
            "m": c.shape.m if c.shape else None,
            "violation": c.violation,
        } for c in self.convergents]
        df = pd.DataFrame(rows, columns=["j", "p", "q", "passes_Mq2", "r", "s", "m", "violation"])
        for column in ("r", "s", "m"):
            df[column] = pd.array(df[column].tolist(), dtype="Int64")
        return df

    def summary(self) -> dict:
        return {
            "passing": len(self.passing),
            "violations": [str(q) for q in self.violations],
            "unclassified_small_q": self.unclassified_small_q,
            "max_m": self.max_m,
        }


def default_s_max(x: RationalInterval, cf: CFExpansion) -> int:
    """
    4 log(1/width), i.e. 4 L log b for an interval of L base-b digits. A point interval
    uses 4 log(q + 1) of its largest denominator instead.
    """
    if x.is_point:
        size = math.log(max(cf.denominators, default=1) + 1)
    else:
        size = math.log(x.width.denominator) - math.log(x.width.numerator)
    return max(1, math.ceil(DEFAULT_S_MAX_FACTOR * size))


def classify_good_convergents(
    x: RationalInterval,
    b: int,
    M: int,
    cf: CFExpansion,
    s_max: int = None,
    cutoff_q: int = DEFAULT_CUTOFF_Q,
) -> ClassificationReport:
    """
    For every certified convergent with |xi - p/q| < 1/(M q^2) for all xi in x, look for a
    decomposition q = b^r (b^s - 1)/m with m <= M. A passing convergent without one is a
    violation when q >= cutoff_q and an unclassified small-q convergent otherwise.

    :param x: enclosure of the real
    :param b: base
    :param M: the constant bounding m
    :param cf: certified expansion of x
    :param s_max: largest s to try (default: see default_s_max)
    :param cutoff_q: smallest q the classification is enforced for
    :return: the classification report
    """
    if s_max is None:
        s_max = default_s_max(x, cf)
    report = ClassificationReport(b=b, M=M, cutoff_q=cutoff_q, s_max=s_max)
    for j, (p, q) in enumerate(zip(cf.numerators, cf.denominators)):
        passes = x.max_distance(Fraction(p, q)) * M * q * q < 1
        entry = ConvergentClassification(j=j, p=p, q=q, passes_Mq2=passes)
        if passes:
            entry.shape = shape_decompose(q, b, M, s_max)
            entry.violation = entry.shape is None and q >= cutoff_q
            if entry.violation:
                logger.warning(f"convergent {p}/{q} passes the 1/(Mq^2) filter but has no shape "
                               f"with m <= {M}")
        report.convergents.append(entry)
    logger.info(f"classified {len(cf)} convergents in base {b}: {len(report.passing)} pass, "
                f"{len(report.violations)} violations")
    return report


def alpha_gaps(profile: ComplexityProfile) -> List[int]:
    """
    Gaps between the positions k of consecutive branching indices with alpha_k < 2.
    Descriptive only; no bound is asserted.
    """
    positions = [k for k, n in enumerate(profile.branching_indices, start=1) if profile.r[n] < 2 * n]
    return [b - a for a, b in zip(positions, positions[1:])]
