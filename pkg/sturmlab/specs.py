import json
import logging
import math
import os
from fractions import Fraction
from typing import Optional

from sturmlab.arithmetic import (
    RationalInterval,
    digits_from_rational,
    format_fraction,
    parse_fraction,
    real_from_digits,
    rebase_digits,
)
from sturmlab.exceptions import SpecError
from sturmlab.sturmian import (
    DEFAULT_SLOPE_RULE,
    VARIANTS,
    Morphism,
    Slope,
    apply_morphism,
    fibonacci_word,
    mechanical_word,
    random_word,
    validate_morphism_nondegenerate,
)
from sturmlab.words import WordStream


DEFAULT_REBASE_GUARD = 4
DEFAULT_RATIONAL_BASE = 2

logger = logging.getLogger("sturmlab.specs")


class NumberSpec:
    """
    A real number in [0, 1) described by its digits in a native base. Subclasses build the
    digit word; the real is the number whose base-b expansion is that word.
    """

    kind = None

    def __init__(self, native_base: int):
        if not isinstance(native_base, int) or not 2 <= native_base <= 256:
            raise SpecError(f"the base of a number spec must be an int in [2, 256] (received {native_base!r})")
        self.native_base = native_base
        self._word = None

    @property
    def is_rational(self) -> bool:
        return False

    @property
    def name(self) -> str:
        return self.kind

    def word(self) -> WordStream:
        """Digit word of the number in its native base (built once, then shared)."""
        if self._word is None:
            self._word = self._build_word()
            if self._word.alphabet_size > self.native_base:
                raise SpecError(f"{self.name} produces digits up to {self._word.alphabet_size - 1}, "
                                f"which do not fit base {self.native_base}")
        return self._word

    def interval(self, L: int) -> RationalInterval:
        """Enclosure of the number given by its first L native digits."""
        return real_from_digits(self.word().prefix(L), self.native_base)

    def to_dict(self) -> dict:
        return {"type": self.kind}

    def _build_word(self) -> WordStream:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.to_dict()})"


class FibonacciSpec(NumberSpec):
    """The binary number whose digits are the Fibonacci word, 0.0100101001001..."""

    kind = "fibonacci"

    def __init__(self):
        super().__init__(2)

    @property
    def name(self) -> str:
        return "xi_fib"

    def _build_word(self) -> WordStream:
        return fibonacci_word()


class MechanicalSpec(NumberSpec):
    kind = "mechanical"

    def __init__(self, slope: Slope, intercept: Fraction = Fraction(0), variant: str = "lower"):
        super().__init__(2)
        if variant not in VARIANTS:
            raise SpecError(f"unknown variant {variant!r} (choose from {VARIANTS})")
        if not 0 <= Fraction(intercept) < 1:
            raise SpecError(f"intercept must be in [0, 1) (received {intercept})")
        self.slope = slope
        self.intercept = Fraction(intercept)
        self.variant = variant

    def _build_word(self) -> WordStream:
        return mechanical_word(self.slope, self.intercept, self.variant)

    def to_dict(self) -> dict:
        return {"type": self.kind, **self.slope.to_dict(), "intercept": format_fraction(self.intercept),
                "variant": self.variant}


class MorphicSpec(NumberSpec):
    """Digits W phi(s) for a mechanical word s (the Fibonacci word when no slope is given)."""

    kind = "morphic"

    def __init__(self, morphism: Morphism, base_slope: Slope = None, prefix_word: str = "", base: int = None):
        super().__init__(base or morphism.target_alphabet_size)
        if not validate_morphism_nondegenerate(morphism):
            raise SpecError(f"{morphism!r} is degenerate: phi(01) = phi(10)")
        self.morphism = morphism
        self.base_slope = base_slope
        self.prefix_word = prefix_word

    def _build_word(self) -> WordStream:
        source = fibonacci_word() if self.base_slope is None else mechanical_word(self.base_slope)
        return apply_morphism(self.morphism, source, self.prefix_word)

    def to_dict(self) -> dict:
        data = {"type": self.kind, "morphism": self.morphism.to_dict(), "prefix_word": self.prefix_word,
                "base": self.native_base}
        if self.base_slope is not None:
            data["base_slope_cf"] = list(self.base_slope.partial_quotients)
            data["base_slope_cf_rule"] = self.base_slope.rule
        return data


class RationalSpec(NumberSpec):
    kind = "rational"

    def __init__(self, value: Fraction, base: int = DEFAULT_RATIONAL_BASE):
        super().__init__(base)
        self.value = Fraction(value)
        if not 0 <= self.value < 1:
            raise SpecError(f"rational specs must lie in [0, 1) (received {self.value})")

    @property
    def is_rational(self) -> bool:
        return True

    @property
    def name(self) -> str:
        return str(self.value)

    def interval(self, L: int) -> RationalInterval:
        return RationalInterval(self.value)

    def _build_word(self) -> WordStream:
        value, base = self.value, self.native_base
        numerator, denominator = value.numerator, value.denominator

        def digits():
            remainder = numerator
            while True:
                digit, remainder_next = divmod(remainder * base, denominator)
                yield digit
                remainder = remainder_next

        return WordStream(base, generator=digits(), name=f"{value} in base {base}")

    def to_dict(self) -> dict:
        return {"type": self.kind, "value": format_fraction(self.value), "base": self.native_base}


class DigitFileSpec(NumberSpec):
    """Digits read from a one-line digit string (or a byte-per-symbol file with format "bytes")."""

    kind = "digit_file"

    def __init__(self, path: str, base: int, file_format: str = "digits"):
        super().__init__(base)
        if file_format not in ("digits", "bytes"):
            raise SpecError(f"unknown digit file format {file_format!r}")
        self.path = path
        self.file_format = file_format

    def _build_word(self) -> WordStream:
        try:
            if self.file_format == "bytes":
                return WordStream.load_bytes(self.path, self.native_base)
            return WordStream.load_digits(self.path, self.native_base)
        except OSError as e:
            raise SpecError(f"cannot read digit file {self.path}: {e}")
        except ValueError as e:
            raise SpecError(f"invalid digit file {self.path}: {e}")

    def to_dict(self) -> dict:
        return {"type": self.kind, "path": self.path, "base": self.native_base, "format": self.file_format}


class RandomSpec(NumberSpec):
    kind = "random"

    def __init__(self, base: int, seed: int = None):
        super().__init__(base)
        self.seed = seed

    def _build_word(self) -> WordStream:
        return random_word(self.native_base, self.seed)

    def to_dict(self) -> dict:
        return {"type": self.kind, "base": self.native_base, "seed": self.seed}


def _slope(data: dict, prefix: str = "") -> Optional[Slope]:
    quotients = data.get(f"{prefix}slope_cf")
    if quotients is None:
        return None
    return Slope(quotients, rule=data.get(f"{prefix}slope_cf_rule", DEFAULT_SLOPE_RULE))


def parse_number_spec(data: dict, root: str = None, seed: int = None) -> NumberSpec:
    """
    Build a NumberSpec from its JSON form.

    >>> parse_number_spec({"type": "rational", "value": "1/3"}).interval(10)
    RationalInterval(1/3)

    :param data: the decoded JSON object
    :param root: directory that relative digit-file paths are resolved against
    :param seed: overrides the seed of a random spec
    :raises SpecError: when the spec is malformed
    """
    if not isinstance(data, dict):
        raise SpecError(f"a number spec must be a JSON object (found {type(data).__name__})")
    kind = data.get("type")
    try:
        if kind == "fibonacci":
            return FibonacciSpec()
        if kind == "mechanical":
            slope = _slope(data)
            if slope is None:
                raise SpecError("mechanical specs need slope_cf")
            return MechanicalSpec(slope, parse_fraction(data.get("intercept", "0")), data.get("variant", "lower"))
        if kind == "morphic":
            if "morphism" not in data:
                raise SpecError("morphic specs need a morphism")
            return MorphicSpec(
                Morphism.from_strings(data["morphism"]),
                base_slope=_slope(data, "base_"),
                prefix_word=str(data.get("prefix_word", "")),
                base=int(data["base"]) if "base" in data else None,
            )
        if kind == "rational":
            if "value" in data:
                value = parse_fraction(data["value"])
            else:
                value = Fraction(int(data["p"]), int(data["q"]))
            return RationalSpec(value, int(data.get("base", DEFAULT_RATIONAL_BASE)))
        if kind == "digit_file":
            path = data["path"]
            if root is not None and not os.path.isabs(path):
                path = os.path.join(root, path)
            return DigitFileSpec(path, int(data["base"]), data.get("format", "digits"))
        if kind == "random":
            return RandomSpec(int(data["base"]), seed if seed is not None else data.get("seed"))
    except SpecError:
        raise
    except KeyError as e:
        raise SpecError(f"{kind} spec is missing the field {e}")
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise SpecError(f"invalid {kind} spec: {e}")
    raise SpecError(f"unknown number spec type {kind!r}")


def from_json(path: str, seed: int = None) -> NumberSpec:
    """Load a number spec from a JSON file; digit-file paths are relative to the spec file."""
    try:
        with open(path) as f:
            data = json.load(f)
    except OSError as e:
        raise SpecError(f"cannot read spec file {path}: {e}")
    except json.JSONDecodeError as e:
        raise SpecError(f"spec file {path} is not valid JSON: {e}")
    logger.info(f"loaded {data.get('type') if isinstance(data, dict) else data} spec from {path}")
    return parse_number_spec(data, root=os.path.dirname(os.path.abspath(path)), seed=seed)


def sized_digit_count(L: int, native_base: int, base: int, guard: int = DEFAULT_REBASE_GUARD) -> int:
    """
    floor(L log r / log s) - guard: the number of base-s digits expected from L base-r digits.

    >>> sized_digit_count(10000, 2, 3)
    6305
    >>> sized_digit_count(4000, 2, 4)
    1996
    """
    if base == native_base:
        return L
    bound = native_base ** L
    count = math.floor(L * math.log(native_base) / math.log(base))
    # the float estimate can be off by one next to exact powers: s^count <= r^L < s^(count + 1)
    while base ** (count + 1) <= bound:
        count += 1
    while count > 0 and base ** count > bound:
        count -= 1
    return max(0, count - guard)


def certified_digits(spec: NumberSpec, base: int, L: int, guard: int = DEFAULT_REBASE_GUARD) -> WordStream:
    """
    Certified base-`base` digits of the number, obtained from its first L native digits.
    Native digits are used directly; other bases go through rebase_digits on the enclosure.
    """
    if base == spec.native_base:
        digits = spec.word().prefix(L)
    elif spec.is_rational:
        count = sized_digit_count(L, spec.native_base, base, guard=0)
        digits = digits_from_rational(spec.interval(L).lo, base, count)
    else:
        count = sized_digit_count(L, spec.native_base, base, guard=guard)
        digits = rebase_digits(spec.interval(L), base, count)
        if len(digits) < count:
            logger.info(f"only {len(digits)} of {count} base-{base} digits of {spec.name} are certified")
    logger.debug(f"{len(digits)} certified base-{base} digits of {spec.name} from L={L}")
    return WordStream(base, digits, name=f"{spec.name}[base {base}]")
