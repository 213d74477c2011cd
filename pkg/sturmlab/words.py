import logging
import threading
from typing import Iterable, Iterator, Optional, Sequence, Tuple, Union

from sturmlab.exceptions import PrecisionError


DEFAULT_MAX_ALPHABET = 256
DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"

logger = logging.getLogger("sturmlab.words")

Factor = Tuple[int, ...]
WordLike = Union[bytes, bytearray, str, Sequence[int]]


class WordStream:
    """
    A word over the digit alphabet {0, 1, ..., b-1} that is materialized lazily. The
    already materialized prefix never changes when the word is extended, so every
    quantity computed from a prefix stays valid once more symbols are available.

    Symbols are stored one byte per symbol, which limits the alphabet to 256 letters.
    Query functions only read the materialized prefix; extending the word takes a lock.
    Share a word between threads by calling freeze() first.
    """

    def __init__(
        self,
        alphabet_size: int,
        symbols: Iterable[int] = (),
        generator: Optional[Iterator[int]] = None,
        name: str = None,
    ):
        """
        :param alphabet_size: size b of the alphabet (2 <= b <= 256)
        :param symbols: initial materialized symbols
        :param generator: iterator yielding the symbols after the initial ones; if None,
        the word is finite
        :param name: label used in logs and reports
        """
        _validate_alphabet_size(alphabet_size)
        self.alphabet_size = alphabet_size
        self.name = name or "word"
        self._symbols = bytearray()
        self._generator = generator
        self._lock = threading.Lock()
        for symbol in symbols:
            self._append(symbol)
        logger.info(f"created word {self.name} over {alphabet_size} letters "
                    f"({len(self._symbols)} symbols materialized, finite={generator is None})")

    @property
    def is_finite(self) -> bool:
        """True when the generator is exhausted (or was never given)."""
        return self._generator is None

    def extend_to(self, length: int) -> int:
        """
        Materialize at least `length` symbols if the generator can supply them.

        :param length: requested prefix length
        :return: the number of materialized symbols (smaller than `length` only for finite words)
        """
        with self._lock:
            while len(self._symbols) < length and self._generator is not None:
                try:
                    symbol = next(self._generator)
                except StopIteration:
                    logger.debug(f"generator of {self.name} exhausted at {len(self._symbols)} symbols")
                    self._generator = None
                    break
                self._append(symbol)
        return len(self._symbols)

    def prefix(self, length: int) -> bytes:
        """
        Return the prefix of the given length as bytes (one byte per symbol).

        >>> WordStream(2, [0, 1, 1, 0]).prefix(3)
        b'\\x00\\x01\\x01'
        """
        if length < 0:
            raise ValueError(f"prefix length must be non-negative (received {length})")
        available = self.extend_to(length)
        if available < length:
            raise PrecisionError(f"word {self.name} has only {available} symbols; "
                                 f"a prefix of length {length} was requested")
        return bytes(self._symbols[:length])

    def symbols(self, length: int) -> Factor:
        """Return the prefix of the given length as a tuple of ints."""
        return tuple(self.prefix(length))

    def freeze(self, length: int = None) -> "WordStream":
        """
        Return a finite, immutable-by-convention snapshot of the first `length` symbols
        (default: everything materialized so far) that is safe to share between threads.
        """
        if length is None:
            length = len(self)
        return WordStream(self.alphabet_size, self.prefix(length), name=f"{self.name}[:{length}]")

    def to_digit_string(self, length: int) -> str:
        """
        One-line digit string of the prefix (digits 0-9 then a-z, so b <= 36).

        >>> WordStream.from_digit_string("0100101", 2).to_digit_string(5)
        '01001'
        """
        if self.alphabet_size > len(DIGIT_CHARS):
            raise ValueError(f"digit strings support alphabets of at most {len(DIGIT_CHARS)} letters")
        return "".join(DIGIT_CHARS[x] for x in self.prefix(length))

    @classmethod
    def from_digit_string(cls, text: str, alphabet_size: int, name: str = None) -> "WordStream":
        """Build a finite word from a one-line digit string."""
        text = text.strip().lower()
        try:
            symbols = [DIGIT_CHARS.index(c) for c in text]
        except ValueError:
            raise ValueError(f"invalid digit character in {text[:20]!r}...")
        return cls(alphabet_size, symbols, name=name)

    def save_digits(self, file: str, length: int):
        """Write the prefix as a one-line digit string."""
        with open(file, "w") as f:
            f.write(self.to_digit_string(length) + "\n")

    @classmethod
    def load_digits(cls, file: str, alphabet_size: int) -> "WordStream":
        with open(file) as f:
            return cls.from_digit_string(f.read(), alphabet_size, name=file)

    def save_bytes(self, file: str, length: int):
        """Write the prefix as a binary file with one byte per symbol."""
        with open(file, "wb") as f:
            f.write(self.prefix(length))

    @classmethod
    def load_bytes(cls, file: str, alphabet_size: int) -> "WordStream":
        with open(file, "rb") as f:
            return cls(alphabet_size, f.read(), name=file)

    def _append(self, symbol: int):
        if not 0 <= symbol < self.alphabet_size:
            raise ValueError(f"symbol {symbol} is outside the alphabet {{0, ..., {self.alphabet_size - 1}}} "
                             f"of word {self.name}")
        self._symbols.append(symbol)

    def __iter__(self) -> Iterator[int]:
        """Iterate over the symbols, extending the word as needed (endless for infinite words)."""
        position = 0
        while position < len(self._symbols) or self.extend_to(position + 1) > position:
            yield self._symbols[position]
            position += 1

    def __len__(self):
        return len(self._symbols)

    def __getitem__(self, index: int) -> int:
        if index < 0:
            raise IndexError("negative indices are not supported on a lazy word")
        return self.prefix(index + 1)[index]

    def __repr__(self):
        return f"WordStream(name = {self.name}, b = {self.alphabet_size}, materialized = {len(self)})"


def as_bytes(word: WordLike) -> bytes:
    """
    Normalize a finite word given as bytes, a digit string or a sequence of ints.

    >>> as_bytes("0102")
    b'\\x00\\x01\\x00\\x02'
    >>> as_bytes((1, 0))
    b'\\x01\\x00'
    """
    if isinstance(word, (bytes, bytearray)):
        return bytes(word)
    if isinstance(word, str):
        try:
            return bytes(DIGIT_CHARS.index(c) for c in word.lower())
        except ValueError:
            raise ValueError(f"invalid digit character in {word!r}")
    return bytes(word)


def as_factor(word: WordLike) -> Factor:
    """Normalize a finite word to a tuple of ints."""
    return tuple(as_bytes(word))


def _validate_alphabet_size(alphabet_size: int):
    if not isinstance(alphabet_size, int):
        raise TypeError(f"alphabet size should be an int (found a type of {type(alphabet_size)})")
    if not 2 <= alphabet_size <= DEFAULT_MAX_ALPHABET:
        raise ValueError(f"alphabet size must be between 2 and {DEFAULT_MAX_ALPHABET} (received {alphabet_size})")
