"""Exception hierarchy shared by every stage of the pipeline."""


class GsmScrambleError(Exception):
    """Base class for all errors raised by this package."""


class LengthMismatch(GsmScrambleError, ValueError):
    pass


# speech_io
class NotWav(GsmScrambleError):
    pass


class UnsupportedFormat(GsmScrambleError):
    pass


# scrambler
class TableError(GsmScrambleError):
    pass


class BadVersion(TableError):
    pass


class Truncated(GsmScrambleError):
    pass


class NotAPermutation(TableError):
    pass


# des
class CipherError(GsmScrambleError):
    pass


class BadLength(CipherError):
    pass


class BadPadding(CipherError):
    pass


# codec
class InvalidFrame(GsmScrambleError):
    pass


class BadMagic(InvalidFrame):
    pass


# secure_stream
class BadHeader(GsmScrambleError):
    pass


class DecryptionFailed(GsmScrambleError):
    """Wrong key or tampered index table."""


# metrics
class SilentInput(GsmScrambleError, ValueError):
    pass


class BadWindow(GsmScrambleError, ValueError):
    pass
