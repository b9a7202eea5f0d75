"""End-to-end speech scrambling for GSM full-rate voice channels.

Speech is cut into sub-frames, permuted and time-inverted under a DES-derived
key schedule, then coded with the RPE-LTP vocoder.  The permutation tables
travel DES-CBC encrypted alongside the codec frames.
"""

from .errors import *  # noqa: F401,F403
from .scrambler import PermutationTable, ScrambleConfig
from .secure_stream import decrypt_stream, eavesdrop_stream, encrypt_stream, inject_bit_errors
from .speech_io import PcmSignal, read_wav, write_wav

__version__ = "0.1.0"
