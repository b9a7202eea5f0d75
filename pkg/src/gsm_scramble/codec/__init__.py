"""GSM 06.10 full-rate (RPE-LTP) speech codec in bit-exact fixed point."""

from .frame import (
    FRAME_BYTES,
    PAYLOAD_BITS,
    CodecFrame,
    SubFrameParams,
    pack_frame,
    pack_frames,
    unpack_frame,
    unpack_frames,
    silence_frame,
    zero_frame,
)
from .rpe_ltp import (
    FRAME_LEN,
    Decoder,
    DecoderState,
    Encoder,
    EncoderState,
    decode_frame,
    decode_params,
    dequantized_lag,
    encode_frame,
    encode_samples,
    lpc_analysis,
    preprocess,
)

__all__ = [
    "FRAME_BYTES", "PAYLOAD_BITS", "FRAME_LEN",
    "CodecFrame", "SubFrameParams", "EncoderState", "DecoderState", "Encoder", "Decoder",
    "pack_frame", "pack_frames", "unpack_frame", "unpack_frames", "zero_frame", "silence_frame",
    "preprocess", "lpc_analysis", "encode_frame", "decode_frame",
    "encode_samples", "decode_params", "dequantized_lag",
]
