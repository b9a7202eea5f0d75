"""Command-line front end.

Exit status: 0 success, 1 usage error, 2 data or format error, 3 decryption
failure (wrong key or tampered stream).
"""

from __future__ import annotations

import argparse
import logging
import os
import random
import secrets
import sys
from pathlib import Path

import numpy as np

from . import codec, metrics
from .errors import DecryptionFailed, GsmScrambleError
from .scrambler import DEFAULT_FRAMES_PER_SUPER, DEFAULT_SUB_FRAME_LEN, INVERSION_MODES, ScrambleConfig
from .secure_stream import (
    decrypt_stream,
    eavesdrop_stream,
    encrypt_stream,
    inject_bit_errors,
    scrambled_signal,
)
from .speech_io import PcmSignal, pad_to_superframe, read_wav, write_wav

log = logging.getLogger("gsm_scramble")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_DECRYPT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_key(path) -> bytes:
    path = Path(path)
    data = path.read_bytes()
    if path.suffix.lower() == ".hex":
        text = data.decode("ascii", errors="replace").strip()
        try:
            key = bytes.fromhex(text)
        except ValueError:
            raise UsageError(f"{path}: not a hex key") from None
    else:
        key = data
    if len(key) != 8:
        raise UsageError(f"{path}: a DES key is 8 bytes, got {len(key)}")
    return key


def write_key(key: bytes, path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".hex":
        path.write_text(key.hex().upper() + "\n")
    else:
        path.write_bytes(key)


def _config(args) -> ScrambleConfig:
    try:
        return ScrambleConfig(args.sub_frame_len, args.frames_per_super, args.inversion_mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + ("in" if n == "input" else n).replace("_", "-") for n in missing)
        raise UsageError(f"{args.command} requires {flags}")


def cmd_keygen(args):
    _require(args, "out")
    key = random.Random(args.seed).randbytes(8) if args.seed is not None else secrets.token_bytes(8)
    write_key(key, args.out)


def cmd_encrypt(args):
    _require(args, "input", "key", "out")
    stream = encrypt_stream(read_wav(args.input), read_key(args.key), _config(args))
    if args.ber:
        stream = inject_bit_errors(stream, args.ber, args.seed or 0)
    Path(args.out).write_bytes(stream)


def cmd_decrypt(args):
    _require(args, "input", "key", "out")
    stream = Path(args.input).read_bytes()
    write_wav(decrypt_stream(stream, read_key(args.key), args.inversion_mode), args.out)


def cmd_eavesdrop(args):
    _require(args, "input", "out")
    write_wav(eavesdrop_stream(Path(args.input).read_bytes()), args.out)


def cmd_codec_encode(args):
    _require(args, "input", "out")
    sig = read_wav(args.input)
    padded, _ = pad_to_superframe(sig, codec.FRAME_LEN, 1)
    Path(args.out).write_bytes(codec.Encoder().encode(padded.samples))


def cmd_codec_decode(args):
    _require(args, "input", "out")
    write_wav(PcmSignal(codec.Decoder().decode(Path(args.input).read_bytes())), args.out)


def _write_spectrogram(sig, path):
    metrics.export_spectrogram_csv(metrics.spectrogram(sig), path)


def _summary(ref: PcmSignal, test: PcmSignal) -> dict:
    snr = metrics.segmental_snr(ref, test)
    try:
        xc = metrics.max_normalized_cross_correlation(ref, test)
    except GsmScrambleError:
        xc = float("nan")
    return {"segsnr_db": snr.mean_db, "active": snr.active_segments, "total": snr.total_segments, "xcorr": xc}


def cmd_analyze(args):
    _require(args, "ref", "input")
    ref, test = read_wav(args.ref), read_wav(args.input)
    s = _summary(ref, test)
    print(f"segmental SNR: {s['segsnr_db']:.2f} dB ({s['active']}/{s['total']} active segments)")
    print(f"max normalized cross-correlation: {s['xcorr']:.4f}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        metrics.export_overlay_csv(ref, test, out / "overlay.csv")
        _write_spectrogram(ref, out / "spectrogram_reference.csv")
        _write_spectrogram(test, out / "spectrogram_test.csv")


def cmd_simulate(args):
    _require(args, "input", "key", "out")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    original = read_wav(args.input)
    key = read_key(args.key)
    config = _config(args)
    n = len(original)

    stream = encrypt_stream(original, key, config)
    if args.ber:
        stream = inject_bit_errors(stream, args.ber, args.seed or 0)
    signals = {
        "original": original,
        "scrambled": PcmSignal(scrambled_signal(original, key, config).samples[:n]),
        "eavesdropped": PcmSignal(eavesdrop_stream(stream).samples[:n]),
        "recovered": decrypt_stream(stream, key, config.inversion_mode),
    }
    for name, sig in signals.items():
        write_wav(sig, out / f"{name}.wav")
        _write_spectrogram(sig, out / f"spectrogram_{name}.csv")
    metrics.export_overlay_csv(original, signals["recovered"], out / "overlay.csv")

    codec_only = codec.decode_params(codec.encode_samples(pad_to_superframe(original, codec.FRAME_LEN, 1)[0].samples))
    lines = [
        f"input: {args.input} ({n} samples, {n / 8000:.2f} s)",
        f"sub_frame_len={config.sub_frame_len} frames_per_super={config.frames_per_super} "
        f"inversion={config.inversion_mode} ber={args.ber}",
        f"stream bytes: {len(stream)}",
    ]
    rows = [("codec only", PcmSignal(codec_only[:n]))] + [(k, signals[k]) for k in ("scrambled", "eavesdropped", "recovered")]
    for label, sig in rows:
        s = _summary(original, sig)
        lines.append(f"{label:>13}: segSNR {s['segsnr_db']:7.2f} dB  xcorr {s['xcorr']:.4f}")
    rms = float(np.sqrt(np.mean((original.samples.astype(float) - signals["recovered"].samples) ** 2))) if n else 0.0
    lines.append(f"RMS(original - recovered): {rms:.2f}")
    lines.append("files: " + ", ".join(sorted(p.name for p in out.iterdir() if p.name != "report.txt") + ["report.txt"]))
    (out / "report.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))


COMMANDS = {
    "keygen": cmd_keygen,
    "encrypt": cmd_encrypt,
    "decrypt": cmd_decrypt,
    "eavesdrop": cmd_eavesdrop,
    "codec-encode": cmd_codec_encode,
    "codec-decode": cmd_codec_decode,
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gsm-scramble", description="Scrambled, DES-keyed speech over a GSM full-rate vocoder.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--in", dest="input", help="input WAV / .gvs / codec file")
    p.add_argument("--out", help="output file or directory")
    p.add_argument("--key", help="key file: .key = 8 raw bytes, .hex = 16 hex characters")
    p.add_argument("--ref", help="reference WAV (analyze)")
    p.add_argument("--sub-frame-len", type=int, default=DEFAULT_SUB_FRAME_LEN)
    p.add_argument("--frames-per-super", type=int, default=DEFAULT_FRAMES_PER_SUPER)
    p.add_argument("--inversion-mode", choices=INVERSION_MODES, default="time")
    p.add_argument("--ber", type=float, default=0.0, help="codec payload bit error rate")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if not 0.0 <= args.ber <= 1.0:
        parser.error("--ber must be in [0, 1]")
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"gsm-scramble: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DecryptionFailed as exc:
        print(f"gsm-scramble: decryption failed: {exc}", file=sys.stderr)
        return EXIT_DECRYPT
    except (GsmScrambleError, OSError) as exc:
        print(f"gsm-scramble: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
