"""GSM full-rate RPE-LTP codec on the bundled speech sample.

Run:  python demos/03_codec.py
"""

import numpy as np

from gsm_scramble import codec, metrics
from gsm_scramble.signals import example_speech, synthetic_vowel

speech = example_speech()
x = speech.samples[: len(speech) - len(speech) % 160]

enc = codec.Encoder()
data = enc.encode(x)
print(f"{len(x)} samples -> {len(data)} bytes = {len(data) // 33} frames of 33 bytes "
      f"({len(data) * 8 / (len(x) / 8000) / 1000:.1f} kbit/s)")

frame = codec.unpack_frame(data[33 * 40 : 33 * 41])
print("frame 40 LAR codes:", frame.lar_codes)
print("frame 40 LTP lags: ", [sp.ltp_lag for sp in frame.sub_params])

y = codec.Decoder().decode(data)
r = metrics.segmental_snr(x, y)
print(f"speech: segmental SNR {r.mean_db:.2f} dB over {r.active_segments}/{r.total_segments} active segments")
print(f"speech: max normalized cross-correlation {metrics.max_normalized_cross_correlation(x, y):.3f}")

v = synthetic_vowel(2.0).samples
vy = codec.decode_params(codec.encode_samples(v))
print(f"vowel:  segmental SNR {metrics.segmental_snr(v, vy).mean_db:.2f} dB")

silence = codec.decode_params(codec.encode_samples(np.zeros(800)))
print("silence decodes to peak", int(np.abs(silence).max()))
