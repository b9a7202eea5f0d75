import numpy as np
import pytest

from gsm_scramble import cli
from gsm_scramble.speech_io import PcmSignal, read_wav, write_wav


@pytest.fixture
def wav(tmp_path, speech):
    p = tmp_path / "in.wav"
    write_wav(PcmSignal(speech.samples[:12000]), p)
    return p


@pytest.fixture
def keyfile(tmp_path):
    p = tmp_path / "k.hex"
    assert cli.run(["keygen", "--out", str(p), "--seed", "1"]) == 0
    return p


def test_keygen(tmp_path):
    hex_path, raw_path = tmp_path / "a.hex", tmp_path / "a.key"
    assert cli.run(["keygen", "--out", str(hex_path), "--seed", "5"]) == 0
    assert cli.run(["keygen", "--out", str(raw_path), "--seed", "5"]) == 0
    assert bytes.fromhex(hex_path.read_text().strip()) == raw_path.read_bytes()
    assert len(cli.read_key(raw_path)) == 8


def test_encrypt_decrypt_eavesdrop(tmp_path, wav, keyfile):
    gvs, out, eav = tmp_path / "x.gvs", tmp_path / "out.wav", tmp_path / "eav.wav"
    assert cli.run(["encrypt", "--in", str(wav), "--key", str(keyfile), "--out", str(gvs)]) == 0
    assert gvs.read_bytes()[:4] == b"GVS1"
    assert cli.run(["decrypt", "--in", str(gvs), "--key", str(keyfile), "--out", str(out)]) == 0
    assert len(read_wav(out)) == len(read_wav(wav))
    assert cli.run(["eavesdrop", "--in", str(gvs), "--out", str(eav)]) == 0
    assert len(read_wav(eav)) >= len(read_wav(wav))


def test_wrong_key_exit_code(tmp_path, wav, keyfile):
    gvs = tmp_path / "x.gvs"
    other = tmp_path / "o.hex"
    cli.run(["keygen", "--out", str(other), "--seed", "2"])
    cli.run(["encrypt", "--in", str(wav), "--key", str(keyfile), "--out", str(gvs)])
    assert cli.run(["decrypt", "--in", str(gvs), "--key", str(other), "--out", str(tmp_path / "y.wav")]) == 3


def test_codec_commands(tmp_path, wav):
    gsm, out = tmp_path / "x.gsm", tmp_path / "y.wav"
    assert cli.run(["codec-encode", "--in", str(wav), "--out", str(gsm)]) == 0
    assert len(gsm.read_bytes()) == 33 * (12000 // 160)
    assert cli.run(["codec-decode", "--in", str(gsm), "--out", str(out)]) == 0
    assert len(read_wav(out)) == 12000


def test_analyze(tmp_path, wav, capsys):
    assert cli.run(["analyze", "--ref", str(wav), "--in", str(wav), "--out", str(tmp_path / "a")]) == 0
    text = capsys.readouterr().out
    assert "35.00 dB" in text and "1.0000" in text
    assert (tmp_path / "a" / "overlay.csv").exists()


def test_simulate(tmp_path, wav, keyfile):
    out = tmp_path / "sim"
    assert cli.run(["simulate", "--in", str(wav), "--key", str(keyfile), "--out", str(out)]) == 0
    names = {p.name for p in out.iterdir()}
    for s in ("original", "scrambled", "eavesdropped", "recovered"):
        assert f"{s}.wav" in names and f"spectrogram_{s}.csv" in names
    assert {"overlay.csv", "report.txt"} <= names
    assert "recovered" in (out / "report.txt").read_text()


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["encrypt"],
        ["encrypt", "--in", "a.wav", "--out", "b"],
        ["encrypt", "--in", "a.wav", "--key", "k", "--out", "b", "--ber", "2"],
    ],
)
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as e:
        code = cli.run(argv)
        raise SystemExit(code)
    assert e.value.code == 1


def test_bad_geometry_and_data_errors(tmp_path, wav, keyfile):
    args = ["encrypt", "--in", str(wav), "--key", str(keyfile), "--out", str(tmp_path / "x")]
    assert cli.run(args + ["--sub-frame-len", "100"]) == 1
    bad = tmp_path / "bad.wav"
    bad.write_bytes(b"not a wav at all")
    assert cli.run(["encrypt", "--in", str(bad), "--key", str(keyfile), "--out", str(tmp_path / "x")]) == 2
    assert cli.run(["decrypt", "--in", str(bad), "--key", str(keyfile), "--out", str(tmp_path / "y")]) == 2
    assert cli.run(["encrypt", "--in", str(tmp_path / "missing.wav"), "--key", str(keyfile),
                    "--out", str(tmp_path / "x")]) == 2
