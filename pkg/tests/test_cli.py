"""Command-line surface: grammar, documented examples, exit codes."""

import io
import subprocess
import sys

from nashdcf.cli import CommandLoop, parse_coord, smart_split
from nashdcf.engine import Engine
from nashdcf.polys import qq


def run(commands):
    loop = CommandLoop(Engine())
    out = io.StringIO()
    ok = loop.run(commands, out=out)
    return out.getvalue().splitlines(), ok


def test_smart_split_binds_parens_and_quotes():
    assert smart_split('witness p (y - 1)') == ["witness", "p", "(y - 1)"]
    assert smart_split('wp member real "L1^2 - 1" 2') == [
        "wp",
        "member",
        "real",
        '"L1^2 - 1"',
        "2",
    ]


def test_parse_coord():
    assert parse_coord("3") == qq(3)
    assert parse_coord("-1/2") == qq("-1/2")
    assert parse_coord("i") == (qq(0), qq(1))
    assert parse_coord("2+3i") == (qq(2), qq(3))
    assert parse_coord("1/2-1/3i") == (qq("1/2"), qq("-1/3"))


def test_sign_of_tag_offset():
    lines, ok = run(["let a = var", "sign a - 4"])
    assert ok
    assert lines == ["ok a", "positive"]


def test_witness_check_pipeline():
    lines, ok = run(
        [
            "dp p = y' - y",
            "let f = witness p (y - 1)",
            "check p f",
            "iszero f - 1",
        ]
    )
    assert ok
    assert lines[-2:] == ["zero", "false"]


def test_wp_membership_examples():
    lines, ok = run(
        [
            'wp member real "L1^2 - 1" 2',
            'wp member real "L1^2 - 1" 0',
            'wp member complex "L1" i',
        ]
    )
    assert ok
    assert lines == ["true", "false", "true"]


def test_adjoin_and_eval():
    lines, ok = run(
        [
            'let r = adjoin "Z^2 - 2" real 2',
            "sign r - 1",
            "sign r - 3/2",
            "iszero r^2 - 2",
        ]
    )
    assert ok
    assert lines[1:] == ["positive", "negative", "true"]


def test_solutions_and_owitness():
    lines, ok = run(
        [
            "dp p = y' - y",
            "dp q = y",
            "owitness p q at 1 1",
            "solutions 2",
        ]
    )
    assert ok
    assert sum(1 for l in lines if l.startswith("ok")) == 5  # p, q, witness, 2 solutions


def test_rootbetween_command():
    lines, ok = run(
        [
            "dp p = y' + y - 1",
            "rootbetween p 0 2",
            "sign _c0",
        ]
    )
    assert ok
    assert lines[-1] == "positive"


def test_extend_names_generators():
    lines, ok = run(["extend 2 with e2, -e1", "delta _g0", "iszero _d2 - _g1"])
    assert ok
    assert lines[-1] == "true"


def test_errors_do_not_abort_stream():
    lines, ok = run(["sign nosuchname", "let a = var", "sign a"])
    assert not ok
    assert lines[0].startswith("error[line 1]")
    assert lines[-1] == "positive"


def test_raxioms_output_format():
    lines, ok = run(['raxioms "L1" "L1 - 1" --samples 50 --seed 7'])
    assert ok
    assert any(l.startswith("R1 OK") for l in lines)


def test_grammar_round_trip_documented_examples():
    from nashdcf.textio import parse_poly, poly_to_text

    corpus = ["L3^2*Z - 1/2", "L1^2 - 1", "Z^2 - 2", "g^2 + g - 1"]
    for text in corpus:
        canonical = poly_to_text(parse_poly(text))
        assert poly_to_text(parse_poly(canonical)) == canonical


def test_console_entry_point_exit_codes(tmp_path):
    script = tmp_path / "script.txt"
    script.write_text("let a = var\nsign a\n")
    proc = subprocess.run(
        [sys.executable, "-m", "nashdcf.cli", str(script)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "positive" in proc.stdout
    script.write_text("bogus command\n")
    proc = subprocess.run(
        [sys.executable, "-m", "nashdcf.cli", str(script)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 1
