"""Session persistence: byte-deterministic saves, replay, error reporting."""

import pytest

from nashdcf.cli import CommandLoop
from nashdcf.engine import Engine, SessionError


def run_session(commands):
    loop = CommandLoop(Engine())
    outputs = []

    class Sink:
        def write(self, s):
            outputs.append(s)

        def flush(self):
            pass

    ok = loop.run(commands, out=Sink())
    return loop.engine, "".join(outputs), ok


WITNESS_SESSION = [
    "let a = var",
    "dp p = y' - y",
    "let f = witness p (y - 1)",
    "dp q = y",
    "let r2 = adjoin \"Z^2 - 2\" real 2",
    "extend 2 with e2, -e1",
]


def test_empty_session_round_trip(tmp_path):
    eng = Engine()
    path = tmp_path / "empty.session"
    eng.save(str(path))
    first = path.read_text()
    eng2 = Engine()
    eng2.load(str(path))
    eng2.save(str(path))
    assert path.read_text() == first


def test_save_is_deterministic_for_same_history(tmp_path):
    eng1, _, ok1 = run_session(WITNESS_SESSION)
    eng2, _, ok2 = run_session(WITNESS_SESSION)
    assert ok1 and ok2
    assert eng1.save_text() == eng2.save_text()


def test_load_then_save_is_byte_identical(tmp_path):
    eng, _, ok = run_session(WITNESS_SESSION)
    assert ok
    path = tmp_path / "w.session"
    eng.save(str(path))
    original = path.read_text()
    fresh = Engine()
    fresh.load(str(path))
    assert fresh.save_text() == original


def test_reload_reproduces_elements_exactly(tmp_path):
    eng, _, ok = run_session(WITNESS_SESSION)
    assert ok
    path = tmp_path / "w.session"
    eng.save(str(path))
    fresh = Engine()
    fresh.load(str(path))
    for name, eid in eng.names.items():
        a = eng.element(eid)
        b = fresh.element(fresh.names[name])
        assert a.real == b.real
        if a.real:
            assert (a.value_box(64).re.intersect(b.value_box(64).re)) is not None
        # exact equality of values needs a common field: compare standalone forms
        assert eng.serialize_element(a) == fresh.serialize_element(b)


def test_replayed_commands_give_is_zero_equal_elements():
    eng1, _, _ = run_session(WITNESS_SESSION)
    eng2, _, _ = run_session(WITNESS_SESSION)
    # same field? no: separate engines; compare by serialized standalone form
    for name in eng1.names:
        a = eng1.serialize_element(eng1.element(eng1.names[name]))
        b = eng2.serialize_element(eng2.element(eng2.names[name]))
        assert a == b


def test_witness_pins_survive_reload(tmp_path):
    eng, _, ok = run_session(["dp p = y' - y", "let f = witness p (y - 1)"])
    assert ok
    path = tmp_path / "pins.session"
    eng.save(str(path))
    fresh = Engine()
    fresh.load(str(path))
    f = fresh.element(fresh.names["f"])
    p = fresh.dps["p"]
    assert fresh.table.diff_eval(p, f).is_zero()


def test_version_mismatch(tmp_path):
    path = tmp_path / "bad.session"
    path.write_text("nashdcf/999\nend 0\n")
    with pytest.raises(SessionError, match="version"):
        Engine().load(str(path))


def test_truncated_file_names_last_valid_record(tmp_path):
    eng, _, _ = run_session(["let a = var"])
    path = tmp_path / "t.session"
    eng.save(str(path))
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")  # drop the end record
    with pytest.raises(SessionError, match="last valid record"):
        Engine().load(str(path))


def test_corrupt_record_reports_index(tmp_path):
    eng, _, _ = run_session(["let a = var"])
    path = tmp_path / "c.session"
    eng.save(str(path))
    lines = path.read_text().splitlines()
    lines[2] = 'el 0 1 "Z^2 -' # mangled
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(SessionError, match="record 2"):
        Engine().load(str(path))
