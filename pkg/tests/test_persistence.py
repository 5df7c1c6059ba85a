import numpy as np
import pytest

from rankin_lab.coefficients import build_table
from rankin_lab.errors import (CorruptCacheError, CrossCheckError, FormatError,
                               UnsupportedRangeError)
from rankin_lab.persistence import (HEADER, MAGIC, RECORD, import_external_tau,
                                    load_table, load_tau, parse_tau_text, save_table)


@pytest.fixture(scope="module")
def table():
    return build_table(1000)


@pytest.fixture
def cache(tmp_path, table):
    path = tmp_path / "t.rst"
    save_table(path, table)
    return path


def test_round_trip_tau(cache, table):
    tau, kappa = load_tau(cache)
    assert kappa == 12
    assert list(tau) == list(table.tau)


def test_file_size_and_header(cache, table):
    raw = cache.read_bytes()
    assert raw[:4] == MAGIC
    assert len(raw) == HEADER.size + RECORD * table.n_max
    assert int.from_bytes(raw[HEADER.size:HEADER.size + RECORD], "little", signed=True) == 1


def test_derived_arrays_bitwise(cache, table):
    loaded = load_table(cache)
    assert loaded.c[2] == 0.28125
    for name in ("c", "b", "prefix_c", "mobius", "d"):
        a, b = getattr(loaded, name), getattr(table, name)
        assert a.tobytes() == b.tobytes(), name


def test_no_temp_file_left(cache):
    assert [p.name for p in cache.parent.iterdir()] == ["t.rst"]


def _corrupt(path, mutate):
    raw = bytearray(path.read_bytes())
    mutate(raw)
    path.write_bytes(bytes(raw))


@pytest.mark.parametrize("mutate", [
    lambda r: r.__delitem__(slice(len(r) - 5, None)),      # truncated payload
    lambda r: r.__delitem__(slice(10, None)),               # truncated header
    lambda r: r.__setitem__(slice(0, 4), b"RSTX"),         # magic
    lambda r: r.__setitem__(slice(4, 6), b"\x02\x00"),      # version
    lambda r: r.__setitem__(-1, r[-1] ^ 1),                 # payload bit flip
])
def test_corruption_detected(cache, mutate):
    _corrupt(cache, mutate)
    with pytest.raises(CorruptCacheError):
        load_table(cache)


def test_oversized_tau_rejected_at_save(tmp_path, table):
    tau = np.array(list(table.tau[:3]), dtype=object)
    tau[2] = 1 << 127

    class Fake:
        n_max, kappa = 2, 12
    Fake.tau = tau
    with pytest.raises(UnsupportedRangeError):
        save_table(tmp_path / "big.rst", Fake)
    assert not (tmp_path / "big.rst").exists()


def test_negative_extreme_fits(tmp_path):
    tau = np.array([0, 1, -(1 << 127)], dtype=object)

    class Fake:
        n_max, kappa = 2, 12
    Fake.tau = tau
    save_table(tmp_path / "neg.rst", Fake)
    assert list(load_tau(tmp_path / "neg.rst")[0]) == list(tau)


class TestTextImport:
    def test_three_lines(self, tmp_path):
        p = tmp_path / "tau.txt"
        p.write_text("# ramanujan tau\n1 1\n2 -24\n\n3 252\n")
        t = import_external_tau(p)
        assert t.n_max == 3
        assert t.c[2] == 0.28125

    def test_starts_at_two(self):
        with pytest.raises(FormatError) as info:
            parse_tau_text(["# header", "2 -24", "3 252"])
        assert info.value.line == 2

    def test_gap(self):
        with pytest.raises(FormatError) as info:
            parse_tau_text(["1 1", "2 -24", "4 -1472"])
        assert info.value.line == 3
        assert "line 3" in str(info.value)

    def test_not_integer(self):
        with pytest.raises(FormatError):
            parse_tau_text(["1 1", "2 -24.0"])

    def test_empty(self):
        with pytest.raises(FormatError):
            parse_tau_text(["# nothing"])

    def test_cross_check_rejects(self, tmp_path):
        vals = [1, -24, 252, -1472, 4830, -6047, -16744]
        p = tmp_path / "bad.txt"
        p.write_text("".join(f"{n} {v}\n" for n, v in enumerate(vals, 1)))
        with pytest.raises(CrossCheckError, match="tau\\(6\\)"):
            import_external_tau(p)
