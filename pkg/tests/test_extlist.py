"""Tests for disk-backed sequential lists and interleave encodings."""
import pytest
from hypothesis import given, settings, strategies as st

from src.errors import ContractError, EncodingError, ListIOError, MalformedEncodingError, MemoryBudgetError
from src.extlist import (
    IOCounters,
    ListMode,
    MultiCursor,
    ResidentTracker,
    concatenate,
    create_writer,
    load_array,
    open_list,
    read_all,
    reconstruct_interleave,
    share_buffer,
    value_range,
    width_for,
)


def write_list(path, values, width=4, signed=False, buffer_bytes=16):
    seq = create_writer(path, width, signed=signed, buffer_bytes=buffer_bytes)
    seq.extend(values)
    return seq.seal()


class TestWidths:
    """Test element width selection."""

    def test_width_for_unsigned(self):
        """Test smallest width holding a value."""
        assert width_for(0) == 1
        assert width_for(255) == 1
        assert width_for(256) == 4
        assert width_for(2**32) == 8

    def test_width_for_signed(self):
        """Test signed lists reserve the sign bit."""
        assert width_for(127, signed=True) == 1
        assert width_for(128, signed=True) == 4

    def test_value_range(self):
        """Test representable ranges."""
        assert value_range(1) == (0, 255)
        assert value_range(1, signed=True) == (-128, 127)

    def test_width_too_large(self):
        """Test values beyond 8 bytes are rejected."""
        with pytest.raises(EncodingError):
            width_for(2**64)


class TestSeqList:
    """Test append / seal / read lifecycle."""

    def test_write_and_read(self, tmp_path):
        """Test values come back in append order across buffer boundaries."""
        values = list(range(100))
        seq = write_list(tmp_path / "a.bin", values)
        assert seq.length == 100
        assert read_all(seq) == values

    def test_manifest_and_reopen(self, tmp_path):
        """Test the manifest records width, length and signedness."""
        write_list(tmp_path / "l.bin", [-1, 0, 3], width=1, signed=True)
        assert (tmp_path / "l.meta").read_text() == "width=1 len=3 signed=1\n"
        seq = open_list(tmp_path / "l.bin")
        assert seq.signed is True
        assert read_all(seq) == [-1, 0, 3]

    def test_file_is_raw_little_endian(self, tmp_path):
        """Test the data file has no header."""
        write_list(tmp_path / "x.bin", [1, 258], width=4)
        assert (tmp_path / "x.bin").read_bytes() == b"\x01\x00\x00\x00\x02\x01\x00\x00"

    def test_empty_list(self, tmp_path):
        """Test a sealed empty list reads as empty."""
        seq = write_list(tmp_path / "e.bin", [])
        assert seq.length == 0
        assert read_all(seq) == []

    def test_out_of_range_value(self, tmp_path):
        """Test a value that does not fit the width is rejected."""
        seq = create_writer(tmp_path / "o.bin", 1)
        with pytest.raises(EncodingError):
            seq.append(256)
        with pytest.raises(EncodingError):
            seq.append(-1)

    def test_append_after_seal(self, tmp_path):
        """Test sealed lists are read-only."""
        seq = write_list(tmp_path / "s.bin", [1])
        with pytest.raises(ContractError):
            seq.append(2)

    def test_read_before_seal(self, tmp_path):
        """Test a list cannot be read while being written."""
        seq = create_writer(tmp_path / "w.bin", 4)
        seq.append(1)
        with pytest.raises(ContractError):
            seq.reader()

    def test_single_reader(self, tmp_path):
        """Test a second concurrent reader is refused and the mode returns to sealed."""
        seq = write_list(tmp_path / "r.bin", [1, 2])
        with seq.reader():
            assert seq.mode is ListMode.READING
            with pytest.raises(ContractError):
                seq.reader()
        assert seq.mode is ListMode.SEALED

    def test_invalid_width(self, tmp_path):
        """Test only widths 1, 4 and 8 are accepted."""
        with pytest.raises(ContractError):
            create_writer(tmp_path / "bad.bin", 2)

    def test_rename_and_delete(self, tmp_path):
        """Test rename moves data and manifest together; delete removes both."""
        seq = write_list(tmp_path / "old.bin", [5, 6])
        seq.rename(tmp_path / "new.bin")
        assert not (tmp_path / "old.bin").exists()
        assert (tmp_path / "new.meta").exists()
        assert read_all(seq) == [5, 6]
        seq.delete()
        assert not (tmp_path / "new.bin").exists()
        assert not (tmp_path / "new.meta").exists()

    def test_reader_counts(self, tmp_path):
        """Test counters see every element and byte under the reader's role."""
        seq = write_list(tmp_path / "c.bin", list(range(10)), width=4)
        counters = IOCounters()
        with seq.reader(counters, "I") as r:
            assert list(r) == list(range(10))
        assert counters.reads["I"] == 10
        assert counters.bytes_read == 40

    def test_writer_counts(self, tmp_path):
        """Test writes are counted when buffers flush."""
        counters = IOCounters()
        seq = create_writer(tmp_path / "w.bin", 1, role="IB", counters=counters, buffer_bytes=3)
        seq.extend([1, 2, 3, 4, 5])
        seq.seal()
        assert counters.writes["IB"] == 5
        assert counters.bytes_written == 5

    def test_load_array(self, tmp_path):
        """Test a whole list loads into one array."""
        seq = write_list(tmp_path / "t.bin", [3, 1, 2], width=1)
        counters = IOCounters()
        assert load_array(seq, counters, "T").tolist() == [3, 1, 2]
        assert counters.reads["T"] == 3


class TestOpenList:
    """Test reopening lists from disk."""

    def test_missing_manifest(self, tmp_path):
        """Test a data file without manifest is an I/O error."""
        (tmp_path / "x.bin").write_bytes(b"\x00")
        with pytest.raises(ListIOError):
            open_list(tmp_path / "x.bin")

    def test_size_mismatch(self, tmp_path):
        """Test a truncated data file is detected."""
        write_list(tmp_path / "x.bin", [1, 2, 3], width=4)
        (tmp_path / "x.bin").write_bytes(b"\x00" * 5)
        with pytest.raises(ListIOError):
            open_list(tmp_path / "x.bin")

    def test_corrupt_manifest(self, tmp_path):
        """Test an unparsable manifest is an I/O error."""
        write_list(tmp_path / "x.bin", [1])
        (tmp_path / "x.meta").write_text("garbage\n")
        with pytest.raises(ListIOError):
            open_list(tmp_path / "x.bin")


class TestConcatenate:
    """Test byte-level bucket concatenation."""

    def test_order_preserved(self, tmp_path):
        """Test buckets are appended in order, empty ones included."""
        a = write_list(tmp_path / "a.bin", [1, 2])
        b = write_list(tmp_path / "b.bin", [])
        c = write_list(tmp_path / "c.bin", [3])
        out = concatenate([a, b, c], tmp_path / "out.bin", role="I")
        assert out.length == 3
        assert read_all(out) == [1, 2, 3]
        assert open_list(tmp_path / "out.bin").length == 3

    def test_counts_bytes_only(self, tmp_path):
        """Test concatenation is charged as bytes, not elements."""
        a = write_list(tmp_path / "a.bin", [1, 2], width=4)
        counters = IOCounters()
        concatenate([a], tmp_path / "out.bin", counters=counters)
        assert counters.elements_read == 0
        assert counters.bytes_read == 8
        assert counters.bytes_written == 8

    def test_width_mismatch(self, tmp_path):
        """Test buckets of different widths are refused."""
        a = write_list(tmp_path / "a.bin", [1], width=1)
        b = write_list(tmp_path / "b.bin", [1], width=4)
        with pytest.raises(ContractError):
            concatenate([a, b], tmp_path / "out.bin")

    def test_unsealed_bucket(self, tmp_path):
        """Test a bucket still being written is refused."""
        a = create_writer(tmp_path / "a.bin", 4)
        with pytest.raises(ContractError):
            concatenate([a], tmp_path / "out.bin")

    def test_into_itself(self, tmp_path):
        """Test the output cannot be one of the inputs."""
        a = write_list(tmp_path / "a.bin", [1])
        with pytest.raises(ContractError):
            concatenate([a], tmp_path / "a.bin")

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.lists(st.integers(min_value=-128, max_value=127), max_size=30), min_size=1, max_size=5))
    def test_concatenation_property(self, tmp_path_factory, parts):
        """Test concatenating any buckets equals concatenating their contents."""
        d = tmp_path_factory.mktemp("concat")
        buckets = [write_list(d / f"p{i}.bin", part, width=1, signed=True, buffer_bytes=7)
                   for i, part in enumerate(parts)]
        out = concatenate(buckets, d / "out.bin", buffer_bytes=5)
        assert read_all(out) == [v for part in parts for v in part]


class TestRoundTripProperty:
    """Test write-then-read with random values and buffers."""

    @settings(max_examples=40, deadline=None)
    @given(
        st.sampled_from([(1, False), (1, True), (4, False), (4, True), (8, True)]),
        st.integers(min_value=1, max_value=64),
        st.data(),
    )
    def test_round_trip(self, tmp_path_factory, layout, buffer_bytes, data):
        """Test any in-range sequence reads back unchanged."""
        width, signed = layout
        low, high = value_range(width, signed)
        values = data.draw(st.lists(st.integers(min_value=low, max_value=high), max_size=50))
        d = tmp_path_factory.mktemp("rt")
        seq = write_list(d / "v.bin", values, width=width, signed=signed, buffer_bytes=buffer_bytes)
        assert read_all(seq) == values
        assert (d / "v.bin").stat().st_size == len(values) * width


class TestInterleave:
    """Test rank-implicit interleave reconstruction."""

    def test_reconstruct_example(self, tmp_path):
        """Test W is rebuilt from I_W and its components."""
        v0 = write_list(tmp_path / "v0.bin", [10, 11, 12])
        v1 = write_list(tmp_path / "v1.bin", [20, 21])
        encoding = write_list(tmp_path / "i.bin", [0, 1, 1, 0, 0], width=1)
        w = reconstruct_interleave(encoding, [v0, v1], tmp_path / "w.bin")
        assert read_all(w) == [10, 20, 21, 11, 12]

    def test_level_out_of_range(self, tmp_path):
        """Test an encoding naming a missing component is malformed."""
        v0 = write_list(tmp_path / "v0.bin", [1])
        encoding = write_list(tmp_path / "i.bin", [1], width=1)
        with pytest.raises(MalformedEncodingError):
            reconstruct_interleave(encoding, [v0], tmp_path / "w.bin")
        assert not (tmp_path / "w.bin").exists()

    def test_component_exhausted(self, tmp_path):
        """Test an encoding naming a component too often is malformed."""
        v0 = write_list(tmp_path / "v0.bin", [1])
        encoding = write_list(tmp_path / "i.bin", [0, 0], width=1)
        with pytest.raises(MalformedEncodingError):
            reconstruct_interleave(encoding, [v0], tmp_path / "w.bin")

    def test_component_not_consumed(self, tmp_path):
        """Test leftover component elements are malformed."""
        v0 = write_list(tmp_path / "v0.bin", [1, 2])
        encoding = write_list(tmp_path / "i.bin", [0], width=1)
        with pytest.raises(MalformedEncodingError):
            reconstruct_interleave(encoding, [v0], tmp_path / "w.bin")

    def test_multicursor_positions(self, tmp_path):
        """Test cursor positions advance per component."""
        v0 = write_list(tmp_path / "v0.bin", [1, 2])
        v1 = write_list(tmp_path / "v1.bin", [3])
        with MultiCursor([v0, v1]) as cursor:
            assert cursor.next(1) == 3
            assert cursor.next(0) == 1
            assert cursor.positions == [1, 1]
            with pytest.raises(MalformedEncodingError):
                cursor.check_exhausted()
        assert v0.mode is ListMode.SEALED


class TestResidentTracker:
    """Test resident-element accounting."""

    def test_peak(self):
        """Test peak survives release."""
        tracker = ResidentTracker()
        tracker.acquire(5)
        tracker.release(5)
        tracker.acquire(3)
        assert tracker.peak == 5
        assert tracker.current == 3

    def test_budget_exceeded(self):
        """Test exceeding the limit raises."""
        tracker = ResidentTracker(limit=4)
        tracker.acquire(4)
        with pytest.raises(MemoryBudgetError):
            tracker.acquire(1, "T_1")
        assert tracker.current == 4

    def test_share_buffer(self):
        """Test per-list buffers split the total but keep a floor."""
        assert share_buffer(1 << 20, 4) == 1 << 18
        assert share_buffer(1 << 20, 10000) == 4096
        assert share_buffer(64, 10) == 64
