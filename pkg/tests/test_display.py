"""Tests for report rendering."""
import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import io
import math

from entdisc.display import (
    REPORT_HEADER,
    _escape_html,
    format_value,
    render_table,
    report_rows,
    show_error,
    show_table,
)
from entdisc.local_unitary import LocalUnitaryParams
from entdisc.measures import evaluate_at, rho_statistics
from entdisc.pauli import parse_labels
from entdisc.states import ghz, w3


def test_escape_html():
    """Test that markup characters are escaped."""
    assert _escape_html("<A>rho & sigma") == "&lt;A&gt;rho &amp; sigma"


def test_format_value():
    """Test infinite, missing and finite values."""
    assert format_value(math.inf) == "inf"
    assert format_value(-math.inf) == "-inf"
    assert format_value(None) == "-"
    assert format_value(math.nan) == "-"
    assert format_value("inf") == "inf"
    assert format_value(8 / 15) == "0.533333"
    assert format_value(2, digits=3) == "2"


def test_render_table_alignment():
    """Test column padding and the separator line."""
    lines = render_table(("a", "value"), [["long-label", "1"], ["x", "0.25"]])
    assert lines[0] == "a" + " " * 11 + "value"
    assert lines[1] == "-" * 10 + "  " + "-" * 5
    assert lines[2] == "long-label  1"
    assert lines[3] == "x" + " " * 11 + "0.25"


def test_show_table_plain_stream():
    """Test plain output on a non-terminal stream."""
    stream = io.StringIO()
    show_table("Title", ("a", "b"), [["1", "2"]], footer=["total"], stream=stream)
    lines = stream.getvalue().splitlines()
    assert lines[0] == "Title"
    assert lines[-1] == "total"
    assert len(lines) == 5


def test_show_error_plain_stream():
    """Test the error prefix."""
    stream = io.StringIO()
    show_error("bad input", stream=stream)
    assert stream.getvalue() == "Error: bad input\n"


def test_report_rows():
    """Test one row per observable with the breakdown columns."""
    obs = parse_labels(["IZZ", "XXX"])
    report = evaluate_at(rho_statistics(ghz(3), obs), w3(), LocalUnitaryParams.identity(3))
    rows = report_rows(report)
    assert len(rows) == 2
    assert all(len(row) == len(REPORT_HEADER) for row in rows)
    assert rows[0][0] == "IZZ"
    assert rows[0][2] == "-0.333333"
    assert rows[1][4] == "1"
