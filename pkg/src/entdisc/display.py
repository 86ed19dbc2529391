"""
Human-readable report tables for the terminal.

Styled with prompt-toolkit when the stream is an interactive terminal, plain
text otherwise (pipes, files, captured output).
"""
import html as _html_lib
import math
import sys
from typing import List, Optional, Sequence, TextIO

from prompt_toolkit import HTML, print_formatted_text
from prompt_toolkit.styles import Style

REPORT_STYLE = Style.from_dict({
    '': '#00ff00',
    'title': '#00ff00 bold',
    'header': '#00cc00 bold',
    'total': '#00ff00 bold',
    'error': '#ff0000',
})


def _escape_html(text: str) -> str:
    """Escape HTML special characters for safe display."""
    return _html_lib.escape(text)


def format_value(value, digits: int = 6) -> str:
    """Render a measure value: ``inf`` stays ``inf``, missing values become ``-``."""
    if value is None:
        return "-"
    if isinstance(value, str):
        return value
    if isinstance(value, float) and math.isnan(value):
        return "-"
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}g}"


def render_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> List[str]:
    """Left-aligned columns padded to their widest cell."""
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return lines


def _interactive(stream: TextIO) -> bool:
    try:
        return stream.isatty()
    except (AttributeError, ValueError):
        return False


def show_table(
    title: str,
    header: Sequence[str],
    rows: Sequence[Sequence[str]],
    footer: Optional[Sequence[str]] = None,
    stream: Optional[TextIO] = None,
) -> None:
    """
    Print a titled table with optional footer lines.

    Args:
        title: Heading line
        header: Column names
        rows: Cells, already formatted as strings
        footer: Summary lines printed after the table
        stream: Target stream (defaults to stderr)
    """
    stream = stream or sys.stderr
    lines = render_table(header, rows)
    footer = list(footer or [])
    if not _interactive(stream):
        print(title, file=stream)
        for line in lines + footer:
            print(line, file=stream)
        return
    print_formatted_text(HTML(f"<title>{_escape_html(title)}</title>"), style=REPORT_STYLE, file=stream)
    print_formatted_text(HTML(f"<header>{_escape_html(lines[0])}</header>"), style=REPORT_STYLE, file=stream)
    for line in lines[1:]:
        print_formatted_text(HTML(_escape_html(line)), style=REPORT_STYLE, file=stream)
    for line in footer:
        print_formatted_text(HTML(f"<total>{_escape_html(line)}</total>"), style=REPORT_STYLE, file=stream)


def show_error(message: str, stream: Optional[TextIO] = None) -> None:
    stream = stream or sys.stderr
    if _interactive(stream):
        print_formatted_text(
            HTML(f"<error>Error: {_escape_html(message)}</error>"), style=REPORT_STYLE, file=stream
        )
    else:
        print(f"Error: {message}", file=stream)


def report_rows(report) -> List[List[str]]:
    """Per-observable rows of a DiscriminationReport."""
    return [
        [
            b.label,
            format_value(b.expectation_rho),
            format_value(b.expectation_sigma),
            format_value(b.f),
            format_value(b.d),
        ]
        for b in report.breakdown
    ]


REPORT_HEADER = ("observable", "<A>rho", "<A>sigma", "F", "D")
