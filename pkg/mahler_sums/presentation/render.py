"""Rich rendering of reports for `--format text`."""

import io

from rich.console import Console
from rich.table import Table

from mahler_sums.domain.entities import RunReport
from mahler_sums.infrastructure.repositories import flatten_fields

TEXT_WIDTH = 120


def _key_value_table(data: dict[str, object]) -> Table:
    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("Field", style="cyan")
    table.add_column("Value")
    for key, value in flatten_fields(data).items():
        table.add_row(key, str(value))
    return table


def _cases_table(cases: list[dict[str, object]]) -> Table:
    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("Case", style="cyan")
    table.add_column("Witnesses")
    table.add_column("Removals", style="yellow")
    for case in cases:
        witnesses = ", ".join(f"{k}={v}" for k, v in case.get("witnesses", {}).items())
        table.add_row(str(case["case"]), witnesses or "-", "; ".join(case.get("removals", [])) or "-")
    return table


def _rows_table(rows: list[dict[str, object]]) -> Table:
    flat = [flatten_fields(row) for row in rows]
    columns: list[str] = []
    for row in flat:
        columns.extend(key for key in row if key not in columns)

    table = Table(show_header=True, header_style="bold magenta")
    for column in columns:
        table.add_column(column, overflow="fold")
    for row in flat:
        cells = []
        for column in columns:
            value = row.get(column, "")
            if column == "passed":
                value = "[green]pass[/green]" if value else "[red]FAIL[/red]"
            cells.append(str(value))
        table.add_row(*cells)
    return table


def render_text(report: RunReport) -> str:
    """Human-readable report; deterministic for a given report."""
    buffer = io.StringIO()
    console = Console(file=buffer, width=TEXT_WIDTH, force_terminal=False, color_system=None)
    config = report.config
    console.print(
        f"[bold cyan]mahler-sums {report.version}[/bold cyan] {config.command} "
        f"(bits={config.bits}, guard={config.guard_bits}, seed={config.seed})"
    )

    result = dict(report.result)
    cases = result.pop("cases", None)
    console.print(_key_value_table(result))
    if cases:
        console.print("\n[bold]Exceptional cases:[/bold]")
        console.print(_cases_table(cases))
    elif cases is not None:
        console.print("\n[bold]Generic:[/bold] no exceptional case applies")
    if report.rows:
        console.print()
        console.print(_rows_table(report.rows))
    return buffer.getvalue()
