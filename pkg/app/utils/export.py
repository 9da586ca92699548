# app/utils/export.py

from openpyxl import Workbook
from openpyxl.styles import Font, PatternFill, Alignment
from io import BytesIO
from typing import List

from app.schemas.relations import RelationTable
from app.schemas.report import RegressionReport


def _write_header(ws, headers: List[str]) -> None:
    header_font = Font(bold=True, color="FFFFFF")
    header_fill = PatternFill(
        start_color="4472C4", end_color="4472C4", fill_type="solid"
    )
    header_alignment = Alignment(horizontal="center", vertical="center")

    for col_num, header in enumerate(headers, 1):
        cell = ws.cell(row=1, column=col_num)
        cell.value = header
        cell.font = header_font
        cell.fill = header_fill
        cell.alignment = header_alignment


def _save(wb: Workbook) -> BytesIO:
    excel_file = BytesIO()
    wb.save(excel_file)
    excel_file.seek(0)
    return excel_file


def generate_relations_xlsx(table: RelationTable) -> BytesIO:
    """
    Relation table as a workbook: one sheet of monomials with their basis flag, one
    sheet of echelon rows written out as pivot = combination of the other columns.
    """
    wb = Workbook()
    ws = wb.active
    ws.title = "Monomials"
    _write_header(ws, ["Column", "Monomial", "Basis"])
    basis = set(table.basis)
    for row_num, text in enumerate(table.monomials, 2):
        col = row_num - 2
        ws.cell(row=row_num, column=1).value = col
        ws.cell(row=row_num, column=2).value = text
        ws.cell(row=row_num, column=3).value = "Yes" if col in basis else "No"

    ws.column_dimensions["A"].width = 10
    ws.column_dimensions["B"].width = 60
    ws.column_dimensions["C"].width = 8

    rows = wb.create_sheet("Relations")
    _write_header(rows, ["Pivot", "Monomial", "Relation"])
    for row_num, entries in enumerate(table.rows, 2):
        pivot = max(c for c, _, _ in entries)
        terms = []
        for c, num, den in entries:
            if c == pivot:
                continue
            coeff = str(-num) if den == 1 else f"{-num}/{den}"
            terms.append(f"({coeff})*{table.monomials[c]}")
        rows.cell(row=row_num, column=1).value = pivot
        rows.cell(row=row_num, column=2).value = table.monomials[pivot]
        rows.cell(row=row_num, column=3).value = " + ".join(terms) or "0"

    rows.column_dimensions["A"].width = 10
    rows.column_dimensions["B"].width = 40
    rows.column_dimensions["C"].width = 120

    info = wb.create_sheet("Summary")
    _write_header(info, ["Level", "Weight", "Generators", "Dimension", "Deligne bound"])
    info.cell(row=2, column=1).value = table.level
    info.cell(row=2, column=2).value = table.weight
    info.cell(row=2, column=3).value = ", ".join(table.generators)
    info.cell(row=2, column=4).value = table.dimension
    info.cell(row=2, column=5).value = table.deligne_bound
    for col in "ABCDE":
        info.column_dimensions[col].width = 16

    return _save(wb)


def generate_regressions_xlsx(report: RegressionReport) -> BytesIO:
    """Regression report, one row per identity record."""
    wb = Workbook()
    ws = wb.active
    ws.title = "Regressions"
    _write_header(ws, ["Id", "Status", "Passed", "Residual", "Relation", "Error", "Provenance"])

    for row_num, result in enumerate(report.results, 2):
        ws.cell(row=row_num, column=1).value = result.id
        ws.cell(row=row_num, column=2).value = result.status.capitalize()
        ws.cell(row=row_num, column=3).value = (
            "" if result.passed is None else ("Yes" if result.passed else "No")
        )
        ws.cell(row=row_num, column=4).value = result.residual
        ws.cell(row=row_num, column=5).value = (
            ", ".join(str(k) for k in result.relation) if result.relation else ""
        )
        ws.cell(row=row_num, column=6).value = result.error or ""
        ws.cell(row=row_num, column=7).value = result.provenance

    column_widths = {
        "A": 28,  # Id
        "B": 12,  # Status
        "C": 8,  # Passed
        "D": 12,  # Residual
        "E": 30,  # Relation
        "F": 40,  # Error
        "G": 60,  # Provenance
    }

    for col, width in column_widths.items():
        ws.column_dimensions[col].width = width

    for row in range(2, len(report.results) + 2):
        ws.cell(row=row, column=4).number_format = "0.00E+00"

    return _save(wb)
