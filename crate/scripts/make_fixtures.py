"""Regenerates the .xlsx fixtures used by the tests and the playground.

Run from the repository root:  python3 scripts/make_fixtures.py
Requires openpyxl >= 3.1.
"""
import io
import re
import shutil
import zipfile
from pathlib import Path

from openpyxl import Workbook
from openpyxl.cell.rich_text import CellRichText, TextBlock
from openpyxl.cell.text import InlineFont
from openpyxl.styles import Font, PatternFill
from openpyxl.styles.colors import Color

ROOT = Path(__file__).resolve().parent.parent
CORE = ROOT / "crates/core/tests/fixtures"
ASSETS = ROOT / "crates/service/assets"


def save(wb, name, cached=None):
    """Saves `wb`, optionally injecting cached formula results {ref: value}."""
    buf = io.BytesIO()
    wb.save(buf)
    data = buf.getvalue()
    if cached:
        src = zipfile.ZipFile(io.BytesIO(data))
        out = io.BytesIO()
        with zipfile.ZipFile(out, "w", zipfile.ZIP_DEFLATED) as dst:
            for item in src.infolist():
                body = src.read(item.filename)
                if item.filename.startswith("xl/worksheets/"):
                    text = body.decode()
                    for ref, value in cached.items():
                        text = re.sub(
                            r'(<c r="%s"[^>]*>\s*<f>[^<]*</f>)\s*<v\s*/?>(</v>)?' % ref,
                            r"\g<1><v>%s</v>" % value,
                            text,
                        )
                    body = text.encode()
                dst.writestr(item, body)
        data = out.getvalue()
    (CORE / name).write_bytes(data)
    print("wrote", CORE / name)


def papers():
    wb = Workbook()
    ws = wb.active
    ws.title = "Papers"
    ws["A1"] = "title"
    ws["C1"] = "score"
    ws["A2"] = "Knowledge Graphs"
    ws["A3"] = "Ontology"
    ws["A4"] = "Know-how"
    # styled but empty: loads as a Blank cell
    ws["A5"].fill = PatternFill("solid", fgColor="FFFF00")
    ws["C2"] = 3.5
    ws["C4"] = 7.0
    notes = wb.create_sheet("Notes")
    notes["A2"] = "Knowledge is elsewhere"
    save(wb, "papers.xlsx")


CATALOG = [
    "address", "column", "row", "value", "valueString", "valueNumeric", "valueInt",
    "valueBoolean", "valueFormula", "valueError", "valueRichText", "backgroundColor",
    "foregroundColor", "fontColor", "fontName", "fontSize", "json",
]


def catalog():
    wb = Workbook()
    ws = wb.active
    ws.title = "Catalog"
    for i, name in enumerate(CATALOG, start=1):
        ws.cell(row=i, column=1, value=name)
    ws["B1"] = "anything"
    ws["B2"] = "anything"
    ws["B3"] = "anything"
    ws["B4"] = 42
    ws["B5"] = "hello"
    ws["B6"] = 3.5
    ws["B7"] = -2.75
    ws["B8"] = True
    ws["B9"] = "=SUM(B6:B7)"
    ws["B10"] = "#DIV/0!"
    ws["B11"] = CellRichText(
        [TextBlock(InlineFont(rFont="Arial", color="FFFF0000", b=True, i=True), "red, italic and bold")]
    )
    ws["B12"] = "filled"
    ws["B12"].fill = PatternFill("solid", fgColor="FFFF00", bgColor="00FF00")
    ws["B13"] = "themed"
    ws["B13"].fill = PatternFill("solid", fgColor=Color(theme=4, tint=0.4))
    ws["B14"] = "indexed font"
    ws["B14"].font = Font(color=Color(indexed=10))
    ws["B15"] = "mono"
    ws["B15"].font = Font(name="Courier New")
    ws["B16"] = "big"
    ws["B16"].font = Font(size=14)
    ws["B17"] = 3.5
    save(wb, "catalog.xlsx", cached={"B9": "0.75"})


def colors():
    wb = Workbook()
    ws = wb.active
    ws.title = "Products"
    ws.append(["item", "colors"])
    ws.append(["chair", "red; green; blue"])
    ws.append(["lamp", "black ; white;grey"])
    ws.append(["table", "oak; walnut"])
    save(wb, "colors.xlsx")


def books():
    wb = Workbook()
    ws = wb.active
    ws.title = "Books"
    ws.append(["title", "authors"])
    ws.append(["Semantic Web Primer", "Doe, John; Roe, Jane"])
    ws.append(["Linked Data", "Edgar Allan Poe and Cher"])
    save(wb, "books.xlsx")


if __name__ == "__main__":
    CORE.mkdir(parents=True, exist_ok=True)
    ASSETS.mkdir(parents=True, exist_ok=True)
    papers()
    catalog()
    colors()
    books()
    for name in ["papers.xlsx", "colors.xlsx", "books.xlsx", "listing.ttl", "zip.ttl", "graph.ttl"]:
        shutil.copy(CORE / name, ASSETS / name)
