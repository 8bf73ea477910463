import zipfile
from io import BytesIO

import pytest

# One line per acceptance criterion, printed after the run (see
# pytest_terminal_summary); tests in test_acceptance.py append to this.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

_CONTENT_TYPES = """<?xml version="1.0" encoding="UTF-8" standalone="yes"?>
<Types xmlns="http://schemas.openxmlformats.org/package/2006/content-types">
  <Default Extension="rels" ContentType="application/vnd.openxmlformats-package.relationships+xml"/>
  <Default Extension="xml" ContentType="application/xml"/>
  <Override PartName="/word/document.xml" ContentType="application/vnd.openxmlformats-officedocument.wordprocessingml.document.main+xml"/>
</Types>
"""

_RELS = """<?xml version="1.0" encoding="UTF-8" standalone="yes"?>
<Relationships xmlns="http://schemas.openxmlformats.org/package/2006/relationships">
  <Relationship Id="rId1" Type="http://schemas.openxmlformats.org/officeDocument/2006/relationships/officeDocument" Target="word/document.xml"/>
</Relationships>
"""

_W = "http://schemas.openxmlformats.org/wordprocessingml/2006/main"


def _xml_escape(text):
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def docx_document_xml(paragraphs, with_table=False, runs_per_paragraph=1, with_tabs=False):
    """WordprocessingML for a list of paragraph strings."""
    body = []
    for text in paragraphs:
        runs = []
        if runs_per_paragraph > 1 and len(text) > runs_per_paragraph:
            # Split the paragraph across several w:r/w:t runs.
            step = max(1, len(text) // runs_per_paragraph)
            pieces = [text[i : i + step] for i in range(0, len(text), step)]
        else:
            pieces = [text]
        for piece in pieces:
            runs.append(
                f'<w:r><w:t xml:space="preserve">{_xml_escape(piece)}</w:t></w:r>'
            )
        if with_tabs:
            runs.insert(1, "<w:r><w:tab/></w:r>")
        body.append(f"<w:p>{''.join(runs)}</w:p>")
    if with_table:
        cell = "<w:tc><w:p><w:r><w:t>cell text</w:t></w:r></w:p></w:tc>"
        body.append(f"<w:tbl><w:tr>{cell}</w:tr></w:tbl>")
    return (
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
        f'<w:document xmlns:w="{_W}"><w:body>{"".join(body)}</w:body></w:document>'
    )


def build_docx(paragraphs, with_table=False, extra_parts=(), document_xml=None, **kwargs):
    buf = BytesIO()
    with zipfile.ZipFile(buf, "w", zipfile.ZIP_DEFLATED) as zf:
        zf.writestr("[Content_Types].xml", _CONTENT_TYPES)
        zf.writestr("_rels/.rels", _RELS)
        zf.writestr(
            "word/document.xml",
            document_xml
            if document_xml is not None
            else docx_document_xml(paragraphs, with_table=with_table, **kwargs),
        )
        for name, payload in extra_parts:
            zf.writestr(name, payload)
    return buf.getvalue()


def build_pdf(lines_per_page, compress=0, encrypt=None, font="Helvetica"):
    """Known-good PDF via reportlab: one drawString per line."""
    from reportlab.pdfgen import canvas

    buf = BytesIO()
    kwargs = {"pageCompression": compress}
    if encrypt is not None:
        kwargs["encrypt"] = encrypt
    pdf = canvas.Canvas(buf, **kwargs)
    for lines in lines_per_page:
        y = 720
        pdf.setFont(font, 12)
        for line in lines:
            pdf.drawString(72, y, line)
            y -= 18
        pdf.showPage()
    pdf.save()
    return buf.getvalue()


def build_image_only_pdf():
    from reportlab.pdfgen import canvas

    buf = BytesIO()
    pdf = canvas.Canvas(buf, pageCompression=0)
    pdf.rect(100, 100, 200, 150, fill=1)
    pdf.line(50, 50, 400, 400)
    pdf.showPage()
    pdf.save()
    return buf.getvalue()


@pytest.fixture
def docx_bytes():
    return build_docx


@pytest.fixture
def pdf_bytes():
    return build_pdf
