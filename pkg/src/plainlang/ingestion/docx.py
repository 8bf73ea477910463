"""DOCX body-text extraction via direct ZIP + WordprocessingML parsing."""

from __future__ import annotations

import zipfile
from io import BytesIO
from xml.etree import ElementTree

from . import CorruptArchive, CorruptXml, ExtractedDocument


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _paragraph_text(p_element) -> str:
    parts: list[str] = []
    for node in p_element.iter():
        tag = _local(node.tag)
        if tag == "t":
            parts.append(node.text or "")
        elif tag == "tab":
            parts.append(" ")
        elif tag == "br" or tag == "cr":
            parts.append("\n")
    return "".join(parts)


_SKIPPED_PART_PREFIXES = ("word/header", "word/footer", "word/footnotes", "word/endnotes")


def extract_docx(data: bytes) -> ExtractedDocument:
    """Concatenate w:t runs in document order; w:p boundaries become "\\n\\n".

    Table cell paragraphs are flattened in document order (with a warning);
    headers, footers, and footnotes are skipped, also with a warning.
    """
    try:
        with zipfile.ZipFile(BytesIO(data)) as zf:
            names = zf.namelist()
            document_xml = zf.read("word/document.xml")
    except Exception as exc:
        # zipfile failure modes on corrupt input are varied (BadZipFile,
        # decode errors, zlib errors, missing member); all mean the same
        # thing to callers.
        raise CorruptArchive(f"unreadable DOCX container: {exc}") from exc

    try:
        root = ElementTree.fromstring(document_xml)
    except ElementTree.ParseError as exc:
        raise CorruptXml(f"unparseable document XML: {exc}") from exc

    warnings: list[str] = []
    if any(_local(node.tag) == "tbl" for node in root.iter()):
        warnings.append("tables flattened to paragraphs in document order")
    if any(name.startswith(_SKIPPED_PART_PREFIXES) for name in names):
        warnings.append("headers/footers/footnotes skipped")

    paragraphs = [
        text
        for node in root.iter()
        if _local(node.tag) == "p" and (text := _paragraph_text(node).strip())
    ]
    return ExtractedDocument(
        text="\n\n".join(paragraphs),
        format="docx",
        page_or_paragraph_count=len(paragraphs),
        warnings=tuple(warnings),
    )
