"""Plain-text extraction from uploaded TXT, DOCX, and PDF documents."""

from __future__ import annotations

import re
import zipfile
from dataclasses import dataclass, field
from io import BytesIO


class IngestionError(Exception):
    """Base class for extraction failures."""


class UnsupportedFormat(IngestionError):
    pass


class CorruptArchive(IngestionError):
    pass


class CorruptXml(IngestionError):
    pass


class CorruptPdf(IngestionError):
    pass


class EncryptedPdf(IngestionError):
    pass


class NoTextContent(IngestionError):
    pass


@dataclass(frozen=True)
class ExtractedDocument:
    """Extracted text plus provenance: format, unit count, warnings."""

    text: str
    format: str  # "txt" | "docx" | "pdf"
    page_or_paragraph_count: int
    warnings: tuple[str, ...] = ()


FORMATS = ("txt", "docx", "pdf")

_PDF_MAGIC = b"%PDF-"
_ZIP_MAGIC = b"PK\x03\x04"


def _is_docx_zip(data: bytes) -> bool:
    # zipfile raises more than BadZipFile on mangled archives (bad
    # central-directory encodings, bogus sizes); treat them all as not-DOCX.
    try:
        with zipfile.ZipFile(BytesIO(data)) as zf:
            return "word/document.xml" in zf.namelist()
    except Exception:
        return False


def detect_format(data: bytes, declared_name: str = "") -> str:
    """Magic-number detection; the declared extension only breaks ties."""
    if not data:
        raise UnsupportedFormat("empty input")
    extension = declared_name.rsplit(".", 1)[-1].lower() if "." in declared_name else ""
    if data.startswith(_PDF_MAGIC):
        # A text file that happens to start with the PDF magic: let a
        # declared .txt extension win the tie.
        if extension == "txt" and _decodes_utf8(data):
            return "txt"
        return "pdf"
    if data.startswith(_ZIP_MAGIC):
        if _is_docx_zip(data):
            return "docx"
        raise UnsupportedFormat("ZIP container without word/document.xml")
    if _decodes_utf8(data):
        return "txt"
    raise UnsupportedFormat("not a PDF, DOCX, or UTF-8 text file")


def _decodes_utf8(data: bytes) -> bool:
    try:
        data.decode("utf-8")
        return True
    except UnicodeDecodeError:
        return False


def _normalize_txt(raw: str) -> str:
    text = raw.replace("\r\n", "\n").replace("\r", "\n")
    text = text.lstrip("﻿")
    # Blank-line paragraph breaks become exactly one "\n\n".
    text = re.sub(r"\n{3,}", "\n\n", text)
    return text.strip("\n")


def extract_txt(data: bytes) -> ExtractedDocument:
    text = _normalize_txt(data.decode("utf-8"))
    paragraphs = [p for p in text.split("\n\n") if p.strip()]
    return ExtractedDocument(
        text=text, format="txt", page_or_paragraph_count=max(1, len(paragraphs))
    )


def extract_text(data: bytes, declared_name: str = "") -> ExtractedDocument:
    """Detect the format and dispatch to the matching extractor."""
    fmt = detect_format(data, declared_name)
    if fmt == "txt":
        return extract_txt(data)
    if fmt == "docx":
        from .docx import extract_docx

        return extract_docx(data)
    from .pdf import extract_pdf

    return extract_pdf(data)


__all__ = [
    "CorruptArchive",
    "CorruptPdf",
    "CorruptXml",
    "EncryptedPdf",
    "ExtractedDocument",
    "IngestionError",
    "NoTextContent",
    "UnsupportedFormat",
    "detect_format",
    "extract_text",
    "extract_txt",
]
