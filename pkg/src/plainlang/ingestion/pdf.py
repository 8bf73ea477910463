"""Text extraction from unencrypted, text-based PDFs.

Strategy: index every top-level ``N G obj`` in the file (more robust than
trusting the xref table, and immune to incremental-update quirks), pull
compressed objects out of object streams, walk the page tree, decode each
page's content streams, and interpret the text-showing operators
(Tj, TJ, ', ") with enough text-matrix tracking to recover word spacing
and line breaks. Byte-to-Unicode mapping uses embedded ToUnicode CMaps
when present and standard one-byte encodings otherwise.
"""

from __future__ import annotations

import re
import zlib
from dataclasses import dataclass, field
from typing import Any, Optional

from . import CorruptPdf, EncryptedPdf, ExtractedDocument, NoTextContent

_WHITESPACE = b"\x00\t\n\x0c\r "
_DELIMITERS = b"()<>[]{}/%"

# Inter-glyph TJ adjustment (thousandths of an em) treated as a word gap.
_TJ_SPACE_THRESHOLD = 150

_MAX_DECOMPRESSED = 64 * 1024 * 1024
_MAX_PAGES = 10_000


class _Bail(Exception):
    """Internal parse failure; converted to CorruptPdf at the boundary."""


@dataclass(frozen=True)
class _Ref:
    num: int
    gen: int


class _Name(str):
    """A PDF name; compares equal to its text (without the slash)."""


@dataclass
class _Stream:
    dictionary: dict
    raw: bytes


# ---------------------------------------------------------------------------
# Object lexer/parser
# ---------------------------------------------------------------------------

def _skip_ws(data: bytes, pos: int) -> int:
    n = len(data)
    while pos < n:
        c = data[pos]
        if c in _WHITESPACE:
            pos += 1
        elif c == 0x25:  # '%' comment runs to end of line
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    return pos


_NUMBER_RE = re.compile(rb"[+-]?(?:\d+\.?\d*|\.\d+)")
_REF_RE = re.compile(rb"(\d+)\s+(\d+)\s+R(?![A-Za-z0-9])")
_KEYWORD_RE = re.compile(rb"[^\s()<>\[\]{}/%]+")


def _parse_literal_string(data: bytes, pos: int) -> tuple[bytes, int]:
    # pos is just after the opening '('.
    out = bytearray()
    depth = 1
    n = len(data)
    while pos < n:
        c = data[pos]
        if c == 0x5C:  # backslash
            pos += 1
            if pos >= n:
                break
            e = data[pos]
            if e in b"nrtbf":
                out.append({0x6E: 10, 0x72: 13, 0x74: 9, 0x62: 8, 0x66: 12}[e])
                pos += 1
            elif e in b"()\\":
                out.append(e)
                pos += 1
            elif 0x30 <= e <= 0x37:
                digits = bytearray()
                while pos < n and len(digits) < 3 and 0x30 <= data[pos] <= 0x37:
                    digits.append(data[pos])
                    pos += 1
                out.append(int(digits, 8) & 0xFF)
            elif e in b"\r\n":
                pos += 1
                if e == 0x0D and pos < n and data[pos] == 0x0A:
                    pos += 1
            else:
                out.append(e)
                pos += 1
        elif c == 0x28:  # '('
            depth += 1
            out.append(c)
            pos += 1
        elif c == 0x29:  # ')'
            depth -= 1
            pos += 1
            if depth == 0:
                return bytes(out), pos
            out.append(c)
        else:
            out.append(c)
            pos += 1
    raise _Bail("unterminated literal string")


def _parse_hex_string(data: bytes, pos: int) -> tuple[bytes, int]:
    end = data.find(b">", pos)
    if end < 0:
        raise _Bail("unterminated hex string")
    hexdigits = re.sub(rb"[^0-9A-Fa-f]", b"", data[pos:end])
    if len(hexdigits) % 2:
        hexdigits += b"0"
    return bytes.fromhex(hexdigits.decode("ascii")), end + 1


def _parse_name(data: bytes, pos: int) -> tuple[_Name, int]:
    # pos is just after '/'.
    n = len(data)
    out = bytearray()
    while pos < n:
        c = data[pos]
        if c in _WHITESPACE or c in _DELIMITERS:
            break
        if c == 0x23 and pos + 2 < n:  # '#xx' escape
            try:
                out.append(int(data[pos + 1 : pos + 3], 16))
                pos += 3
                continue
            except ValueError:
                pass
        out.append(c)
        pos += 1
    return _Name(out.decode("latin-1")), pos


def _parse_object(data: bytes, pos: int, allow_refs: bool = True) -> tuple[Any, int]:
    pos = _skip_ws(data, pos)
    if pos >= len(data):
        raise _Bail("unexpected end of data")
    if data.startswith(b"<<", pos):
        pos += 2
        result: dict = {}
        while True:
            pos = _skip_ws(data, pos)
            if data.startswith(b">>", pos):
                return result, pos + 2
            if pos >= len(data):
                raise _Bail("unterminated dictionary")
            if data[pos] != 0x2F:
                raise _Bail("dictionary key is not a name")
            key, pos = _parse_name(data, pos + 1)
            value, pos = _parse_object(data, pos, allow_refs)
            result[str(key)] = value
    c = data[pos]
    if c == 0x3C:  # '<'
        return _parse_hex_string(data, pos + 1)
    if c == 0x28:  # '('
        return _parse_literal_string(data, pos + 1)
    if c == 0x2F:  # '/'
        return _parse_name(data, pos + 1)
    if c == 0x5B:  # '['
        pos += 1
        items: list = []
        while True:
            pos = _skip_ws(data, pos)
            if pos >= len(data):
                raise _Bail("unterminated array")
            if data[pos] == 0x5D:
                return items, pos + 1
            item, pos = _parse_object(data, pos, allow_refs)
            items.append(item)
    if data.startswith(b"true", pos):
        return True, pos + 4
    if data.startswith(b"false", pos):
        return False, pos + 5
    if data.startswith(b"null", pos):
        return None, pos + 4
    m = _NUMBER_RE.match(data, pos)
    if m:
        token = m.group(0)
        if allow_refs and b"." not in token and not token.startswith(b"-"):
            ref = _REF_RE.match(data, pos)
            if ref:
                return _Ref(int(ref.group(1)), int(ref.group(2))), ref.end()
        if b"." in token:
            return float(token), m.end()
        return int(token), m.end()
    raise _Bail(f"unparseable object at byte {pos}")


# ---------------------------------------------------------------------------
# Stream filters
# ---------------------------------------------------------------------------

def _flate_decode(raw: bytes) -> bytes:
    decomp = zlib.decompressobj()
    try:
        out = decomp.decompress(raw, _MAX_DECOMPRESSED)
    except zlib.error as exc:
        raise _Bail(f"flate decode failed: {exc}") from exc
    if decomp.unconsumed_tail:
        raise _Bail("decompressed stream exceeds size cap")
    return out


def _ascii_hex_decode(raw: bytes) -> bytes:
    body = raw.split(b">", 1)[0]
    hexdigits = re.sub(rb"[^0-9A-Fa-f]", b"", body)
    if len(hexdigits) % 2:
        hexdigits += b"0"
    return bytes.fromhex(hexdigits.decode("ascii"))


def _ascii_85_decode(raw: bytes) -> bytes:
    import base64

    body = raw.strip()
    if body.startswith(b"<~"):
        body = body[2:]
    body = body.split(b"~>", 1)[0]
    try:
        return base64.a85decode(body)
    except ValueError as exc:
        raise _Bail(f"ascii85 decode failed: {exc}") from exc


def _apply_png_predictor(data: bytes, columns: int, colors: int, bpc: int) -> bytes:
    row_len = max(1, (columns * colors * bpc + 7) // 8)
    bpp = max(1, (colors * bpc + 7) // 8)
    out = bytearray()
    prev = bytearray(row_len)
    pos = 0
    while pos + 1 <= len(data) - 1:
        ftype = data[pos]
        row = bytearray(data[pos + 1 : pos + 1 + row_len])
        pos += 1 + row_len
        if ftype == 1:  # Sub
            for i in range(bpp, len(row)):
                row[i] = (row[i] + row[i - bpp]) & 0xFF
        elif ftype == 2:  # Up
            for i in range(len(row)):
                row[i] = (row[i] + prev[i]) & 0xFF
        elif ftype == 3:  # Average
            for i in range(len(row)):
                left = row[i - bpp] if i >= bpp else 0
                row[i] = (row[i] + (left + prev[i]) // 2) & 0xFF
        elif ftype == 4:  # Paeth
            for i in range(len(row)):
                a = row[i - bpp] if i >= bpp else 0
                b = prev[i]
                c = prev[i - bpp] if i >= bpp else 0
                p = a + b - c
                pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
                pred = a if pa <= pb and pa <= pc else (b if pb <= pc else c)
                row[i] = (row[i] + pred) & 0xFF
        out.extend(row)
        prev = row
    return bytes(out)


class _UnsupportedFilter(Exception):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name


# ---------------------------------------------------------------------------
# Document model
# ---------------------------------------------------------------------------

_OBJ_RE = re.compile(rb"(?<![0-9])(\d+)\s+(\d+)\s+obj\b")
_TRAILER_RE = re.compile(rb"trailer")


class _Document:
    def __init__(self, data: bytes):
        self.data = data
        self._cache: dict[int, Any] = {}
        self._parsing: set[int] = set()
        self._offsets: dict[int, list[int]] = {}
        for m in _OBJ_RE.finditer(data):
            self._offsets.setdefault(int(m.group(1)), []).append(m.end())
        if not self._offsets:
            raise _Bail("no indirect objects found")
        self._objstm_loaded = False

    # -- object access ------------------------------------------------

    def get(self, num: int) -> Any:
        if num in self._cache:
            return self._cache[num]
        if num in self._parsing:  # reference cycle
            return None
        self._parsing.add(num)
        try:
            for offset in reversed(self._offsets.get(num, [])):
                try:
                    obj = self._parse_indirect(offset)
                except _Bail:
                    continue
                self._cache[num] = obj
                return obj
            if not self._objstm_loaded:
                self._load_object_streams()
                if num in self._cache:
                    return self._cache[num]
            self._cache[num] = None
            return None
        finally:
            self._parsing.discard(num)

    def resolve(self, obj: Any, depth: int = 0) -> Any:
        while isinstance(obj, _Ref):
            if depth > 32:
                raise _Bail("reference chain too deep")
            obj = self.get(obj.num)
            depth += 1
        return obj

    def _parse_indirect(self, offset: int) -> Any:
        obj, pos = _parse_object(self.data, offset)
        if isinstance(obj, dict):
            pos = _skip_ws(self.data, pos)
            if self.data.startswith(b"stream", pos):
                pos += len(b"stream")
                if self.data.startswith(b"\r\n", pos):
                    pos += 2
                elif pos < len(self.data) and self.data[pos] in b"\r\n":
                    pos += 1
                raw = self._stream_bytes(obj, pos)
                return _Stream(dictionary=obj, raw=raw)
        return obj

    def _stream_bytes(self, dictionary: dict, start: int) -> bytes:
        length = self.resolve(dictionary.get("Length"))
        if isinstance(length, int) and 0 <= length <= len(self.data) - start:
            candidate = self.data[start : start + length]
            tail = _skip_ws(self.data, start + length)
            if self.data.startswith(b"endstream", tail):
                return candidate
        end = self.data.find(b"endstream", start)
        if end < 0:
            raise _Bail("stream without endstream")
        return self.data[start:end].rstrip(b"\r\n")

    def decode_stream(self, stream: _Stream) -> bytes:
        data = stream.raw
        filters = self.resolve(stream.dictionary.get("Filter"))
        if filters is None:
            filter_list: list = []
        elif isinstance(filters, list):
            filter_list = [self.resolve(f) for f in filters]
        else:
            filter_list = [filters]
        parms = self.resolve(stream.dictionary.get("DecodeParms"))
        parm_list = parms if isinstance(parms, list) else [parms] * len(filter_list)
        for filt, parm in zip(filter_list, parm_list):
            name = str(filt)
            if name in ("FlateDecode", "Fl"):
                data = _flate_decode(data)
            elif name in ("ASCIIHexDecode", "AHx"):
                data = _ascii_hex_decode(data)
            elif name in ("ASCII85Decode", "A85"):
                data = _ascii_85_decode(data)
            else:
                raise _UnsupportedFilter(name)
            parm = self.resolve(parm)
            if isinstance(parm, dict):
                predictor = self.resolve(parm.get("Predictor", 1)) or 1
                if predictor >= 10:
                    data = _apply_png_predictor(
                        data,
                        columns=int(self.resolve(parm.get("Columns", 1)) or 1),
                        colors=int(self.resolve(parm.get("Colors", 1)) or 1),
                        bpc=int(self.resolve(parm.get("BitsPerComponent", 8)) or 8),
                    )
        return data

    def _load_object_streams(self) -> None:
        self._objstm_loaded = True
        for num in list(self._offsets):
            try:
                obj = self.get(num)
            except _Bail:
                continue
            if not isinstance(obj, _Stream):
                continue
            if str(self.resolve(obj.dictionary.get("Type"))) != "ObjStm":
                continue
            try:
                payload = self.decode_stream(obj)
                count = int(self.resolve(obj.dictionary.get("N")))
                first = int(self.resolve(obj.dictionary.get("First")))
            except (_Bail, _UnsupportedFilter, TypeError, ValueError):
                continue
            pos = 0
            pairs = []
            try:
                for _ in range(count):
                    onum, pos = _parse_object(payload, pos, allow_refs=False)
                    ooff, pos = _parse_object(payload, pos, allow_refs=False)
                    pairs.append((int(onum), int(ooff)))
                for onum, ooff in pairs:
                    if onum in self._cache:
                        continue
                    member, _ = _parse_object(payload, first + ooff)
                    self._cache[onum] = member
            except (_Bail, TypeError, ValueError):
                continue

    # -- document structure -------------------------------------------

    def is_encrypted(self) -> bool:
        for m in _TRAILER_RE.finditer(self.data):
            try:
                trailer, _ = _parse_object(self.data, m.end())
            except _Bail:
                continue
            if isinstance(trailer, dict) and "Encrypt" in trailer:
                return True
        # Cross-reference stream trailers carry /Encrypt inside the
        # stream dictionary instead.
        return re.search(rb"/Encrypt\s+\d+\s+\d+\s+R", self.data) is not None

    def pages(self) -> list[tuple[dict, dict]]:
        """Yields (page_dict, resources) pairs in document order."""
        pages: list[tuple[dict, dict]] = []
        catalog = self._find_catalog()
        if catalog is not None:
            root = catalog.get("Pages")
            visited: set[int] = set()
            self._walk_pages(root, {}, pages, visited)
        if not pages:
            for num in sorted(self._offsets):
                obj = self.get(num)
                if isinstance(obj, dict) and str(self.resolve(obj.get("Type"))) == "Page":
                    resources = self.resolve(obj.get("Resources")) or {}
                    pages.append((obj, resources))
        return pages

    def _find_catalog(self) -> Optional[dict]:
        for num in sorted(self._offsets):
            obj = self.get(num)
            if isinstance(obj, dict) and str(self.resolve(obj.get("Type"))) == "Catalog":
                return obj
        return None

    def _walk_pages(self, node_ref, inherited_resources, pages, visited) -> None:
        if len(pages) >= _MAX_PAGES:
            return
        if isinstance(node_ref, _Ref):
            if node_ref.num in visited:
                return
            visited.add(node_ref.num)
        node = self.resolve(node_ref)
        if not isinstance(node, dict):
            return
        resources = self.resolve(node.get("Resources"))
        if not isinstance(resources, dict):
            resources = inherited_resources
        node_type = str(self.resolve(node.get("Type")))
        if node_type == "Page":
            pages.append((node, resources or {}))
            return
        kids = self.resolve(node.get("Kids"))
        if isinstance(kids, list):
            for kid in kids:
                self._walk_pages(kid, resources or {}, pages, visited)

    def content_bytes(self, page: dict) -> tuple[bytes, list[str]]:
        warnings: list[str] = []
        contents = self.resolve(page.get("Contents"))
        chunks: list[bytes] = []
        items = contents if isinstance(contents, list) else [contents]
        for item in items:
            stream = self.resolve(item)
            if isinstance(stream, _Stream):
                try:
                    chunks.append(self.decode_stream(stream))
                except _UnsupportedFilter as exc:
                    warnings.append(f"skipped content stream with {exc.name} filter")
        return b"\n".join(chunks), warnings


# ---------------------------------------------------------------------------
# Fonts and text decoding
# ---------------------------------------------------------------------------

_GLYPH_NAMES = {
    "space": " ", "exclam": "!", "quotedbl": '"', "numbersign": "#",
    "dollar": "$", "percent": "%", "ampersand": "&", "quotesingle": "'",
    "quoteright": "’", "quoteleft": "‘", "parenleft": "(",
    "parenright": ")", "asterisk": "*", "plus": "+", "comma": ",",
    "hyphen": "-", "period": ".", "slash": "/", "colon": ":",
    "semicolon": ";", "less": "<", "equal": "=", "greater": ">",
    "question": "?", "at": "@", "bracketleft": "[", "backslash": "\\",
    "bracketright": "]", "underscore": "_", "braceleft": "{", "bar": "|",
    "braceright": "}", "quotedblleft": "“", "quotedblright": "”",
    "endash": "–", "emdash": "—", "bullet": "•",
    "zero": "0", "one": "1", "two": "2", "three": "3", "four": "4",
    "five": "5", "six": "6", "seven": "7", "eight": "8", "nine": "9",
}


def _glyph_to_char(name: str) -> Optional[str]:
    if len(name) == 1:
        return name
    if name in _GLYPH_NAMES:
        return _GLYPH_NAMES[name]
    if name.startswith("uni") and len(name) >= 7:
        try:
            return chr(int(name[3:7], 16))
        except ValueError:
            return None
    if name.startswith("u") and 5 <= len(name) <= 7:
        try:
            return chr(int(name[1:], 16))
        except ValueError:
            return None
    return None


_BFCHAR_RE = re.compile(rb"beginbfchar(.*?)endbfchar", re.S)
_BFRANGE_RE = re.compile(rb"beginbfrange(.*?)endbfrange", re.S)
_HEX_TOKEN_RE = re.compile(rb"<([0-9A-Fa-f\s]*)>|\[|\]")


def _hex_bytes(token: bytes) -> bytes:
    digits = re.sub(rb"\s", b"", token)
    if len(digits) % 2:
        digits += b"0"
    return bytes.fromhex(digits.decode("ascii"))


def _utf16be(b: bytes) -> str:
    if len(b) % 2:
        b += b"\x00"
    return b.decode("utf-16-be", "replace")


def _parse_tounicode(data: bytes) -> dict[int, str]:
    mapping: dict[int, str] = {}
    for section in _BFCHAR_RE.finditer(data):
        tokens = [m for m in _HEX_TOKEN_RE.finditer(section.group(1)) if m.group(1) is not None]
        for i in range(0, len(tokens) - 1, 2):
            src = _hex_bytes(tokens[i].group(1))
            dst = _hex_bytes(tokens[i + 1].group(1))
            mapping[int.from_bytes(src, "big")] = _utf16be(dst)
    for section in _BFRANGE_RE.finditer(data):
        body = section.group(1)
        matches = list(_HEX_TOKEN_RE.finditer(body))
        i = 0
        while i < len(matches):
            if matches[i].group(0) in (b"[", b"]"):
                i += 1
                continue
            if i + 2 >= len(matches):
                break
            lo = int.from_bytes(_hex_bytes(matches[i].group(1)), "big")
            hi = int.from_bytes(_hex_bytes(matches[i + 1].group(1)), "big")
            hi = min(hi, lo + 65535)
            if matches[i + 2].group(0) == b"[":
                i += 3
                code = lo
                while i < len(matches) and matches[i].group(0) != b"]":
                    mapping[code] = _utf16be(_hex_bytes(matches[i].group(1)))
                    code += 1
                    i += 1
                i += 1
            else:
                dst = _hex_bytes(matches[i + 2].group(1))
                base = int.from_bytes(dst, "big")
                width = max(len(dst), 2)
                for offset in range(hi - lo + 1):
                    mapping[lo + offset] = _utf16be(
                        (base + offset).to_bytes(width, "big")
                    )
                i += 3
    return mapping


@dataclass
class _Font:
    code_bytes: int = 1
    cmap: Optional[dict[int, str]] = None
    codec: str = "cp1252"
    differences: dict[int, str] = field(default_factory=dict)

    def decode(self, raw: bytes) -> str:
        if self.cmap is not None:
            out = []
            step = self.code_bytes
            for i in range(0, len(raw) - step + 1, step):
                code = int.from_bytes(raw[i : i + step], "big")
                mapped = self.cmap.get(code)
                if mapped is None and step == 1:
                    mapped = self._decode_single(raw[i : i + 1])
                out.append(mapped or "")
            return "".join(out)
        return "".join(self._decode_single(raw[i : i + 1]) for i in range(len(raw)))

    def _decode_single(self, b: bytes) -> str:
        if b[0] in self.differences:
            return self.differences[b[0]]
        try:
            return b.decode(self.codec)
        except (UnicodeDecodeError, LookupError):
            return b.decode("latin-1", "replace")


def _build_font(doc: _Document, font_dict: dict) -> _Font:
    font = _Font()
    subtype = str(doc.resolve(font_dict.get("Subtype")))
    if subtype == "Type0":
        font.code_bytes = 2
    tounicode = doc.resolve(font_dict.get("ToUnicode"))
    if isinstance(tounicode, _Stream):
        try:
            font.cmap = _parse_tounicode(doc.decode_stream(tounicode))
        except (_Bail, _UnsupportedFilter):
            font.cmap = None
    encoding = doc.resolve(font_dict.get("Encoding"))
    base = encoding
    if isinstance(encoding, dict):
        base = doc.resolve(encoding.get("BaseEncoding"))
        differences = doc.resolve(encoding.get("Differences"))
        if isinstance(differences, list):
            code = 0
            for item in differences:
                item = doc.resolve(item)
                if isinstance(item, (int, float)):
                    code = int(item)
                elif isinstance(item, _Name):
                    char = _glyph_to_char(str(item))
                    if char is not None:
                        font.differences[code] = char
                    code += 1
    if base is not None:
        name = str(base)
        if name == "WinAnsiEncoding":
            font.codec = "cp1252"
        elif name == "MacRomanEncoding":
            font.codec = "mac_roman"
        else:
            font.codec = "latin-1"
    return font


def _page_fonts(doc: _Document, resources: dict) -> dict[str, _Font]:
    fonts: dict[str, _Font] = {}
    font_map = doc.resolve(resources.get("Font")) if resources else None
    if isinstance(font_map, dict):
        for name, ref in font_map.items():
            font_dict = doc.resolve(ref)
            if isinstance(font_dict, dict):
                fonts[name] = _build_font(doc, font_dict)
    return fonts


# ---------------------------------------------------------------------------
# Content stream interpretation
# ---------------------------------------------------------------------------

class _PageText:
    def __init__(self, fonts: dict[str, _Font]):
        self.fonts = fonts
        self.parts: list[str] = []
        self.font: Optional[_Font] = None
        self.leading = 0.0
        self.x = 0.0
        self.y = 0.0
        self.last_shown_y: Optional[float] = None
        self.moved_on_line = False
        self.show_ops = 0

    # -- position tracking --------------------------------------------

    def _moved(self, new_x: float, new_y: float) -> None:
        if new_y != self.y:
            self.moved_on_line = False
        elif new_x != self.x:
            self.moved_on_line = True
        self.x, self.y = new_x, new_y

    def begin_text(self) -> None:
        self._moved(0.0, 0.0)

    def td(self, tx: float, ty: float) -> None:
        self._moved(self.x + tx, self.y + ty)

    def set_matrix(self, e: float, f: float) -> None:
        self._moved(e, f)

    def next_line(self) -> None:
        self._moved(self.x, self.y - (self.leading or 12.0))

    # -- output -------------------------------------------------------

    def _separator(self) -> str:
        if self.last_shown_y is None:
            return ""
        if self.y != self.last_shown_y:
            return "\n"
        if self.moved_on_line and self.parts and not self.parts[-1][-1:].isspace():
            return " "
        return ""

    def show(self, raw: bytes) -> None:
        self.show_ops += 1
        decoded = (self.font or _Font()).decode(raw)
        sep = self._separator()
        if sep:
            self.parts.append(sep)
        if decoded:
            self.parts.append(decoded)
        self.last_shown_y = self.y
        self.moved_on_line = False

    def inline_gap(self) -> None:
        if self.parts and not self.parts[-1][-1:].isspace():
            self.parts.append(" ")

    def text(self) -> str:
        joined = "".join(self.parts)
        lines = [line.rstrip() for line in joined.split("\n")]
        return "\n".join(lines).strip("\n")

    # -- operator dispatch ----------------------------------------------

    def run(self, content: bytes) -> None:
        pos = 0
        n = len(content)
        operands: list = []
        while pos < n:
            pos = _skip_ws(content, pos)
            if pos >= n:
                break
            c = content[pos]
            if c in b"(<[/" or c in b"+-." or 0x30 <= c <= 0x39:
                try:
                    obj, pos = _parse_object(content, pos, allow_refs=False)
                except _Bail:
                    pos += 1
                    continue
                operands.append(obj)
                continue
            m = _KEYWORD_RE.match(content, pos)
            if not m:
                pos += 1
                continue
            op = m.group(0)
            pos = m.end()
            if op == b"BI":
                end = content.find(b"EI", pos)
                pos = n if end < 0 else end + 2
                operands.clear()
                continue
            pos = self._apply(op, operands, content, pos)
            operands.clear()

    def _apply(self, op: bytes, operands: list, content: bytes, pos: int) -> int:
        try:
            if op == b"BT":
                self.begin_text()
            elif op == b"Tf" and len(operands) >= 2:
                name = operands[-2]
                if isinstance(name, _Name):
                    self.font = self.fonts.get(str(name), self.font)
            elif op == b"TL" and operands:
                self.leading = float(operands[-1])
            elif op == b"Td" and len(operands) >= 2:
                self.td(float(operands[-2]), float(operands[-1]))
            elif op == b"TD" and len(operands) >= 2:
                self.leading = -float(operands[-1])
                self.td(float(operands[-2]), float(operands[-1]))
            elif op == b"Tm" and len(operands) >= 6:
                self.set_matrix(float(operands[-2]), float(operands[-1]))
            elif op == b"T*":
                self.next_line()
            elif op == b"Tj" and operands:
                if isinstance(operands[-1], bytes):
                    self.show(operands[-1])
            elif op == b"'" and operands:
                self.next_line()
                if isinstance(operands[-1], bytes):
                    self.show(operands[-1])
            elif op == b'"' and len(operands) >= 3:
                self.next_line()
                if isinstance(operands[-1], bytes):
                    self.show(operands[-1])
            elif op == b"TJ" and operands and isinstance(operands[-1], list):
                for item in operands[-1]:
                    if isinstance(item, bytes):
                        self.show(item)
                    elif isinstance(item, (int, float)) and item < -_TJ_SPACE_THRESHOLD:
                        self.inline_gap()
        except (TypeError, ValueError):
            pass
        return pos


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def extract_pdf(data: bytes) -> ExtractedDocument:
    """Extract page text; pages are separated by blank lines."""
    try:
        doc = _Document(data)
        if doc.is_encrypted():
            raise EncryptedPdf("document has an /Encrypt dictionary")
        pages = doc.pages()
        if not pages:
            raise CorruptPdf("no page objects found")
        warnings: list[str] = []
        page_texts: list[str] = []
        total_show_ops = 0
        for page, resources in pages:
            content, page_warnings = doc.content_bytes(page)
            warnings.extend(page_warnings)
            extractor = _PageText(_page_fonts(doc, resources))
            extractor.run(content)
            total_show_ops += extractor.show_ops
            page_texts.append(extractor.text())
        text = "\n\n".join(t for t in page_texts if t)
        if not text.strip():
            if total_show_ops == 0:
                raise NoTextContent("no text-showing operators on any page")
            raise NoTextContent("text operators decoded to empty text")
        return ExtractedDocument(
            text=text,
            format="pdf",
            page_or_paragraph_count=len(pages),
            warnings=tuple(dict.fromkeys(warnings)),
        )
    except (EncryptedPdf, NoTextContent, CorruptPdf):
        raise
    except Exception as exc:
        raise CorruptPdf(f"unparseable PDF: {exc}") from exc
