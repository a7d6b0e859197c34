"""Structured policy documents repaired from converter-emitted HTML.

PDF-to-HTML converters leave predictable damage behind: headings split
across lines, headings emitted as styled paragraphs, table-of-contents
blocks, and page headers/footers repeated throughout. :func:`normalize_html`
undoes that damage and produces an immutable, offset-addressable section
tree that downstream retrieval and the review UI both work from.

Input contract (documented, lenient): block tags and ``<br>`` delimit
lines; font size is read from inline ``font-size`` styles or ``<font
size=N>``; bold from ``<b>``/``<strong>``/``font-weight``; page boundaries
from ``<hr>`` or elements whose ``id``/``name`` starts with ``page``.
"""

from __future__ import annotations

import hashlib
import html as html_lib
import re
import statistics
from dataclasses import dataclass, field
from html.parser import HTMLParser
from typing import Callable, Iterable

from .errors import EmptyDocument, MalformedInput, SpanOutOfRange

__all__ = [
    "Section",
    "PolicyDocument",
    "NormalizationOptions",
    "normalize_html",
    "sections_matching",
    "render_highlighted",
    "document_to_html",
]

_SECTION_SEP = "\n\n"

_BLOCK_TAGS = {
    "p", "div", "li", "ul", "ol", "table", "tr", "td", "th", "section",
    "article", "aside", "header", "footer", "blockquote", "pre", "dt", "dd",
    "h1", "h2", "h3", "h4", "h5", "h6",
}
_SKIP_TAGS = {"script", "style"}
_HEADING_RANKS = {f"h{i}": i for i in range(1, 7)}

_FONT_SIZE_RE = re.compile(r"font-size\s*:\s*([0-9]+(?:\.[0-9]+)?)", re.IGNORECASE)
_FONT_WEIGHT_RE = re.compile(r"font-weight\s*:\s*(bold|[6-9]00)", re.IGNORECASE)
_PAGE_MARKER_RE = re.compile(r"^page", re.IGNORECASE)
# Legacy <font size=1..7> values mapped onto the traditional point scale.
_FONT_TAG_SIZES = {1: 8.0, 2: 10.0, 3: 12.0, 4: 14.0, 5: 18.0, 6: 24.0, 7: 36.0}

_DOT_LEADER_RE = re.compile(r"(?:\.\s*){3,}\d*\s*$")
_TRAILING_PAGENO_RE = re.compile(r"\s\d{1,4}$")


@dataclass(frozen=True)
class NormalizationOptions:
    """Tuning knobs for heading repair and noise stripping."""

    big_font_ratio: float = 1.15
    treat_bold_as_heading: bool = True
    max_heading_chars: int = 120
    strip_toc: bool = True
    strip_repeated_header_footer: bool = True

    def __post_init__(self) -> None:
        if self.big_font_ratio <= 1.0:
            raise ValueError("big_font_ratio must be > 1.0")
        if self.max_heading_chars <= 0:
            raise ValueError("max_heading_chars must be positive")


@dataclass(frozen=True)
class Section:
    """One heading plus its body, addressed by offsets into the document."""

    section_id: str
    heading: str
    level: int
    body: str
    start_offset: int
    end_offset: int

    @property
    def text(self) -> str:
        """The exact substring of ``full_text`` this section covers."""
        if self.heading and self.body:
            return self.heading + "\n" + self.body
        return self.heading or self.body


@dataclass(frozen=True)
class PolicyDocument:
    """Immutable structured form of one policy document."""

    doc_id: str
    title: str
    sections: tuple[Section, ...]
    full_text: str
    source_name: str = ""

    def section_by_id(self, section_id: str) -> Section:
        for section in self.sections:
            if section.section_id == section_id:
                return section
        raise KeyError(section_id)

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "title": self.title,
            "source_name": self.source_name,
            "sections": [
                {
                    "section_id": s.section_id,
                    "heading": s.heading,
                    "level": s.level,
                    "body": s.body,
                    "start_offset": s.start_offset,
                    "end_offset": s.end_offset,
                }
                for s in self.sections
            ],
            "full_text": self.full_text,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PolicyDocument":
        sections = tuple(
            Section(
                section_id=s["section_id"],
                heading=s["heading"],
                level=int(s["level"]),
                body=s["body"],
                start_offset=int(s["start_offset"]),
                end_offset=int(s["end_offset"]),
            )
            for s in data["sections"]
        )
        doc = cls(
            doc_id=data["doc_id"],
            title=data.get("title", ""),
            sections=sections,
            full_text=data["full_text"],
            source_name=data.get("source_name", ""),
        )
        _validate_document(doc)
        return doc


def _validate_document(doc: PolicyDocument) -> None:
    seen_ids = set()
    previous_end = -1
    for section in doc.sections:
        if section.section_id in seen_ids:
            raise ValueError(f"duplicate section id {section.section_id!r}")
        seen_ids.add(section.section_id)
        if not section.start_offset < section.end_offset:
            raise ValueError(f"section {section.section_id!r} has an empty offset range")
        if section.start_offset < previous_end:
            raise ValueError(f"section {section.section_id!r} overlaps its predecessor")
        if section.level < 1:
            raise ValueError(f"section {section.section_id!r} has level < 1")
        covered = doc.full_text[section.start_offset : section.end_offset]
        if covered != section.text:
            raise ValueError(
                f"section {section.section_id!r} text does not match its offsets"
            )
        previous_end = section.end_offset


# --- lenient HTML tokenization ---


@dataclass
class _Line:
    text: str
    page: int
    tag_rank: int | None  # h1..h6 rank when the line came from a heading tag
    font_size: float | None
    bold: bool


class _LineParser(HTMLParser):
    """Flattens lenient HTML into styled text lines."""

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.lines: list[_Line] = []
        self.title = ""
        self._page = 0
        self._chunks: list[tuple[str, float | None, bool, int | None]] = []
        self._stack: list[tuple[str, float | None, bool, int | None]] = []
        self._skip_depth = 0
        self._in_title = False
        self._title_parts: list[str] = []

    # -- style stack helpers --

    def _effective_style(self) -> tuple[float | None, bool, int | None]:
        size = None
        bold = False
        rank = None
        for _, s, b, r in self._stack:
            if s is not None:
                size = s
            bold = bold or b
            if r is not None:
                rank = r
        return size, bold, rank

    def _flush_line(self) -> None:
        if not self._chunks:
            return
        text = re.sub(r"\s+", " ", "".join(c[0] for c in self._chunks)).strip()
        chunks, self._chunks = self._chunks, []
        if not text:
            return
        meaningful = [c for c in chunks if c[0].strip()]
        sizes = [c[1] for c in meaningful if c[1] is not None]
        rank = next((c[3] for c in meaningful if c[3] is not None), None)
        self.lines.append(
            _Line(
                text=text,
                page=self._page,
                tag_rank=rank,
                font_size=max(sizes) if sizes else None,
                bold=bool(meaningful) and all(c[2] for c in meaningful),
            )
        )

    # -- parser callbacks --

    def handle_starttag(self, tag, attrs):
        attrs_map = dict(attrs)
        if tag in _SKIP_TAGS:
            self._skip_depth += 1
            return
        if tag == "title":
            self._in_title = True
            return
        if tag == "br":
            self._flush_line()
            return
        if tag == "hr":
            self._flush_line()
            self._page += 1
            return
        marker = attrs_map.get("id") or attrs_map.get("name") or ""
        if marker and _PAGE_MARKER_RE.match(marker):
            self._flush_line()
            self._page += 1
        if tag in _BLOCK_TAGS:
            self._flush_line()
        size = None
        bold = tag in ("b", "strong")
        style = attrs_map.get("style") or ""
        if style:
            size_match = _FONT_SIZE_RE.search(style)
            if size_match:
                size = float(size_match.group(1))
            if _FONT_WEIGHT_RE.search(style):
                bold = True
        if tag == "font":
            try:
                size = _FONT_TAG_SIZES.get(int(attrs_map.get("size", "")), size)
            except ValueError:
                pass
        self._stack.append((tag, size, bold, _HEADING_RANKS.get(tag)))

    def handle_startendtag(self, tag, attrs):
        self.handle_starttag(tag, attrs)
        if tag not in ("br", "hr", "title") and tag not in _SKIP_TAGS:
            self.handle_endtag(tag)

    def handle_endtag(self, tag):
        if tag in _SKIP_TAGS:
            self._skip_depth = max(0, self._skip_depth - 1)
            return
        if tag == "title":
            self._in_title = False
            self.title = re.sub(r"\s+", " ", "".join(self._title_parts)).strip()
            return
        if tag in ("br", "hr"):
            return
        if tag in _BLOCK_TAGS:
            self._flush_line()
        # pop back to the matching open tag, tolerating unclosed tags
        for index in range(len(self._stack) - 1, -1, -1):
            if self._stack[index][0] == tag:
                del self._stack[index:]
                break

    def handle_data(self, data):
        if self._skip_depth:
            return
        if self._in_title:
            self._title_parts.append(data)
            return
        if not data:
            return
        size, bold, rank = self._effective_style()
        self._chunks.append((data, size, bold, rank))

    def close(self):
        super().close()
        self._flush_line()


def _parse_lines(raw_html: str) -> tuple[list[_Line], str]:
    if "\x00" in raw_html:
        raise MalformedInput("input contains NUL bytes")
    parser = _LineParser()
    try:
        parser.feed(raw_html)
        parser.close()
    except Exception as exc:  # HTMLParser is lenient; anything it rejects is hopeless
        raise MalformedInput(f"markup could not be tokenized: {exc}") from exc
    return parser.lines, parser.title


# --- stripping heuristics ---


def _strip_repeated_lines(lines: list[_Line]) -> list[_Line]:
    """Drop non-heading lines repeated verbatim on three or more pages."""
    pages_by_text: dict[str, set[int]] = {}
    for line in lines:
        if line.tag_rank is None:
            pages_by_text.setdefault(line.text, set()).add(line.page)
    repeated = {text for text, pages in pages_by_text.items() if len(pages) >= 3}
    return [l for l in lines if l.tag_rank is not None or l.text not in repeated]


def _looks_like_toc_line(text: str) -> bool:
    return bool(_DOT_LEADER_RE.search(text) or _TRAILING_PAGENO_RE.search(text))


def _strip_toc_runs(lines: list[_Line]) -> list[_Line]:
    """Remove runs of >= 3 consecutive TOC-looking lines, to a fixed point.

    Removing one run can make its neighbors adjacent and form a new run, so
    the scan repeats until nothing changes. Lines from real heading tags are
    exempt; converters do not emit TOC entries as headings.
    """
    while True:
        keep = [True] * len(lines)
        run: list[int] = []
        for index, line in enumerate(lines + [None]):  # sentinel flushes last run
            if line is not None and line.tag_rank is None and _looks_like_toc_line(line.text):
                run.append(index)
                continue
            if len(run) >= 3:
                for run_index in run:
                    keep[run_index] = False
            run = []
        if all(keep):
            return lines
        lines = [line for line, kept in zip(lines, keep) if kept]


# --- heading promotion, merging, section assembly ---


@dataclass
class _Heading:
    text: str
    level: int
    promoted: bool = False


def _promote_headings(
    lines: list[_Line], options: NormalizationOptions
) -> list[_Line | _Heading]:
    # Unsized lines count at the legacy default (<font size=3> = 12pt) so a
    # document that only styles its headings still gets a body-sized median.
    body_sizes = [
        l.font_size if l.font_size else _FONT_TAG_SIZES[3]
        for l in lines
        if l.tag_rank is None
    ]
    median_size = statistics.median(body_sizes) if body_sizes else None

    promoted: list[tuple[_Line, float | None]] = []  # (line, promoted size)
    items: list[_Line | _Heading | None] = []
    for line in lines:
        if line.tag_rank is not None:
            items.append(_Heading(text=line.text, level=line.tag_rank))
            continue
        if len(line.text) <= options.max_heading_chars:
            big = (
                median_size is not None
                and line.font_size is not None
                and line.font_size >= options.big_font_ratio * median_size
            )
            bold = options.treat_bold_as_heading and line.bold
            if big or bold:
                items.append(None)  # placeholder, level assigned below
                promoted.append((line, line.font_size if big else None))
                continue
        items.append(line)

    # Promoted headings are leveled by font size: the largest promoted size
    # becomes level 1. Bold-only promotions rank below all sized ones.
    sized = sorted({size for _, size in promoted if size is not None}, reverse=True)
    level_of_size = {size: min(rank + 1, 6) for rank, size in enumerate(sized)}
    bold_level = min(len(sized) + 1, 6)

    result: list[_Line | _Heading] = []
    promoted_iter = iter(promoted)
    for item in items:
        if item is None:
            line, size = next(promoted_iter)
            level = level_of_size[size] if size is not None else bold_level
            result.append(_Heading(text=line.text, level=level, promoted=True))
        else:
            result.append(item)
    return result


def _merge_heading_fragments(items: list[_Line | _Heading]) -> list[_Line | _Heading]:
    """Join consecutive same-level promoted headings with no body between.

    This repairs headings the converter split over multiple lines; fragments
    of one heading share a style and therefore resolve to the same level.
    Real h1-h6 headings are never merged — adjacent tag headings (say, after
    a stripped TOC block) are distinct sections, not fragments.
    """
    merged: list[_Line | _Heading] = []
    for item in items:
        previous = merged[-1] if merged else None
        if (
            isinstance(item, _Heading)
            and item.promoted
            and isinstance(previous, _Heading)
            and previous.promoted
            and previous.level == item.level
        ):
            previous.text = previous.text + " " + item.text
        else:
            merged.append(item)
    return merged


def _assemble(
    items: list[_Line | _Heading],
    doc_id: str,
    title: str,
    source_name: str,
) -> PolicyDocument:
    # group into (heading, body lines); leading body lines form a preamble
    groups: list[tuple[_Heading | None, list[str]]] = []
    current_body: list[str] = []
    current_heading: _Heading | None = None
    started = False
    for item in items:
        if isinstance(item, _Heading):
            if started:
                groups.append((current_heading, current_body))
            current_heading, current_body, started = item, [], True
        else:
            if not started and current_body == [] and groups == []:
                started = True
            current_body.append(item.text)
    if started:
        groups.append((current_heading, current_body))

    sections: list[Section] = []
    parts: list[str] = []
    position = 0
    for index, (heading, body_lines) in enumerate(groups):
        body = "\n".join(body_lines)
        heading_text = heading.text if heading else ""
        level = heading.level if heading else 1
        if not heading_text and not body:
            continue
        if sections:
            parts.append(_SECTION_SEP)
            position += len(_SECTION_SEP)
        if heading_text and body:
            chunk = heading_text + "\n" + body
        else:
            chunk = heading_text or body
        section = Section(
            section_id=f"s{len(sections) + 1:04d}",
            heading=heading_text,
            level=level,
            body=body,
            start_offset=position,
            end_offset=position + len(chunk),
        )
        sections.append(section)
        parts.append(chunk)
        position += len(chunk)

    full_text = "".join(parts)
    if not full_text.strip():
        raise EmptyDocument("no visible text remains after stripping")

    if not title:
        title = next((s.heading for s in sections if s.heading), "")
    return PolicyDocument(
        doc_id=doc_id,
        title=title,
        sections=tuple(sections),
        full_text=full_text,
        source_name=source_name,
    )


def normalize_html(
    raw_html: str,
    options: NormalizationOptions | None = None,
    *,
    doc_id: str | None = None,
    source_name: str = "",
) -> PolicyDocument:
    """Repair converter HTML into a :class:`PolicyDocument`.

    Fixes applied, in order: page headers/footers repeated verbatim on three
    or more pages are dropped; table-of-contents blocks (three or more
    consecutive lines ending in dot leaders or page numbers) are dropped;
    short styled lines are promoted to headings (font size at least
    ``big_font_ratio`` times the median body size, or bold); consecutive
    same-level heading fragments with no body between them are merged.
    """
    if options is None:
        options = NormalizationOptions()
    lines, title = _parse_lines(raw_html)
    if options.strip_repeated_header_footer:
        lines = _strip_repeated_lines(lines)
    if options.strip_toc:
        lines = _strip_toc_runs(lines)
    if not lines:
        raise EmptyDocument("no visible text remains after stripping")
    items = _promote_headings(lines, options)
    items = _merge_heading_fragments(items)
    if doc_id is None:
        doc_id = "doc-" + hashlib.sha256(raw_html.encode("utf-8")).hexdigest()[:12]
    return _assemble(items, doc_id=doc_id, title=title, source_name=source_name)


def sections_matching(
    doc: PolicyDocument, predicate: Callable[[Section], bool]
) -> list[Section]:
    """Sections satisfying ``predicate``, in document order."""
    return [section for section in doc.sections if predicate(section)]


def document_to_html(doc: PolicyDocument, highlight: tuple[int, int] | None = None) -> str:
    """Serialize a document back to clean HTML.

    With ``highlight``, the text in that character range of ``full_text`` is
    wrapped in ``<mark>`` elements (split per line when the range crosses
    line boundaries). All visible text is preserved either way.
    """

    def emit(text: str, start: int) -> str:
        if highlight is None:
            return html_lib.escape(text)
        h_start, h_end = highlight
        end = start + len(text)
        if h_end <= start or h_start >= end:
            return html_lib.escape(text)
        a = max(h_start, start) - start
        b = min(h_end, end) - start
        return (
            html_lib.escape(text[:a])
            + "<mark>"
            + html_lib.escape(text[a:b])
            + "</mark>"
            + html_lib.escape(text[b:])
        )

    out = ["<html>", "<head>"]
    if doc.title:
        out.append(f"<title>{html_lib.escape(doc.title)}</title>")
    out.append("</head>")
    out.append("<body>")
    for section in doc.sections:
        position = section.start_offset
        if section.heading:
            level = min(max(section.level, 1), 6)
            out.append(f"<h{level}>{emit(section.heading, position)}</h{level}>")
            position += len(section.heading) + 1  # past the heading newline
        if section.body:
            for line in section.body.split("\n"):
                out.append(f"<p>{emit(line, position)}</p>")
                position += len(line) + 1
    out.append("</body>")
    out.append("</html>")
    return "\n".join(out)


def render_highlighted(doc: PolicyDocument, span: tuple[int, int]) -> str:
    """Document HTML with ``span`` of ``full_text`` wrapped in ``<mark>``."""
    start, end = span
    if not (0 <= start < end <= len(doc.full_text)):
        raise SpanOutOfRange(f"span {span} outside document of length {len(doc.full_text)}")
    return document_to_html(doc, highlight=(start, end))
