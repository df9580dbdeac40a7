"""Line-oriented text formats for modules, barcodes, presentations and certificates.

Writers emit canonical text (lowest-terms rationals, sorted intervals, no
blank lines); readers accept blank lines and ``#`` comments and report the
offending line number on failure.
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .barcode import INF, Barcode
from .bridge import GradedPresentation
from .errors import ParseError, ValidationError
from .exact import Matrix, format_rational, is_prime, parse_rational
from .interleave import STRONG, WEAK, InterleavingCertificate, ModuleMap
from .module import KINDS, TameModule

MODULE_HEADER = "pmod v1"
BARCODE_HEADER = "barcode v1"
GRADED_HEADER = "grmod v1"
CERT_HEADER = "cert v1"


class _Lines:
    def __init__(self, text: str, offset: int = 0):
        self.items = []
        for i, raw in enumerate(text.splitlines(), start=1 + offset):
            line = raw.split("#", 1)[0].strip()
            if line:
                self.items.append((i, line))
        self.pos = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else (None, None)

    def next(self, what: str):
        if self.pos >= len(self.items):
            last = self.items[-1][0] if self.items else 1
            raise ParseError(f"unexpected end of input, expected {what}", last)
        item = self.items[self.pos]
        self.pos += 1
        return item

    def keyword(self, key: str) -> tuple[int, list[str]]:
        lineno, line = self.next(f"'{key}'")
        parts = line.split()
        if parts[0] != key:
            raise ParseError(f"expected '{key}', found '{parts[0]}'", lineno)
        return lineno, parts[1:]

    def header(self, header: str) -> None:
        lineno, line = self.next(f"'{header}'")
        if " ".join(line.split()) != header:
            raise ParseError(f"expected header '{header}', found '{line}'", lineno)

    def done(self) -> None:
        lineno, line = self.peek()
        if lineno is not None:
            raise ParseError(f"unexpected trailing content '{line}'", lineno)


def _rational(tok: str, lineno: int) -> Fraction:
    try:
        return parse_rational(tok)
    except ParseError as exc:
        raise ParseError(str(exc), lineno) from None


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"not an integer: {tok!r}", lineno) from None


def _field(parts: list[str], lineno: int) -> int:
    p = _int(_one(parts, lineno, "field modulus"), lineno)
    if not is_prime(p):
        raise ParseError(f"field modulus must be prime, got {p}", lineno)
    return p


def _one(parts: list[str], lineno: int, what: str) -> str:
    if len(parts) != 1:
        raise ParseError(f"expected a single {what}", lineno)
    return parts[0]


def format_matrix(a: Matrix) -> str:
    body = "; ".join(" ".join(str(v) for v in row) for row in a.to_rows()) if a.rows * a.cols else ""
    return f"{a.rows}x{a.cols} [{body}]"


def _parse_matrix(shape: str, body: str, p: int, lineno: int) -> Matrix:
    try:
        rows, cols = (int(v) for v in shape.split("x"))
    except ValueError:
        raise ParseError(f"bad matrix shape {shape!r}", lineno) from None
    body = body.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ParseError("matrix entries must be enclosed in [ ]", lineno)
    inner = body[1:-1].strip()
    if rows * cols == 0:
        if inner.replace(";", "").strip():
            raise ParseError(f"a {rows}x{cols} matrix has no entries", lineno)
        return Matrix(rows, cols, p)
    data = [r.split() for r in inner.split(";")]
    if len(data) != rows or any(len(r) != cols for r in data):
        raise ParseError(f"entries do not form a {rows}x{cols} matrix", lineno)
    values = [[_int(v, lineno) for v in r] for r in data]
    if any(not 0 <= v < p for r in values for v in r):
        raise ParseError(f"matrix entries must lie in [0, {p})", lineno)
    return Matrix(rows, cols, p, values)


def _split_matrix_line(rest: str, lineno: int) -> tuple[str, str]:
    shape, sep, body = rest.partition(" ")
    if not sep:
        raise ParseError("missing matrix entries", lineno)
    return shape, body


# modules

def serialize_module(m: TameModule) -> str:
    lines = [MODULE_HEADER, f"field {m.p}", f"kind {m.kind}",
             " ".join(["grid"] + [format_rational(t) for t in m.grid]),
             " ".join(["dims"] + [str(d) for d in m.dims])]
    lines += [f"map {i} {format_matrix(a)}" for i, a in enumerate(m.maps)]
    return "\n".join(lines) + "\n"


def _read_module(lines: _Lines) -> TameModule:
    lines.header(MODULE_HEADER)
    lineno, parts = lines.keyword("field")
    p = _field(parts, lineno)
    lineno, parts = lines.keyword("kind")
    kind = _one(parts, lineno, "kind")
    if kind not in KINDS:
        raise ParseError(f"kind must be real or nat, got {kind!r}", lineno)
    lineno, parts = lines.keyword("grid")
    grid = [_rational(t, lineno) for t in parts]
    lineno, parts = lines.keyword("dims")
    dims = [_int(t, lineno) for t in parts]
    maps: dict[int, Matrix] = {}
    while True:
        lineno, line = lines.peek()
        if line is None or not line.startswith("map "):
            break
        lines.next("map")
        parts = line.split(" ", 2)
        if len(parts) < 3:
            raise ParseError("malformed map line", lineno)
        i = _int(parts[1], lineno)
        if i in maps:
            raise ParseError(f"duplicate map {i}", lineno)
        maps[i] = _parse_matrix(*_split_matrix_line(parts[2], lineno), p, lineno)
    if sorted(maps) != list(range(len(maps))):
        raise ValidationError("maps must be numbered 0, 1, ... without gaps")
    return TameModule(kind, p, tuple(grid), tuple(dims), tuple(maps[i] for i in range(len(maps))))


def parse_module(text: str) -> TameModule:
    lines = _Lines(text)
    m = _read_module(lines)
    lines.done()
    return m


# barcodes

def serialize_barcode(bc: Barcode) -> str:
    lines = [BARCODE_HEADER, f"kind {bc.kind}"]
    for b, d, mult in bc.intervals:
        death = "inf" if d == INF else format_rational(d)
        lines.append(f"{format_rational(b)} {death} {mult}")
    return "\n".join(lines) + "\n"


def parse_barcode(text: str) -> Barcode:
    lines = _Lines(text)
    lines.header(BARCODE_HEADER)
    lineno, parts = lines.keyword("kind")
    kind = _one(parts, lineno, "kind")
    if kind not in KINDS:
        raise ParseError(f"kind must be real or nat, got {kind!r}", lineno)
    bars = []
    while lines.peek()[0] is not None:
        lineno, line = lines.next("interval")
        parts = line.split()
        if len(parts) != 3:
            raise ParseError("intervals are written '<birth> <death|inf> <multiplicity>'", lineno)
        b = _rational(parts[0], lineno)
        d = INF if parts[1] == "inf" else _rational(parts[1], lineno)
        mult = _int(parts[2], lineno)
        try:
            bars.append(Barcode(kind, ((b, d, mult),)).intervals[0])
        except ValidationError as exc:
            raise ParseError(str(exc), lineno) from None
    return Barcode(kind, tuple(bars))


# graded presentations

def serialize_presentation(pres: GradedPresentation) -> str:
    lines = [GRADED_HEADER, f"field {pres.p}", " ".join(["gens"] + [str(e) for e in pres.generator_degrees])]
    for deg, coeffs in pres.relations:
        lines.append(f"rel {deg} [{' '.join(str(c) for c in coeffs)}]")
    return "\n".join(lines) + "\n"


def parse_presentation(text: str) -> GradedPresentation:
    lines = _Lines(text)
    lines.header(GRADED_HEADER)
    lineno, parts = lines.keyword("field")
    p = _field(parts, lineno)
    lineno, parts = lines.keyword("gens")
    gens = [_int(t, lineno) for t in parts]
    rels = []
    while lines.peek()[0] is not None:
        lineno, parts = lines.keyword("rel")
        if not parts:
            raise ParseError("relation needs a degree", lineno)
        deg = _int(parts[0], lineno)
        body = " ".join(parts[1:])
        if not (body.startswith("[") and body.endswith("]")):
            raise ParseError("relation coefficients must be enclosed in [ ]", lineno)
        coeffs = [_int(c, lineno) for c in body[1:-1].split()]
        if any(not 0 <= c < p for c in coeffs):
            raise ParseError(f"coefficients must lie in [0, {p})", lineno)
        if len(coeffs) != len(gens):
            raise ParseError(f"relation has {len(coeffs)} coefficients for {len(gens)} generators", lineno)
        rels.append((deg, tuple(coeffs)))
    return GradedPresentation(p, tuple(gens), tuple(rels))


# certificates

def _serialize_map(tag: str, f: ModuleMap) -> list[str]:
    lines = [tag, " ".join(["cellgrid"] + [format_rational(s) for s in f.cell_grid])]
    lines += [f"block {k} {format_matrix(b)}" for k, b in enumerate(f.blocks)]
    return lines


def serialize_certificate(c: InterleavingCertificate) -> str:
    kind = "kind strong" if c.kind == STRONG else f"kind weak {format_rational(c.basepoint)}"
    lines = [CERT_HEADER, f"epsilon {format_rational(c.shift)}", kind]
    for tag, m in (("source", c.source), ("target", c.target)):
        lines.append(f"{tag} inline")
        lines += serialize_module(m).splitlines()
        lines.append("end")
    lines += _serialize_map("mapf", c.f)
    lines += _serialize_map("mapg", c.g)
    return "\n".join(lines) + "\n"


def _read_module_ref(lines: _Lines, tag: str, base_dir: Path | None) -> TameModule:
    lineno, parts = lines.keyword(tag)
    ref = _one(parts, lineno, f"{tag} reference")
    if ref == "inline":
        m = _read_module(lines)
        lines.keyword("end")
        return m
    path = Path(ref)
    if not path.is_absolute() and base_dir is not None:
        path = base_dir / path
    try:
        return parse_module(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"cannot read module file {ref}: {exc.strerror}", lineno) from None


def _read_map(lines: _Lines, tag: str, src: TameModule, dst: TameModule, eps: Fraction) -> ModuleMap:
    lines.keyword(tag)
    lineno, parts = lines.keyword("cellgrid")
    grid = [_rational(t, lineno) for t in parts]
    blocks: dict[int, Matrix] = {}
    while lines.peek()[1] is not None and lines.peek()[1].startswith("block "):
        lineno, line = lines.next("block")
        parts = line.split(" ", 2)
        if len(parts) < 3:
            raise ParseError("malformed block line", lineno)
        k = _int(parts[1], lineno)
        if k in blocks:
            raise ParseError(f"duplicate block {k}", lineno)
        blocks[k] = _parse_matrix(*_split_matrix_line(parts[2], lineno), src.p, lineno)
    if sorted(blocks) != list(range(len(blocks))):
        raise ValidationError(f"{tag} blocks must be numbered 0, 1, ... without gaps")
    return ModuleMap(src, dst, eps, tuple(grid), tuple(blocks[k] for k in range(len(blocks))))


def parse_certificate(text: str, base_dir: Path | None = None) -> InterleavingCertificate:
    lines = _Lines(text)
    lines.header(CERT_HEADER)
    lineno, parts = lines.keyword("epsilon")
    eps = _rational(_one(parts, lineno, "epsilon"), lineno)
    lineno, parts = lines.keyword("kind")
    if parts == [STRONG]:
        kind, x0 = STRONG, None
    elif len(parts) == 2 and parts[0] == WEAK:
        kind, x0 = WEAK, _rational(parts[1], lineno)
    else:
        raise ParseError("kind must be 'strong' or 'weak <x0>'", lineno)
    src = _read_module_ref(lines, "source", base_dir)
    dst = _read_module_ref(lines, "target", base_dir)
    f = _read_map(lines, "mapf", src, dst, eps)
    g = _read_map(lines, "mapg", dst, src, eps)
    lines.done()
    return InterleavingCertificate(f, g, kind, x0)


PARSERS = {
    MODULE_HEADER: parse_module,
    BARCODE_HEADER: parse_barcode,
    GRADED_HEADER: parse_presentation,
    CERT_HEADER: parse_certificate,
}


def detect_header(text: str) -> str:
    lines = _Lines(text)
    lineno, line = lines.peek()
    if line is None:
        raise ParseError("empty input", 1)
    header = " ".join(line.split())
    if header not in PARSERS:
        raise ParseError(f"unknown file header '{line}'", lineno)
    return header


def load(path: str | Path):
    """Parse any of the four formats, dispatching on the header line."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    header = detect_header(text)
    if header == CERT_HEADER:
        return parse_certificate(text, path.parent)
    return PARSERS[header](text)


def dump(value) -> str:
    if isinstance(value, TameModule):
        return serialize_module(value)
    if isinstance(value, Barcode):
        return serialize_barcode(value)
    if isinstance(value, GradedPresentation):
        return serialize_presentation(value)
    if isinstance(value, InterleavingCertificate):
        return serialize_certificate(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")

