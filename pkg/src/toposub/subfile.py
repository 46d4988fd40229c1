"""Line-oriented text format for topological substitutions.

Sections are introduced by a bare keyword line. Blank lines and '#' comments
are ignored. An image edge is written "f:x-y": the edge of image face f from
its vertex x to its vertex y.

    PROTOTILES      name arity
    IMAGES          name type type ...
    GLUINGS         name f:x-y g:x'-y'      (the two edges are identified, x~x', y~y')
    VERTEX_IMAGES   name v f:c
    EDGE_IMAGES     name v-(v+1) f:x-y f:x-y ...
    BASE            name f                  (optional; the face b(T) of the image)
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .topo import InvalidSubstitution, PreSubstitution

SECTIONS = ("PROTOTILES", "IMAGES", "GLUINGS", "VERTEX_IMAGES", "EDGE_IMAGES", "BASE")


class ParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}")


def _local_edge(tok: str, lineno: int) -> tuple[int, int, int]:
    try:
        f, rest = tok.split(":")
        x, y = rest.split("-")
        return int(f), int(x), int(y)
    except ValueError:
        raise ParseError(lineno, f"bad edge token {tok!r}") from None


def parse(text: str, name: str = "") -> PreSubstitution:
    section = None
    arities: dict[str, int] = {}
    images: dict[str, list[str]] = {}
    gluings: dict[str, list] = {}
    vimg: dict[str, dict[int, tuple[int, int]]] = {}
    eimg: dict[str, dict[int, list]] = {}
    base: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line in SECTIONS:
            section = line
            continue
        toks = line.split()
        if section is None:
            raise ParseError(lineno, "data before the first section")
        t = toks[0]
        if section != "PROTOTILES" and t not in arities:
            raise ParseError(lineno, f"unknown prototile {t!r}")
        try:
            if section == "PROTOTILES":
                if len(toks) != 2 or int(toks[1]) < 3:
                    raise ParseError(lineno, "expected 'name arity' with arity >= 3")
                arities[t] = int(toks[1])
            elif section == "IMAGES":
                if len(toks) < 2:
                    raise ParseError(lineno, "empty image")
                for s in toks[1:]:
                    if s not in arities:
                        raise ParseError(lineno, f"unknown prototile {s!r}")
                images[t] = toks[1:]
            elif section == "GLUINGS":
                if len(toks) != 3:
                    raise ParseError(lineno, "expected two edges")
                gluings.setdefault(t, []).append((_local_edge(toks[1], lineno),
                                                  _local_edge(toks[2], lineno)))
            elif section == "VERTEX_IMAGES":
                f, c = toks[2].split(":")
                vimg.setdefault(t, {})[int(toks[1])] = (int(f), int(c))
            elif section == "EDGE_IMAGES":
                a, b = (int(x) for x in toks[1].split("-"))
                if b != (a + 1) % arities[t]:
                    raise ParseError(lineno, f"edge {toks[1]} is not v-(v+1)")
                eimg.setdefault(t, {})[a] = [_local_edge(x, lineno) for x in toks[2:]]
            elif section == "BASE":
                base[t] = int(toks[1])
        except (ValueError, IndexError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(lineno, f"malformed line {line!r}") from None
    for t, k in arities.items():
        if t not in images:
            raise ParseError(0, f"no image for {t}")
        if sorted(vimg.get(t, {})) != list(range(k)):
            raise ParseError(0, f"vertex images of {t} incomplete")
        if sorted(eimg.get(t, {})) != list(range(k)):
            raise ParseError(0, f"edge images of {t} incomplete")
    presub = PreSubstitution(
        arities, images, gluings,
        {t: [vimg[t][v] for v in range(k)] for t, k in arities.items()},
        {t: [eimg[t][v] for v in range(k)] for t, k in arities.items()},
        base, name)
    problems = presub.validate()
    if problems:
        raise InvalidSubstitution("; ".join(problems))
    return presub


def dump(presub: PreSubstitution) -> str:
    def le(e):
        return f"{e[0]}:{e[1]}-{e[2]}"

    out = ["PROTOTILES"]
    out += [f"{t} {k}" for t, k in presub.arities.items()]
    out += ["", "IMAGES"]
    out += [f"{t} " + " ".join(presub.images[t]) for t in presub.types]
    out += ["", "GLUINGS"]
    out += [f"{t} {le(a)} {le(b)}" for t in presub.types for a, b in presub.gluings.get(t, [])]
    out += ["", "VERTEX_IMAGES"]
    out += [f"{t} {v} {f}:{c}" for t in presub.types
            for v, (f, c) in enumerate(presub.vertex_images[t])]
    out += ["", "EDGE_IMAGES"]
    for t in presub.types:
        k = presub.arities[t]
        for v, path in enumerate(presub.edge_images[t]):
            out.append(f"{t} {v}-{(v + 1) % k} " + " ".join(le(e) for e in path))
    if presub.base:
        out += ["", "BASE"]
        out += [f"{t} {f}" for t, f in presub.base.items()]
    return "\n".join(out) + "\n"


def load(path: str | Path) -> PreSubstitution:
    path = Path(path)
    return parse(path.read_text(), path.stem)


def builtin_text(name: str) -> str:
    return resources.files("toposub.data").joinpath(f"{name}.sub").read_text()


def builtin(name: str) -> PreSubstitution:
    """The bundled datasets: 'tribonacci' or 'tau'."""
    return parse(builtin_text(name), name)
