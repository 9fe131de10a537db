"""Built-in non-linear Lie conformal algebras and the preset file format.

A bracket table entry is written as ``{power: [(coef, word), ...]}`` where
``coef`` is anything :meth:`ScalarFn.coerce` accepts (including the canonical
text form) and ``word`` is a juxtaposition of factors such as ``"LM"``,
``"(DL)M"`` or ``"D^3M"``; the empty string is the vacuum.  Only one of the
two orders of a pair needs to be listed, the other follows by skew-symmetry.

Preset files are JSON documents::

    {
      "name": "virasoro",
      "central": ["c"],
      "generators": [{"name": "L", "weight": 2}],
      "order": ["L"],
      "brackets": [
        {"a": "L", "b": "L", "terms": [
          {"l": 0, "coeff": "1", "word": "DL"},
          {"l": 1, "coeff": "2", "word": "L"},
          {"l": 3, "coeff": "(c)/(12)", "word": ""}]}
      ]
    }
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Callable

from .conformal import NLCA
from .errors import ParseError, UnknownPreset
from .scalars import ScalarFn

__all__ = ["preset", "PRESETS", "load_preset", "dump_preset", "preset_to_dict", "preset_from_dict"]


def _virasoro_like(c: str) -> dict:
    """(D + 2λ)L + (c/12)λ³."""
    return {0: [(1, "DL")], 1: [(2, "L")], 3: [(f"{c}/12", "")]}


def _primary(src: str, weight: int, target: str) -> dict:
    """(D + weight·λ) target."""
    return {0: [(1, f"D{target}")], 1: [(weight, target)]}


def _ww_linear(central: str, field: str) -> dict:
    """(c/360)λ⁵ + (λ³/3 + λ²D/2 + 3λD²/10 + D³/15) field."""
    return {
        0: [("1/15", f"D^3{field}")],
        1: [("3/10", f"D^2{field}")],
        2: [("1/2", f"D{field}")],
        3: [("1/3", field)],
        5: [(f"{central}/360", "")],
    }


def _add(entry: dict, extra: dict) -> dict:
    out = {n: list(ts) for n, ts in entry.items()}
    for n, ts in extra.items():
        out.setdefault(n, []).extend(ts)
    return out


def _d_plus_2l(coef: str, word_terms: list[tuple[str, str]], d_terms: list[tuple[str, str]]) -> dict:
    """coef·(D + 2λ)X where X = Σ word_terms and DX = Σ d_terms (coefficients relative)."""
    return {
        0: [(f"({coef})*({c})", w) for c, w in d_terms],
        1: [(f"2*({coef})*({c})", w) for c, w in word_terms],
    }


def _virasoro() -> NLCA:
    return NLCA("virasoro", [("L", 2)], {("L", "L"): _virasoro_like("c")}, central=["c"])


def _gca() -> NLCA:
    return NLCA(
        "gca",
        [("L", 2), ("M", 2)],
        {("L", "L"): _virasoro_like("cL"), ("L", "M"): _add(_primary("L", 2, "M"), {3: [("cM/12", "")]})},
        central=["cL", "cM"],
    )


def _w3_ww(c: str) -> dict:
    # 16/(5c+22) (D + 2λ)(LL - 3/10 D²L)
    k = f"16/(5*{c}+22)"
    return _add(
        _ww_linear(c, "L"),
        _d_plus_2l(k, [("1", "LL"), ("-3/10", "D^2L")], [("1", "(DL)L"), ("1", "L(DL)"), ("-3/10", "D^3L")]),
    )


def _w3() -> NLCA:
    return NLCA(
        "w3",
        [("L", 2), ("W", 3)],
        {("L", "L"): _virasoro_like("c"), ("L", "W"): _primary("L", 3, "W"), ("W", "W"): _w3_ww("c")},
        central=["c"],
    )


def _gw3_table() -> dict:
    ww = _add(
        _ww_linear("cL", "L"),
        _d_plus_2l(
            "32/(5*cM)",
            [("1", "LM"), ("-3/10", "D^2M")],
            [("1", "(DL)M"), ("1", "L(DM)"), ("-3/10", "D^3M")],
        ),
    )
    ww = _add(ww, _d_plus_2l("-16*(cL + 44/5)/(5*cM^2)", [("1", "MM")], [("1", "(DM)M"), ("1", "M(DM)")]))
    wv = _add(
        _ww_linear("cM", "M"),
        _d_plus_2l("16/(5*cM)", [("1", "MM")], [("1", "(DM)M"), ("1", "M(DM)")]),
    )
    return {
        ("L", "L"): _virasoro_like("cL"),
        ("L", "M"): _add(_primary("L", 2, "M"), {3: [("cM/12", "")]}),
        ("L", "W"): _primary("L", 3, "W"),
        ("L", "V"): _primary("L", 3, "V"),
        ("M", "W"): _primary("M", 3, "V"),
        ("W", "W"): ww,
        ("W", "V"): wv,
    }


_GW3_GENS = [("L", 2), ("W", 3), ("M", 2), ("V", 3)]
_GW3_ORDER = ["L", "W", "M", "V"]  # smallest first: V > M > W > L


def _gw3() -> NLCA:
    return NLCA("gw3", _GW3_GENS, _gw3_table(), central=["cL", "cM"], order=_GW3_ORDER)


def _gw3_cm0() -> NLCA:
    # W stands for the rescaled field W' = c_M W, then c_M -> 0
    mm = ([("1", "MM")], [("1", "(DM)M"), ("1", "M(DM)")])
    table = {
        ("L", "L"): _virasoro_like("cL"),
        ("L", "M"): _primary("L", 2, "M"),
        ("L", "W"): _primary("L", 3, "W"),
        ("L", "V"): _primary("L", 3, "V"),
        ("W", "W"): _d_plus_2l("-16*(cL + 44/5)/5", *mm),
        ("W", "V"): _d_plus_2l("16/5", *mm),
    }
    return NLCA("gw3_cm0", _GW3_GENS, table, central=["cL"], order=_GW3_ORDER)


def _gw3_nogo() -> NLCA:
    table = _gw3_table()
    table[("W", "W")] = _w3_ww("cL")
    return NLCA("gw3_nogo", _GW3_GENS, table, central=["cL", "cM"], order=_GW3_ORDER)


def _heisenberg(name: str, gram: dict[tuple[str, str], int], names: list[str]) -> NLCA:
    table = {}
    for a in names:
        for b in names:
            g = gram.get((a, b), gram.get((b, a), 0))
            if g:
                table[(a, b)] = {1: [(g, "")]}
    return NLCA(name, [(x, 1) for x in names], table)


def _heisenberg4() -> NLCA:
    gram = {("a", "a"): 2, ("b", "b"): 2, ("c", "c"): 2, ("d", "d"): 2, ("a", "b"): -1, ("c", "d"): -1}
    return _heisenberg("heisenberg4", gram, ["a", "b", "c", "d"])


def _heisenberg2() -> NLCA:
    return _heisenberg("heisenberg2", {("c", "d"): 2}, ["c", "d"])


PRESETS: dict[str, Callable[[], NLCA]] = {
    "virasoro": _virasoro,
    "gca": _gca,
    "w3": _w3,
    "gw3": _gw3,
    "gw3_cm0": _gw3_cm0,
    "heisenberg4": _heisenberg4,
    "gw3_nogo": _gw3_nogo,
    "heisenberg2": _heisenberg2,
}

_CACHE: dict[str, NLCA] = {}
_LOCK = threading.Lock()


def preset(name: str) -> NLCA:
    """Shared instance of a built-in algebra (its memo tables are reused)."""
    with _LOCK:
        alg = _CACHE.get(name)
        if alg is None:
            try:
                factory = PRESETS[name]
            except KeyError:
                raise UnknownPreset(f"unknown preset {name!r}; known: {', '.join(PRESETS)}") from None
            alg = _CACHE[name] = factory()
        return alg


# ---------------------------------------------------------------------------
# file format


def preset_to_dict(alg: NLCA) -> dict:
    brackets = []
    for (ra, rb), entry in alg._raw.items():
        a, b = alg.factor_name((ra, 0)), alg.factor_name((rb, 0))
        terms = []
        for n in sorted(entry):
            for coef, word in entry[n]:
                if not isinstance(word, str):
                    word = "".join(f"(D^{k}{g})" if k else g for g, k in word)
                terms.append({"l": n, "coeff": ScalarFn.coerce(coef).to_text(), "word": word})
        brackets.append({"a": a, "b": b, "terms": terms})
    return {
        "name": alg.name,
        "central": list(alg.central),
        "generators": [{"name": g.name, "weight": g.weight} for g in alg.generators],
        "order": [g.name for g in sorted(alg.generators, key=lambda g: g.index)],
        "brackets": brackets,
    }


def preset_from_dict(doc: dict) -> NLCA:
    try:
        gens = [(g["name"], int(g["weight"])) for g in doc["generators"]]
        table: dict = {}
        for br in doc.get("brackets", []):
            entry: dict = {}
            for t in br["terms"]:
                n = int(t["l"])
                if n < 0:
                    raise ParseError("negative λ-power in preset file")
                entry.setdefault(n, []).append((ScalarFn.coerce(str(t["coeff"])), str(t.get("word", ""))))
            table[(br["a"], br["b"])] = entry
        alg = NLCA(doc.get("name", "custom"), gens, table, central=doc.get("central", []), order=doc.get("order"))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed preset document: {exc}") from exc
    # force parsing of every entry now so errors surface at load time
    for a, _ in gens:
        for b, _ in gens:
            alg.table(a, b)
    return alg


def dump_preset(alg: NLCA, path: str | Path) -> None:
    Path(path).write_text(json.dumps(preset_to_dict(alg), indent=2) + "\n")


def load_preset(path: str | Path) -> NLCA:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return preset_from_dict(doc)
