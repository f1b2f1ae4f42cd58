"""Instance files and the catalog of generated instances.

File format (JSON, UTF-8)::

    {
      "id": "optional name",
      "algebras": {"A": {"dim": 1, "mult": [[0, 0, 0, "1"]], "unit": ["1"]}, "B": ..., "C": ...},
      "modules": {
        "M": {"left": "A", "right": "B", "dim": 1,
              "left_action": [[i, j, k, "q"], ...], "right_action": [...]},
        "N": {"left": "B", "right": "C", ...},
        "P": {"left": "A", "right": "C", ...}
      },
      "pairing": {"entries": [[i, j, k, "q"], ...]}
    }

Tensors are sparse lists of ``[i, j, k, q]`` with 0-based indices; missing
entries are zero, a missing ``pairing`` means the zero pairing, and rationals
are strings ``"p/q"`` or ``"p"`` (plain JSON integers are also accepted).
"""

from __future__ import annotations

import json
import random
import re
from importlib import resources
from pathlib import Path
from typing import Any, Callable

from .algebra import (
    Bimodule,
    Pairing,
    StructureAlgebra,
    algebra_from_matrices,
    dense_tensor,
    diagonal_matrix_basis,
    full_matrix_basis,
    matrix_pairing,
    matrix_unit,
    rectangular_bimodule,
    scalar_algebra,
    scalar_module,
    upper_triangular_basis,
)
from .errors import ParseError, ValidationError
from .linalg import as_rational, format_rational
from .triangular import TriSystem, validate_system

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


# ---------------------------------------------------------------------------
# parsing


def _rational(value: Any, where: str):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ParseError(f"expected a rational string, got {value!r}", where)
    if isinstance(value, str):
        if not _RATIONAL.match(value.strip()):
            raise ParseError(f"malformed rational {value!r}", where)
        if "/" in value and int(value.split("/")[1]) == 0:
            raise ParseError(f"zero denominator in {value!r}", where)
    return as_rational(value.strip() if isinstance(value, str) else value)


def _require(obj: dict, key: str, where: str) -> Any:
    if not isinstance(obj, dict):
        raise ParseError("expected an object", where)
    if key not in obj:
        raise ParseError(f"missing key {key!r}", where)
    return obj[key]


def _dim(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ParseError(f"dimension must be a non-negative integer, got {value!r}", where)
    return value


def _tensor(entries: Any, shape: tuple[int, int, int], where: str):
    if not isinstance(entries, list):
        raise ParseError("tensor must be a list of [i, j, k, q] entries", where)
    parsed = []
    for pos, entry in enumerate(entries):
        loc = f"{where}[{pos}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise ParseError("entry must be [i, j, k, q]", loc)
        *idx, q = entry
        for axis, (i, n) in enumerate(zip(idx, shape)):
            if isinstance(i, bool) or not isinstance(i, int) or not 0 <= i < n:
                raise ParseError(f"index {i!r} out of range for axis {axis} of size {n}", loc)
        parsed.append((*idx, _rational(q, loc)))
    return dense_tensor(shape, parsed)


def _parse_algebra(raw: Any, where: str) -> StructureAlgebra:
    d = _dim(_require(raw, "dim", where), f"{where}.dim")
    mult = _tensor(raw.get("mult", []), (d, d, d), f"{where}.mult")
    unit = raw.get("unit")
    if unit is not None:
        if not isinstance(unit, list) or len(unit) != d:
            raise ParseError(f"unit must be a list of {d} rationals", f"{where}.unit")
        unit = tuple(_rational(q, f"{where}.unit[{i}]") for i, q in enumerate(unit))
    return StructureAlgebra(d, mult, unit)


def system_from_dict(data: Any, name: str = "") -> TriSystem:
    """Build (without validating) the system described by a parsed JSON document.

    Raises:
        ParseError: if the document does not follow the instance format.
    """
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", "$")
    raw_algs = _require(data, "algebras", "$")
    algebras = {k: _parse_algebra(_require(raw_algs, k, "algebras"), f"algebras.{k}") for k in "ABC"}
    raw_mods = _require(data, "modules", "$")
    modules = {}
    for key in "MNP":
        where = f"modules.{key}"
        raw = _require(raw_mods, key, "modules")
        left, right = _require(raw, "left", where), _require(raw, "right", where)
        if left not in algebras or right not in algebras:
            raise ParseError(f"acting algebras must be among A, B, C (got {left!r}, {right!r})", where)
        d = _dim(_require(raw, "dim", where), f"{where}.dim")
        la, ra = algebras[left], algebras[right]
        modules[key] = Bimodule(
            d, la, ra,
            _tensor(raw.get("left_action", []), (la.dim, d, d), f"{where}.left_action"),
            _tensor(raw.get("right_action", []), (d, ra.dim, d), f"{where}.right_action"),
        )
    M, N, P = modules["M"], modules["N"], modules["P"]
    pairing = data.get("pairing")
    if pairing is None:
        mu = Pairing.zero(M, N, P)
    else:
        mu = Pairing(M, N, P, _tensor(_require(pairing, "entries", "pairing"), (M.dim, N.dim, P.dim), "pairing.entries"))
    name = data.get("id", name)
    if not isinstance(name, str):
        raise ParseError("id must be a string", "id")
    return TriSystem(algebras["A"], algebras["B"], algebras["C"], M, N, P, mu, name=name)


def loads_instance(text: str, name: str = "") -> TriSystem:
    """Parse and validate an instance document.

    Raises:
        ParseError: malformed JSON (with line and column) or schema errors.
        ValidationError: the data parses but breaks an algebra axiom.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from exc
    sys = system_from_dict(data, name)
    violations = validate_system(sys)
    if violations:
        raise ValidationError(violations)
    return sys


def parse_instance(path: str | Path) -> TriSystem:
    """Read, parse and validate an instance file. ``OSError`` propagates unchanged."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return loads_instance(text, name=path.stem)


# ---------------------------------------------------------------------------
# serialisation


def _sparse(tensor) -> list[list]:
    return [
        [i, j, k, format_rational(x)]
        for i, plane in enumerate(tensor)
        for j, row in enumerate(plane)
        for k, x in enumerate(row)
        if x
    ]


def system_to_dict(sys: TriSystem) -> dict:
    algebras = {}
    for key in "ABC":
        alg = sys.component(key)
        raw: dict = {"dim": alg.dim, "mult": _sparse(alg.mult)}
        if alg.unit is not None:
            raw["unit"] = [format_rational(x) for x in alg.unit]
        algebras[key] = raw
    refs = {"M": ("A", "B"), "N": ("B", "C"), "P": ("A", "C")}
    modules = {}
    for key, (left, right) in refs.items():
        mod = sys.component(key)
        modules[key] = {
            "left": left,
            "right": right,
            "dim": mod.dim,
            "left_action": _sparse(mod.left_action),
            "right_action": _sparse(mod.right_action),
        }
    out: dict = {}
    if sys.name:
        out["id"] = sys.name
    out["algebras"] = algebras
    out["modules"] = modules
    if not sys.mu.is_zero:
        out["pairing"] = {"entries": _sparse(sys.mu.tensor)}
    return out


def _dumps(obj: Any, level: int = 0) -> str:
    # lists of scalars stay on one line so tensor entries read as rows
    pad = "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        body = ",\n".join(f"{pad}{json.dumps(k)}: {_dumps(v, level + 1)}" for k, v in obj.items())
        return "{\n" + body + "\n" + "  " * level + "}"
    if isinstance(obj, list) and any(isinstance(x, (list, dict)) for x in obj):
        body = ",\n".join(pad + _dumps(v, level + 1) for v in obj)
        return "[\n" + body + "\n" + "  " * level + "]"
    return json.dumps(obj)


def dumps_instance(sys: TriSystem) -> str:
    return _dumps(system_to_dict(sys)) + "\n"


def write_instance(sys: TriSystem, path: str | Path) -> None:
    Path(path).write_text(dumps_instance(sys), encoding="utf-8")


# ---------------------------------------------------------------------------
# bundled fixtures

FIXTURES = ("t3_full.json", "t3_mu_zero.json", "example1_d2.json")


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture, e.g. ``fixture_path("t3_full.json")``."""
    if not name.endswith(".json"):
        name += ".json"
    ref = resources.files("tri3") / "data" / name
    if not ref.is_file():
        raise FileNotFoundError(f"no bundled fixture named {name}")
    return Path(str(ref))


def load_fixture(name: str) -> TriSystem:
    return parse_instance(fixture_path(name))


# ---------------------------------------------------------------------------
# closed-form constructions


def scalar_tower(dm: int, dp: int, dn: int, pairing_entries=(), name: str = "") -> TriSystem:
    """``A = B = C = Q`` acting by scalars on ``M = Q^dm``, ``P = Q^dp``, ``N = Q^dn``.

    Any bilinear ``mu`` is admissible here because every action is scalar.
    """
    Q = scalar_algebra()
    M, N, P = scalar_module(Q, Q, dm), scalar_module(Q, Q, dn), scalar_module(Q, Q, dp)
    mu = Pairing(M, N, P, dense_tensor((dm, dn, dp), pairing_entries))
    return TriSystem(Q, Q, Q, M, N, P, mu, name=name)


_MATRIX_BASES: dict[str, Callable[[], list]] = {
    "Q": lambda: [matrix_unit(1, 1, 0, 0)],
    "Q2": lambda: diagonal_matrix_basis(2),
    "M2": lambda: full_matrix_basis(2),
    "M3": lambda: full_matrix_basis(3),
    "T2": lambda: upper_triangular_basis(2),
}


def block_matrix_system(kinds: tuple[str, str, str], product: bool = True, name: str = "") -> TriSystem:
    """Corners realised as matrix algebras, modules as all rectangular matrices.

    ``kinds`` names each corner: ``Q``, ``Q2`` (diagonal 2x2), ``M2``, ``M3``
    or ``T2`` (upper triangular 2x2). With ``product`` the pairing is matrix
    multiplication, otherwise zero.
    """
    mats = []
    algs = []
    for kind in kinds:
        if kind not in _MATRIX_BASES:
            raise ValueError(f"unknown corner algebra {kind!r}")
        basis = _MATRIX_BASES[kind]()
        mats.append(basis)
        algs.append(algebra_from_matrices(basis))
    (A, B, C), (am, bm, cm) = algs, mats
    M = rectangular_bimodule(A, am, B, bm)
    N = rectangular_bimodule(B, bm, C, cm)
    P = rectangular_bimodule(A, am, C, cm)
    if product:
        mu = matrix_pairing(M, N, P, am[0].rows, bm[0].rows, cm[0].rows)
    else:
        mu = Pairing.zero(M, N, P)
    return TriSystem(A, B, C, M, N, P, mu, name=name)


def matrix_corner(k: int, scalar_pairing: bool = True, name: str = "") -> TriSystem:
    """``A = M_k(Q)``, ``B = C = Q``, ``M = P = Q^k`` (columns), ``N = Q``."""
    basis = full_matrix_basis(k)
    A = algebra_from_matrices(basis)
    one = [matrix_unit(1, 1, 0, 0)]
    B = algebra_from_matrices(one)
    C = algebra_from_matrices(one)
    M = rectangular_bimodule(A, basis, B, one)
    N = rectangular_bimodule(B, one, C, one)
    P = rectangular_bimodule(A, basis, C, one)
    mu = matrix_pairing(M, N, P, k, 1, 1) if scalar_pairing else Pairing.zero(M, N, P)
    return TriSystem(A, B, C, M, N, P, mu, name=name)


# ---------------------------------------------------------------------------
# seeded catalog


def _nonzero_ints(rng: random.Random, n: int) -> list[int]:
    while True:
        v = [rng.randint(-3, 3) for _ in range(n)]
        if any(v):
            return v


def _scalar_towers(rng: random.Random, dim: int | None = None, mu: str | None = None) -> TriSystem:
    dm, dp, dn = (dim if dim is not None else rng.randint(1, 3) for _ in range(3))
    mode = mu or rng.choice(("zero", "rank1"))
    if mode not in ("zero", "rank1"):
        raise ValueError(f"scalar-towers pairing must be 'zero' or 'rank1', not {mode!r}")
    entries = []
    if mode == "rank1":
        u, v, w = _nonzero_ints(rng, dm), _nonzero_ints(rng, dn), _nonzero_ints(rng, dp)
        entries = [(i, j, k, u[i] * v[j] * w[k]) for i in range(dm) for j in range(dn) for k in range(dp)]
    return scalar_tower(dm, dp, dn, entries)


def _matrix_corner(rng: random.Random, k: int | None = None, mu: str | None = None) -> TriSystem:
    k = k if k is not None else rng.randint(1, 3)
    mode = mu or "scalar"
    if mode not in ("zero", "scalar"):
        raise ValueError(f"matrix-corner pairing must be 'zero' or 'scalar', not {mode!r}")
    return matrix_corner(k, mode == "scalar")


def _upper_tri_blocks(rng: random.Random, kinds: tuple[str, str, str] | None = None, mu: str | None = None) -> TriSystem:
    kinds = tuple(kinds) if kinds else tuple(rng.choice(("Q", "Q2", "M2")) for _ in range(3))
    mode = mu or "product"
    if mode not in ("zero", "product"):
        raise ValueError(f"upper-tri-blocks pairing must be 'zero' or 'product', not {mode!r}")
    return block_matrix_system(kinds, mode == "product")


PRESETS: dict[str, Callable[..., TriSystem]] = {
    "scalar-towers": _scalar_towers,
    "matrix-corner": _matrix_corner,
    "upper-tri-blocks": _upper_tri_blocks,
}


def generate_instance(seed: int, preset: str, **params) -> TriSystem:
    """Deterministic catalog instance for ``(seed, preset, params)``.

    Params by preset: ``scalar-towers`` takes ``dim`` and ``mu`` (``zero`` or
    ``rank1``); ``matrix-corner`` takes ``k`` and ``mu`` (``scalar`` or
    ``zero``); ``upper-tri-blocks`` takes ``kinds`` (three corner names) and
    ``mu`` (``product`` or ``zero``). Unset params are drawn from the seed.

    Raises:
        KeyError: for an unknown preset.
        ValidationError: never for catalog presets; raised if a construction
            somehow produces an invalid system.
    """
    if preset not in PRESETS:
        raise KeyError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
    rng = random.Random(f"{preset}:{seed}")
    params = {k: v for k, v in params.items() if v is not None}
    sys = PRESETS[preset](rng, **params)
    tag = "".join(
        f"-{k}={'+'.join(v) if isinstance(v, (tuple, list)) else v}" for k, v in sorted(params.items())
    )
    sys = TriSystem(sys.A, sys.B, sys.C, sys.M, sys.N, sys.P, sys.mu, name=f"{preset}-s{seed}{tag}")
    violations = validate_system(sys)
    if violations:
        raise ValidationError(violations)
    return sys


def catalog(count_per_preset: int = 20, start_seed: int = 0) -> list[TriSystem]:
    """Seeded instances from every preset, in a fixed order."""
    out = []
    for preset in PRESETS:
        for seed in range(start_seed, start_seed + count_per_preset):
            out.append(generate_instance(seed, preset))
    return out
