"""Material and scenario files.

Both are INI files read with :mod:`configparser`. Frequencies are stored in
eV; any frequency key may instead be given in rad/s (``omega_rad_s`` for
``omega_eV``) and is converted with hbar on load. Loss tables are CSV with a
``omega_eV,eps2`` header and ``#`` comment lines. Material references in a
scenario resolve against the scenario's directory first, then against the
materials bundled in ``composite_casimir/data``.
"""

from __future__ import annotations

import configparser
import csv
import dataclasses
import hashlib
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .dielectric import DielectricModel, Drude, Oscillators, SpectrumTable, Tabulated, Vacuum
from .lifshitz import IDEAL, Slab, SlabSystem
from .mixing import RULE_NAMES, CompositeSpec, InclusionShape, MixingRule, SpectralFunction

__all__ = [
    "DATA_DIR",
    "ConfigError",
    "Sweep",
    "Scenario",
    "load_spectrum_csv",
    "load_material",
    "dump_material",
    "load_scenario",
    "dump_scenario",
    "resolve_material",
]

DATA_DIR = Path(__file__).resolve().parent / "data"
HBAR_EV_S = 6.582119569e-16
SWEEP_AXES = ("f", "L")


class ConfigError(ValueError):
    """Invalid material or scenario file; the message names file and field."""

    def __init__(self, path, where: str, problem: str):
        super().__init__(f"{path}: {where}: {problem}")
        self.path = str(path)
        self.where = where
        self.problem = problem


def _read_ini(path: Path) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keep key case (C, omega_eV)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(path, "file", f"cannot read: {exc.strerror}") from exc
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        where = f"line {line}" if line else "file"
        raise ConfigError(path, where, f"parse error: {exc.message}") from exc
    return parser


def _get(parser, path, section: str, key: str, conv=str, default=dataclasses.MISSING):
    if not parser.has_option(section, key):
        if default is not dataclasses.MISSING:
            return default
        raise ConfigError(path, f"[{section}] {key}", "missing required field")
    raw = parser.get(section, key)
    try:
        return conv(raw)
    except ValueError as exc:
        raise ConfigError(path, f"[{section}] {key}", f"bad value {raw!r}: {exc}") from exc


def _frequency(parser, path, section: str, stem: str) -> float:
    """Read ``<stem>_eV``, or ``<stem>_rad_s`` converted to eV with hbar."""
    ev, rad = f"{stem}_eV", f"{stem}_rad_s"
    if parser.has_option(section, ev) and parser.has_option(section, rad):
        raise ConfigError(path, f"[{section}] {stem}", f"give either {ev} or {rad}, not both")
    if parser.has_option(section, rad):
        return _get(parser, path, section, rad, float) * HBAR_EV_S
    return _get(parser, path, section, ev, float)


def _floats(raw: str) -> tuple[float, ...]:
    return tuple(float(v) for v in raw.replace(";", ",").split(",") if v.strip())


def load_spectrum_csv(path) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Read an ``omega_eV,eps2`` table; errors carry the offending line number."""
    path = Path(path)
    omega, eps2 = [], []
    header_seen = False
    with path.open(newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if not header_seen:
                if [c.strip() for c in row] != ["omega_eV", "eps2"]:
                    raise ConfigError(path, f"line {lineno}", f"expected header 'omega_eV,eps2', got {row}")
                header_seen = True
                continue
            if len(row) != 2:
                raise ConfigError(path, f"line {lineno}", f"expected 2 columns, got {len(row)}")
            try:
                w, e = float(row[0]), float(row[1])
            except ValueError as exc:
                raise ConfigError(path, f"line {lineno}", f"not a number: {exc}") from exc
            if omega and w <= omega[-1]:
                raise ConfigError(path, f"line {lineno}", f"omega must be strictly increasing (monotonicity): {w} after {omega[-1]}")
            if e < 0.0:
                raise ConfigError(path, f"line {lineno}", f"eps2 must be >= 0 (passivity): {e}")
            omega.append(w)
            eps2.append(e)
    if not header_seen:
        raise ConfigError(path, "file", "missing 'omega_eV,eps2' header")
    return tuple(omega), tuple(eps2)


def load_material(path) -> DielectricModel:
    """Build an immutable dielectric model from a material file."""
    path = Path(path)
    ini = _read_ini(path)
    if not ini.has_section("material"):
        raise ConfigError(path, "[material]", "missing section")
    name = _get(ini, path, "material", "name")
    kind = _get(ini, path, "material", "kind")
    provenance = _get(ini, path, "material", "provenance", default="")

    def invalid(where, exc):
        return ConfigError(path, where, str(exc))

    if kind == "vacuum":
        return Vacuum(name=name, provenance=provenance)
    if kind == "drude":
        if not ini.has_section("drude"):
            raise ConfigError(path, "[drude]", "missing section")
        try:
            return Drude(
                _frequency(ini, path, "drude", "omega_p"),
                _frequency(ini, path, "drude", "gamma"),
                name=name,
                provenance=provenance,
            )
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise invalid("[drude]", exc) from exc
    if kind == "oscillators":
        sections = sorted(
            (s for s in ini.sections() if s.startswith("oscillator.")),
            key=lambda s: int(s.split(".", 1)[1]) if s.split(".", 1)[1].isdigit() else s,
        )
        terms = tuple(
            (_get(ini, path, s, "C", float), _frequency(ini, path, s, "omega")) for s in sections
        )
        if not terms:
            raise ConfigError(path, "[oscillator.k]", "oscillator model needs at least one oscillator section")
        try:
            return Oscillators(terms, name=name, provenance=provenance)
        except ValueError as exc:
            raise invalid("[oscillator.k]", exc) from exc
    if kind == "tabulated":
        if not ini.has_section("tabulated"):
            raise ConfigError(path, "[tabulated]", "missing section")
        data_path = path.parent / _get(ini, path, "tabulated", "path")
        tail = _get(ini, path, "tabulated", "tail_exponent", float, default=3.0)
        if not data_path.is_file():
            raise ConfigError(path, "[tabulated] path", f"data file {data_path} not found")
        omega, eps2 = load_spectrum_csv(data_path)
        extrapolation = None
        if ini.has_section("extrapolation"):
            extrapolation = Drude(
                _frequency(ini, path, "extrapolation", "omega_p"),
                _frequency(ini, path, "extrapolation", "gamma"),
                name=f"{name}-extrapolation",
            )
        else:
            warnings.warn(
                f"{path}: no [extrapolation] block; KK rotation will fail at low zeta",
                stacklevel=2,
            )
        try:
            table = SpectrumTable(omega, eps2, extrapolation, tail)
        except ValueError as exc:
            raise invalid(f"table {data_path}", exc) from exc
        return Tabulated(table, name=name, provenance=provenance)
    raise ConfigError(path, "[material] kind", f"unknown kind {kind!r}")


def dump_material(model: DielectricModel, path) -> None:
    """Write ``model`` as a material file; tabulated data goes to ``<stem>.csv`` alongside."""
    path = Path(path)
    ini = configparser.ConfigParser(interpolation=None)
    ini.optionxform = str
    ini["material"] = {"name": model.name}
    if model.provenance:
        ini["material"]["provenance"] = model.provenance
    if isinstance(model, Vacuum):
        ini["material"]["kind"] = "vacuum"
    elif isinstance(model, Drude):
        ini["material"]["kind"] = "drude"
        ini["drude"] = {"omega_p_eV": repr(model.omega_p), "gamma_eV": repr(model.gamma)}
    elif isinstance(model, Oscillators):
        ini["material"]["kind"] = "oscillators"
        for k, (c, w) in enumerate(model.terms, start=1):
            ini[f"oscillator.{k}"] = {"C": repr(c), "omega_eV": repr(w)}
    elif isinstance(model, Tabulated):
        table = model.table
        csv_path = path.with_suffix(".csv")
        rows = "".join(f"{w!r},{e!r}\n" for w, e in zip(table.omega, table.eps2))
        csv_path.write_text("omega_eV,eps2\n" + rows)
        ini["material"]["kind"] = "tabulated"
        ini["tabulated"] = {"path": csv_path.name, "tail_exponent": repr(table.tail_exponent)}
        if table.extrapolation is not None:
            ini["extrapolation"] = {
                "omega_p_eV": repr(table.extrapolation.omega_p),
                "gamma_eV": repr(table.extrapolation.gamma),
            }
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    with path.open("w") as fh:
        ini.write(fh)


def resolve_material(ref: str, base_dir: Path) -> Path:
    candidates = [base_dir / ref, base_dir / f"{ref}.ini", DATA_DIR / ref, DATA_DIR / f"{ref}.ini"]
    for cand in candidates:
        if cand.is_file():
            return cand
    raise FileNotFoundError(ref)


@dataclass(frozen=True)
class Sweep:
    axis: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class Scenario:
    """A resolved scenario: two slabs, a gap, a sweep axis and the rules to run.

    ``slab1``/``slab2`` carry the base filling fraction and rule; sweeps and
    rule lists are applied by :meth:`systems`. ``separation_nm`` is the fixed
    separation for filling-fraction sweeps, ``zetas_eV`` the frequencies for
    permittivity sweeps.
    """

    name: str
    slab1: Slab
    slab2: Slab
    gap: DielectricModel
    sweep: Sweep
    rules: tuple[str, ...]
    separation_nm: float | None = None
    zetas_eV: tuple[float, ...] = ()
    source: str = field(default="", compare=False)
    digest: str = field(default="", compare=False)
    text: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def systems(self) -> list[SlabSystem]:
        """One system per sweep point, using the slabs' own rules."""
        return self.systems_for(None)

    def _slab_at(self, slab: Slab, rule: str | None, f: float | None) -> Slab:
        composite = slab.composite
        if f is not None and composite is not None:
            composite = dataclasses.replace(composite, f=f)
        if rule is None:
            return Slab(composite, slab.rule)
        if rule == IDEAL:
            return Slab(composite, IDEAL)
        base = slab.rule if isinstance(slab.rule, MixingRule) else None
        spectral = base.spectral if base is not None else None
        orientation = base.orientation if base is not None else "average"
        if rule == "spectral" and spectral is None:
            spectral = self.text.get("spectral_default")
        return Slab(composite, MixingRule(rule, spectral=spectral, orientation=orientation))

    def systems_for(self, rule: str | None) -> list[SlabSystem]:
        out = []
        for value in self.sweep.values:
            f = value if self.sweep.axis == "f" else None
            L = value if self.sweep.axis == "L" else self.separation_nm
            if L is None:
                raise ValueError("scenario has no separation for a filling-fraction sweep")
            out.append(SlabSystem(self._slab_at(self.slab1, rule, f), self._slab_at(self.slab2, rule, f), L, self.gap))
        return out

    def composites_for(self, f: float) -> CompositeSpec:
        return dataclasses.replace(self.slab1.composite, f=f)

    @property
    def provenance(self) -> list[str]:
        models = [self.gap]
        for slab in (self.slab1, self.slab2):
            if slab.composite is not None:
                models += [slab.composite.host, slab.composite.inclusion]
        seen, notes = set(), []
        for m in models:
            if m.name not in seen:
                seen.add(m.name)
                notes.append(f"{m.name}: {m.provenance or 'n/a'}")
        return notes


def _parse_shape(raw: str) -> InclusionShape:
    kind, _, arg = raw.partition(":")
    kind = kind.strip()
    if kind == "sphere":
        return InclusionShape.sphere()
    if kind == "prolate":
        return InclusionShape.prolate(float(arg))
    if kind == "explicit":
        L = _floats(arg)
        if len(L) != 3:
            raise ValueError("explicit shape needs three depolarization factors")
        return InclusionShape.explicit(*L)
    raise ValueError(f"unknown shape {kind!r}")


def _format_shape(shape: InclusionShape) -> str:
    if shape.kind == "sphere":
        return "sphere"
    if shape.kind == "prolate":
        return f"prolate:{shape.eccentricity!r}"
    return "explicit:" + ",".join(repr(v) for v in shape.factors)


def _parse_spectral(ini, path) -> SpectralFunction | str | None:
    if not ini.has_section("spectral"):
        return None
    sec = "spectral"
    if _get(ini, path, sec, "model", default="") == "maxwell-garnett":
        return "maxwell-garnett"
    try:
        poles = []
        for item in _get(ini, path, sec, "poles", default="").split(","):
            if item.strip():
                pos, weight = item.split(":")
                poles.append((float(pos), float(weight)))
        grid = _get(ini, path, sec, "grid", _floats, default=())
        density = _get(ini, path, sec, "density", _floats, default=())
        return SpectralFunction(tuple(poles), grid, density)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(path, "[spectral]", str(exc)) from exc


def _grid(ini, path, sec: str) -> tuple[float, ...]:
    if ini.has_option(sec, "values"):
        return _get(ini, path, sec, "values", _floats)
    lo = _get(ini, path, sec, "from", float)
    hi = _get(ini, path, sec, "to", float)
    step = _get(ini, path, sec, "step", float)
    if not step > 0.0 or hi < lo:
        raise ConfigError(path, f"[{sec}] from/to/step", "need step > 0 and to >= from")
    n = int(round((hi - lo) / step)) + 1
    return tuple(round(lo + i * step, 12) for i in range(n))


def load_scenario(path) -> Scenario:
    """Load and fully resolve a scenario file.

    ``Scenario.systems`` lists one :class:`SlabSystem` per sweep point.
    """
    path = Path(path)
    ini = _read_ini(path)
    base = path.parent
    digest = hashlib.sha256(path.read_bytes())
    refs: dict[str, str] = {}
    cache: dict[Path, DielectricModel] = {}

    def material(section: str, key: str, default=dataclasses.MISSING):
        ref = _get(ini, path, section, key, default=default)
        if ref is None:
            return None
        try:
            mpath = resolve_material(ref, base)
        except FileNotFoundError:
            raise ConfigError(path, f"[{section}] {key}", f"unresolved material reference {ref!r}") from None
        refs[f"{section}.{key}"] = ref
        if mpath not in cache:
            digest.update(mpath.read_bytes())
            cache[mpath] = load_material(mpath)
        return cache[mpath]

    spectral = _parse_spectral(ini, path)

    def rule_for(name: str, where: str, orientation: str = "average") -> MixingRule | str:
        if name == IDEAL:
            return IDEAL
        if name not in RULE_NAMES:
            raise ConfigError(path, where, f"unknown rule {name!r}; expected one of {RULE_NAMES + (IDEAL,)}")
        if name == "spectral" and spectral is None:
            raise ConfigError(path, where, "rule 'spectral' needs a [spectral] section")
        try:
            return MixingRule(name, spectral=spectral if name == "spectral" else None, orientation=orientation)
        except ValueError as exc:
            raise ConfigError(path, where, str(exc)) from exc

    slabs = []
    for sec in ("slab1", "slab2"):
        if not ini.has_section(sec):
            if sec == "slab1":
                raise ConfigError(path, "[slab1]", "missing section")
            slabs.append(slabs[0])
            continue
        rule_name = _get(ini, path, sec, "rule", default="bruggeman")
        orientation = _get(ini, path, sec, "orientation", default="average")
        rule = rule_for(rule_name, f"[{sec}] rule", orientation)
        host = material(sec, "host", default=None if rule == IDEAL else dataclasses.MISSING)
        composite = None
        if host is not None:
            inclusion = material(sec, "inclusion")
            f = _get(ini, path, sec, "f", float, default=0.0)
            if not 0.0 <= f <= 1.0:
                raise ConfigError(path, f"[{sec}] f", f"filling fraction {f} outside [0, 1]")
            shape = _get(ini, path, sec, "shape", _parse_shape, default=InclusionShape())
            radius = _get(ini, path, sec, "a_nm", float, default=20.0)
            if not radius > 0.0:
                raise ConfigError(path, f"[{sec}] a_nm", f"inclusion radius must be positive, got {radius}")
            composite = CompositeSpec(host, inclusion, f, shape, radius)
        slabs.append(Slab(composite, rule))

    gap = material("gap", "material", default="vacuum") if ini.has_section("gap") else Vacuum()

    if not ini.has_section("sweep"):
        raise ConfigError(path, "[sweep]", "missing section")
    axis = _get(ini, path, "sweep", "axis")
    if axis not in SWEEP_AXES:
        raise ConfigError(path, "[sweep] axis", f"axis must be one of {SWEEP_AXES}, got {axis!r}")
    values = _grid(ini, path, "sweep")
    if not values:
        raise ConfigError(path, "[sweep]", "empty sweep")
    if axis == "f" and any(not 0.0 <= v <= 1.0 for v in values):
        raise ConfigError(path, "[sweep] values", "filling fractions must lie in [0, 1]")
    if axis == "L" and any(v <= 0.0 for v in values):
        raise ConfigError(path, "[sweep] values", "separations must be positive")
    separation = _get(ini, path, "sweep", "L_nm", float, default=None)
    if separation is not None and separation <= 0.0:
        raise ConfigError(path, "[sweep] L_nm", f"separation must be positive, got {separation}")
    zetas = _get(ini, path, "sweep", "zeta_eV", _floats, default=())
    if any(z <= 0.0 for z in zetas):
        raise ConfigError(path, "[sweep] zeta_eV", "imaginary frequencies must be positive")
    default_rules = slabs[0].rule_name
    rules = tuple(r.strip() for r in _get(ini, path, "sweep", "rules", default=default_rules).split(",") if r.strip())
    for r in rules:
        rule_for(r, "[sweep] rules")

    text = {"refs": refs, "raw": {s: dict(ini[s]) for s in ini.sections()}, "spectral_default": spectral}
    return Scenario(
        name=_get(ini, path, "scenario", "name", default=path.stem) if ini.has_section("scenario") else path.stem,
        slab1=slabs[0],
        slab2=slabs[1],
        gap=gap,
        sweep=Sweep(axis, values),
        rules=rules,
        separation_nm=separation,
        zetas_eV=zetas,
        source=str(path),
        digest=digest.hexdigest()[:16],
        text=text,
    )


def dump_scenario(scenario: Scenario, path) -> None:
    """Write a scenario back to INI form.

    Material references are written as absolute paths to the files they were
    resolved from, so the output loads from any directory.
    """
    src = Path(scenario.source)
    ini = configparser.ConfigParser(interpolation=None)
    ini.optionxform = str
    ini["scenario"] = {"name": scenario.name}
    refs = scenario.text.get("refs", {})

    def ref(key: str) -> str:
        return str(resolve_material(refs[key], src.parent))

    for sec, slab in (("slab1", scenario.slab1), ("slab2", scenario.slab2)):
        body = {"rule": slab.rule_name}
        if isinstance(slab.rule, MixingRule):
            body["orientation"] = slab.rule.orientation
        c = slab.composite
        if c is not None:
            owner = sec if f"{sec}.host" in refs else "slab1"
            body.update({
                "host": ref(f"{owner}.host"),
                "inclusion": ref(f"{owner}.inclusion"),
                "f": repr(c.f),
                "shape": _format_shape(c.shape),
                "a_nm": repr(c.radius_nm),
            })
        ini[sec] = body
    ini["gap"] = {"material": ref("gap.material") if "gap.material" in refs else "vacuum"}
    sweep = {
        "axis": scenario.sweep.axis,
        "values": ", ".join(repr(v) for v in scenario.sweep.values),
        "rules": ", ".join(scenario.rules),
    }
    if scenario.separation_nm is not None:
        sweep["L_nm"] = repr(scenario.separation_nm)
    if scenario.zetas_eV:
        sweep["zeta_eV"] = ", ".join(repr(z) for z in scenario.zetas_eV)
    ini["sweep"] = sweep
    spectral = scenario.text.get("spectral_default")
    if spectral == "maxwell-garnett":
        ini["spectral"] = {"model": "maxwell-garnett"}
    elif isinstance(spectral, SpectralFunction):
        body = {"poles": ", ".join(f"{p!r}:{w!r}" for p, w in spectral.poles)}
        if spectral.grid:
            body["grid"] = ", ".join(repr(v) for v in spectral.grid)
            body["density"] = ", ".join(repr(v) for v in spectral.density)
        ini["spectral"] = body
    with Path(path).open("w") as fh:
        ini.write(fh)
