"""Flat `key = value` scenario files: parsing, validation, serialization, and
the shipped presets.

Format rules: one `key = value` per line, `#` starts a comment, blank lines
are ignored. Payoff matrices are four comma-separated entries row-major
(`a0 = -4, 4, 0, 2`); hawk-dove scenarios may instead give `v0, c0, v1, c1`
and have the matrices built from them. Unknown and duplicate keys are errors;
omitted optional keys take the documented defaults.
"""

from __future__ import annotations

from importlib.resources import files

from .dynamics import EnvParams, SystemState, TrustMatrix, PROTOCOL_MODES
from .game import GamePair, Payoff2x2, hawk_dove_pair
from .integrate import IntegratorSettings
from .scenario import Scenario

PRESET_NAMES = ("hawk-dove", "prisoners-dilemma")
_PRESET_FILES = {
    "hawk-dove": "hawk_dove.cfg",
    "prisoners-dilemma": "prisoners_dilemma.cfg",
}

_MATRIX_KEYS = ("a0", "a1")
_HAWK_DOVE_KEYS = ("v0", "c0", "v1", "c1")
_SCALAR_KEYS = ("theta", "psi", "x0", "n0", "y0", "b11", "b12", "b21", "b22")
_SETTINGS_KEYS = ("dt", "t_max", "record_every", "eps_stationary", "hold_time",
                  "projection_tolerance")
_OTHER_KEYS = ("label", "protocol_matrix_mode")
_ALL_KEYS = frozenset(_MATRIX_KEYS + _HAWK_DOVE_KEYS + _SCALAR_KEYS
                      + _SETTINGS_KEYS + _OTHER_KEYS)


class ConfigError(ValueError):
    """A scenario file or override failed to parse or validate."""

    def __init__(self, message, *, key=None, line=None, source=None):
        where = []
        if source is not None:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key {key!r}")
        full = f"{', '.join(where)}: {message}" if where else message
        super().__init__(full)
        self.key = key
        self.line = line
        self.source = source


def _tokenize(text: str, source: str) -> dict:
    entries: dict[str, tuple[str, int | None]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError("expected 'key = value'", line=lineno, source=source)
        key, value = body.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError("empty key", line=lineno, source=source)
        if key not in _ALL_KEYS:
            raise ConfigError("unknown key", key=key, line=lineno, source=source)
        if key in entries:
            raise ConfigError("duplicate key", key=key, line=lineno, source=source)
        if not value:
            raise ConfigError("empty value", key=key, line=lineno, source=source)
        entries[key] = (value, lineno)
    return entries


def _apply_overrides(entries: dict, overrides, source: str) -> None:
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not KEY=VALUE", source=source)
        key, value = item.split("=", 1)
        key = key.strip()
        value = value.strip()
        if key not in _ALL_KEYS:
            raise ConfigError("unknown key in --set override", key=key, source=source)
        if not value:
            raise ConfigError("empty value in --set override", key=key, source=source)
        entries[key] = (value, None)


class _Builder:
    def __init__(self, entries, source):
        self.entries = entries
        self.source = source

    def error(self, message, key):
        line = self.entries[key][1] if key in self.entries else None
        return ConfigError(message, key=key, line=line, source=self.source)

    def float_value(self, key, default=None):
        if key not in self.entries:
            if default is None:
                raise ConfigError("missing required key", key=key, source=self.source)
            return default
        raw = self.entries[key][0]
        try:
            return float(raw)
        except ValueError:
            raise self.error(f"malformed number {raw!r}", key) from None

    def int_value(self, key, default):
        if key not in self.entries:
            return default
        raw = self.entries[key][0]
        try:
            value = int(raw)
        except ValueError:
            raise self.error(f"malformed integer {raw!r}", key) from None
        return value

    def matrix_value(self, key):
        raw = self.entries[key][0]
        parts = [p.strip() for p in raw.split(",")]
        if len(parts) != 4:
            raise self.error(
                f"expected four comma-separated entries (a11, a12, a21, a22), got {len(parts)}",
                key,
            )
        try:
            values = [float(p) for p in parts]
        except ValueError:
            raise self.error(f"malformed number in matrix {raw!r}", key) from None
        try:
            return Payoff2x2(*values)
        except ValueError as exc:
            raise self.error(str(exc), key) from None

    def in_range(self, key, value, lo, hi):
        if not lo <= value <= hi:
            raise self.error(f"value {value!r} outside [{lo:g}, {hi:g}]", key)
        return value


def parse_config(text: str, source: str = "<config>", overrides=()) -> Scenario:
    """Parse scenario text into a fully validated Scenario.

    overrides is a sequence of KEY=VALUE strings applied on top of the file's
    entries before validation (the CLI's --set flag). Every failure raises
    ConfigError naming the offending key and line.
    """
    entries = _tokenize(text, source)
    _apply_overrides(entries, overrides, source)
    b = _Builder(entries, source)

    has_matrices = [k for k in _MATRIX_KEYS if k in entries]
    has_hd = [k for k in _HAWK_DOVE_KEYS if k in entries]
    if has_matrices and has_hd:
        raise ConfigError(
            f"give either matrices {_MATRIX_KEYS} or hawk-dove parameters "
            f"{_HAWK_DOVE_KEYS}, not both",
            key=has_hd[0],
            source=source,
        )
    if has_matrices:
        if len(has_matrices) != 2:
            missing = [k for k in _MATRIX_KEYS if k not in entries][0]
            raise ConfigError("missing required key", key=missing, source=source)
        pair = GamePair(b.matrix_value("a0"), b.matrix_value("a1"))
    elif has_hd:
        if len(has_hd) != 4:
            missing = [k for k in _HAWK_DOVE_KEYS if k not in entries][0]
            raise ConfigError("missing required key", key=missing, source=source)
        v0 = b.float_value("v0")
        c0 = b.float_value("c0")
        v1 = b.float_value("v1")
        c1 = b.float_value("c1")
        if not 0.0 < v0 < c0:
            raise b.error(f"need 0 < v0 < c0, got v0={v0!r}, c0={c0!r}", "v0")
        if not 0.0 < v1 < c1:
            raise b.error(f"need 0 < v1 < c1, got v1={v1!r}, c1={c1!r}", "v1")
        pair = hawk_dove_pair(v0, c0, v1, c1)
    else:
        raise ConfigError(
            f"missing game definition: give {_MATRIX_KEYS} or {_HAWK_DOVE_KEYS}",
            key="a0",
            source=source,
        )

    theta = b.float_value("theta")
    psi = b.float_value("psi")
    if theta <= 0.0:
        raise b.error(f"theta must be positive, got {theta!r}", "theta")
    if psi > 0.0:
        raise b.error(f"psi must be nonpositive, got {psi!r}", "psi")
    env = EnvParams(theta, psi)

    trust_values = {}
    for key in ("b11", "b12", "b21", "b22"):
        trust_values[key] = b.in_range(key, b.float_value(key), 0.0, 1.0)
    trust = TrustMatrix(**trust_values)

    initial = SystemState(
        b.in_range("x0", b.float_value("x0"), 0.0, 1.0),
        b.in_range("n0", b.float_value("n0"), 0.0, 1.0),
        b.in_range("y0", b.float_value("y0"), 0.0, 1.0),
    )

    defaults = IntegratorSettings()
    dt = b.float_value("dt", defaults.dt)
    if dt <= 0.0:
        raise b.error(f"dt must be positive, got {dt!r}", "dt")
    t_max = b.float_value("t_max", defaults.t_max)
    if t_max < dt:
        raise b.error(f"t_max={t_max!r} must be at least dt={dt!r}", "t_max")
    record_every = b.int_value("record_every", defaults.record_every)
    if record_every < 1:
        raise b.error(f"record_every must be positive, got {record_every!r}", "record_every")
    eps = b.float_value("eps_stationary", defaults.eps_stationary)
    if eps <= 0.0:
        raise b.error(f"eps_stationary must be positive, got {eps!r}", "eps_stationary")
    hold = b.float_value("hold_time", defaults.hold_time)
    if hold < 0.0:
        raise b.error(f"hold_time must be nonnegative, got {hold!r}", "hold_time")
    ptol = b.float_value("projection_tolerance", defaults.projection_tolerance)
    if ptol <= 0.0:
        raise b.error(f"projection_tolerance must be positive, got {ptol!r}", "projection_tolerance")
    settings = IntegratorSettings(dt, t_max, record_every, eps, hold, ptol)

    mode = entries.get("protocol_matrix_mode", ("env", None))[0]
    if mode not in PROTOCOL_MODES:
        raise b.error(
            f"must be one of {PROTOCOL_MODES}, got {mode!r}", "protocol_matrix_mode"
        )
    label = entries.get("label", ("scenario", None))[0]

    try:
        return Scenario(pair, env, trust, initial, settings, mode, label)
    except ValueError as exc:
        raise ConfigError(str(exc), source=source) from exc


def load_config(path, overrides=()) -> Scenario:
    """Read and parse a scenario file; see parse_config."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}", source=str(path)) from exc
    return parse_config(text, source=str(path), overrides=overrides)


def dumps_config(scenario: Scenario) -> str:
    """Serialize a Scenario to config text; parse_config inverts this
    field-for-field."""
    s = scenario.settings
    a0 = ", ".join(repr(v) for v in scenario.pair.a0.entries())
    a1 = ", ".join(repr(v) for v in scenario.pair.a1.entries())
    lines = [
        f"label = {scenario.label}",
        "",
        "# game (row-major: a11, a12, a21, a22)",
        f"a0 = {a0}",
        f"a1 = {a1}",
        "",
        "# environment rates",
        f"theta = {scenario.env.theta!r}",
        f"psi = {scenario.env.psi!r}",
        "",
        "# trust matrix",
        f"b11 = {scenario.trust.b11!r}",
        f"b12 = {scenario.trust.b12!r}",
        f"b21 = {scenario.trust.b21!r}",
        f"b22 = {scenario.trust.b22!r}",
        "",
        "# initial state",
        f"x0 = {scenario.initial.x!r}",
        f"n0 = {scenario.initial.n!r}",
        f"y0 = {scenario.initial.y!r}",
        "",
        "# integrator",
        f"dt = {s.dt!r}",
        f"t_max = {s.t_max!r}",
        f"record_every = {s.record_every!r}",
        f"eps_stationary = {s.eps_stationary!r}",
        f"hold_time = {s.hold_time!r}",
        f"projection_tolerance = {s.projection_tolerance!r}",
        f"protocol_matrix_mode = {scenario.protocol_matrix_mode}",
    ]
    return "\n".join(lines) + "\n"


def save_config(scenario: Scenario, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dumps_config(scenario))


def preset_text(name: str) -> str:
    """Raw config text of a shipped preset."""
    if name not in _PRESET_FILES:
        raise ConfigError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
    return (files("ecoopinion") / "presets" / _PRESET_FILES[name]).read_text(encoding="utf-8")


def preset_scenario(name: str, overrides=()) -> Scenario:
    """Parsed Scenario for a shipped preset."""
    return parse_config(preset_text(name), source=f"preset:{name}", overrides=overrides)
