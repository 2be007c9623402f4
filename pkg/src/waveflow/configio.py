"""Reading and writing the structured text config files.

All files share one line-oriented format: blank lines and ``#`` comments
are ignored, every other line is ``key = value`` where the value is a
whitespace-separated token list. Parse errors always carry the offending
line number and field name.

Array config schema (``*.cfg``)::

    guides  = 5
    beta_h  = 2.0 2.0 2.0 2.0 2.0      # one per guide (single value: uniform)
    beta_v  = 2.6
    kappa_h = 1.0                       # one per adjacent pair
    kappa_v = 2.0
    alpha_x = 0                         # optional, default 0
    alpha_y = 0

Scenario schema (see the README for the full description)::

    array = fivewg-reference            # preset name or path to a .cfg;
                                        # omit and give array keys inline
    input_guide = 3                     # or: input_amplitudes = 1 0 1j
    pair = HV                           # repeatable; named or
    pair = tilted: 0.39 0.0 1.18 3.14   # "label: theta1 phi1 theta2 phi2"
    t_min = 0
    t_max = 12
    steps = 601
    out = runs/demo                     # optional, CLI --out overrides

Transfer-search bounds reuse the array keys with two tokens (lo hi) per
family plus ``t_max``, ``steps`` and ``input_guide``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analysis import SearchBounds
from .errors import ConfigParseError
from .model import ArrayConfig
from .quantum import PureQubitState, TestStatePair, env_ket, guide_ket, standard_test_pairs


@dataclass(frozen=True)
class ConfigLine:
    key: str
    tokens: list[str]
    raw_value: str
    line: int


def read_key_value_lines(text: str) -> list[ConfigLine]:
    """Tokenize a config file into (key, tokens) entries with line numbers."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigParseError("expected 'key = value'", line=lineno)
        key, _, value = stripped.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if not key:
            raise ConfigParseError("missing key before '='", line=lineno)
        if not value:
            raise ConfigParseError("missing value", line=lineno, field=key)
        entries.append(ConfigLine(key=key, tokens=value.split(), raw_value=value, line=lineno))
    return entries


def _parse_floats(entry: ConfigLine) -> list[float]:
    values = []
    for tok in entry.tokens:
        try:
            values.append(float(tok))
        except ValueError:
            raise ConfigParseError(
                f"cannot parse {tok!r} as a number", line=entry.line, field=entry.key
            ) from None
    return values


def _parse_int(entry: ConfigLine) -> int:
    if len(entry.tokens) != 1:
        raise ConfigParseError("expected a single integer", line=entry.line, field=entry.key)
    try:
        return int(entry.tokens[0])
    except ValueError:
        raise ConfigParseError(
            f"cannot parse {entry.tokens[0]!r} as an integer",
            line=entry.line,
            field=entry.key,
        ) from None


def _parse_float(entry: ConfigLine) -> float:
    if len(entry.tokens) != 1:
        raise ConfigParseError("expected a single number", line=entry.line, field=entry.key)
    return _parse_floats(entry)[0]


ARRAY_KEYS = ("guides", "beta_h", "beta_v", "kappa_h", "kappa_v", "alpha_x", "alpha_y")


def _collect_unique(entries: list[ConfigLine], allowed: set[str], repeatable: set[str] = frozenset()):
    seen: dict[str, ConfigLine] = {}
    repeated: dict[str, list[ConfigLine]] = {}
    for entry in entries:
        if entry.key not in allowed:
            raise ConfigParseError("unknown key", line=entry.line, field=entry.key)
        if entry.key in repeatable:
            repeated.setdefault(entry.key, []).append(entry)
            continue
        if entry.key in seen:
            raise ConfigParseError(
                f"duplicate key (first on line {seen[entry.key].line})",
                line=entry.line,
                field=entry.key,
            )
        seen[entry.key] = entry
    return seen, repeated


def _array_config_from_entries(seen: dict[str, ConfigLine]) -> ArrayConfig:
    if "guides" not in seen:
        raise ConfigParseError("missing required key 'guides'", field="guides")
    m = _parse_int(seen["guides"])
    if m < 1:
        raise ConfigParseError("guides must be >= 1", line=seen["guides"].line, field="guides")

    def take(key, length, required):
        if key not in seen:
            if required and length > 0:
                raise ConfigParseError(f"missing required key '{key}'", field=key)
            return np.zeros(length)
        values = _parse_floats(seen[key])
        if len(values) == 1 and length > 0:
            return np.full(length, values[0])
        if len(values) != length:
            hint = " (omit for a single guide)" if length == 0 else " (or 1 to broadcast)"
            raise ConfigParseError(
                f"expected {length} entries{hint}, got {len(values)}",
                line=seen[key].line,
                field=key,
            )
        return np.asarray(values)

    return ArrayConfig(
        beta_h=take("beta_h", m, required=True),
        beta_v=take("beta_v", m, required=True),
        kappa_h=take("kappa_h", m - 1, required=True),
        kappa_v=take("kappa_v", m - 1, required=True),
        alpha_x=take("alpha_x", m, required=False),
        alpha_y=take("alpha_y", m, required=False),
    )


def parse_array_config(text: str) -> ArrayConfig:
    entries = read_key_value_lines(text)
    seen, _ = _collect_unique(entries, set(ARRAY_KEYS))
    return _array_config_from_entries(seen)


def load_array_config(path) -> ArrayConfig:
    return parse_array_config(Path(path).read_text(encoding="utf-8"))


def format_array_config(cfg: ArrayConfig, comment: str = "") -> str:
    """Serialize an ArrayConfig back into the text schema (12 sig. digits)."""
    def row(values):
        return " ".join(format(float(v), ".12g") for v in values)

    lines = []
    if comment:
        lines.extend(f"# {line}" for line in comment.splitlines())
    lines.append(f"guides = {cfg.num_guides}")
    lines.append(f"beta_h = {row(cfg.beta_h)}")
    lines.append(f"beta_v = {row(cfg.beta_v)}")
    if cfg.num_guides > 1:
        lines.append(f"kappa_h = {row(cfg.kappa_h)}")
        lines.append(f"kappa_v = {row(cfg.kappa_v)}")
    lines.append(f"alpha_x = {row(cfg.alpha_x)}")
    lines.append(f"alpha_y = {row(cfg.alpha_y)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Scenarios


@dataclass(frozen=True)
class Scenario:
    """Everything one CLI run needs: array, input ket, pairs, grid, outputs."""

    config: ArrayConfig
    config_label: str
    input_ket: np.ndarray
    input_spec: str
    pairs: list[TestStatePair]
    t_min: float
    t_max: float
    steps: int
    out_dir: Path | None

    def t_grid(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.steps)


SCENARIO_KEYS = {
    "array", "input_guide", "input_amplitudes", "pair",
    "t_min", "t_max", "steps", "out", *ARRAY_KEYS,
}

_NAMED_PAIRS = {p.label.lower(): p for p in standard_test_pairs()}


def _parse_pair(entry: ConfigLine) -> TestStatePair:
    named = _NAMED_PAIRS.get(entry.raw_value.strip().lower())
    if named is not None:
        return named
    if ":" not in entry.raw_value:
        raise ConfigParseError(
            f"unknown pair {entry.raw_value!r}: use HV, PM, psi or "
            "'label: theta1 phi1 theta2 phi2'",
            line=entry.line,
            field=entry.key,
        )
    label, _, rest = entry.raw_value.partition(":")
    label = label.strip()
    tokens = rest.split()
    if not label or len(tokens) != 4:
        raise ConfigParseError(
            "custom pair needs 'label: theta1 phi1 theta2 phi2'",
            line=entry.line,
            field=entry.key,
        )
    try:
        t1, p1, t2, p2 = (float(tok) for tok in tokens)
    except ValueError:
        raise ConfigParseError(
            "custom pair angles must be numbers", line=entry.line, field=entry.key
        ) from None
    return TestStatePair(label, PureQubitState(t1, p1), PureQubitState(t2, p2))


def _parse_complex_list(entry: ConfigLine) -> np.ndarray:
    values = []
    for tok in entry.tokens:
        try:
            values.append(complex(tok))
        except ValueError:
            raise ConfigParseError(
                f"cannot parse {tok!r} as a complex number (use forms like "
                "0.5, 1j, 0.5+0.5j)",
                line=entry.line,
                field=entry.key,
            ) from None
    return np.asarray(values, dtype=complex)


def parse_scenario(text: str, base_dir=None, presets: dict[str, ArrayConfig] | None = None) -> Scenario:
    """Parse a scenario file; ``presets`` maps names usable in ``array =``."""
    entries = read_key_value_lines(text)
    seen, repeated = _collect_unique(entries, SCENARIO_KEYS, repeatable={"pair"})
    presets = presets or {}

    inline_keys = [k for k in ARRAY_KEYS if k in seen]
    if "array" in seen:
        if inline_keys:
            raise ConfigParseError(
                f"'array' conflicts with inline key '{inline_keys[0]}'",
                line=seen[inline_keys[0]].line,
                field=inline_keys[0],
            )
        ref = seen["array"].raw_value.strip()
        if ref in presets:
            config, label = presets[ref], ref
        else:
            path = Path(ref)
            if not path.is_absolute() and base_dir is not None:
                path = Path(base_dir) / path
            if not path.exists():
                raise ConfigParseError(
                    f"array {ref!r} is neither a preset "
                    f"({', '.join(sorted(presets)) or 'none'}) nor a file",
                    line=seen["array"].line,
                    field="array",
                )
            config, label = load_array_config(path), ref
    elif inline_keys:
        config = _array_config_from_entries({k: seen[k] for k in inline_keys})
        label = "inline"
    else:
        raise ConfigParseError("missing 'array' reference or inline array keys", field="array")

    if "input_guide" in seen and "input_amplitudes" in seen:
        raise ConfigParseError(
            "give either input_guide or input_amplitudes, not both",
            line=seen["input_amplitudes"].line,
            field="input_amplitudes",
        )
    if "input_amplitudes" in seen:
        amps = _parse_complex_list(seen["input_amplitudes"])
        if amps.size != config.num_guides:
            raise ConfigParseError(
                f"expected {config.num_guides} amplitudes, got {amps.size}",
                line=seen["input_amplitudes"].line,
                field="input_amplitudes",
            )
        try:
            ket = env_ket(amps)
        except ValueError as exc:
            raise ConfigParseError(
                str(exc), line=seen["input_amplitudes"].line, field="input_amplitudes"
            ) from None
        spec = seen["input_amplitudes"].raw_value
    else:
        guide = _parse_int(seen["input_guide"]) if "input_guide" in seen else (config.num_guides + 1) // 2
        if not 1 <= guide <= config.num_guides:
            entry = seen.get("input_guide")
            raise ConfigParseError(
                f"input_guide {guide} outside 1..{config.num_guides}",
                line=entry.line if entry else None,
                field="input_guide",
            )
        ket = guide_ket(config.num_guides, guide)
        spec = f"guide {guide}"

    pairs = [_parse_pair(entry) for entry in repeated.get("pair", [])]
    if not pairs:
        pairs = list(standard_test_pairs())
    labels = [p.label for p in pairs]
    if len(set(labels)) != len(labels):
        raise ConfigParseError("pair labels must be unique", field="pair")

    t_min = _parse_float(seen["t_min"]) if "t_min" in seen else 0.0
    if "t_max" not in seen:
        raise ConfigParseError("missing required key 't_max'", field="t_max")
    t_max = _parse_float(seen["t_max"])
    steps = _parse_int(seen["steps"]) if "steps" in seen else 201
    if not t_min < t_max:
        raise ConfigParseError(
            f"t_min {t_min} must be below t_max {t_max}",
            line=seen["t_max"].line,
            field="t_max",
        )
    if steps < 2:
        raise ConfigParseError("steps must be >= 2", line=seen["steps"].line, field="steps")

    out_dir = None
    if "out" in seen:
        out_dir = Path(seen["out"].raw_value.strip())
        if not out_dir.is_absolute() and base_dir is not None:
            out_dir = Path(base_dir) / out_dir

    return Scenario(
        config=config,
        config_label=label,
        input_ket=ket,
        input_spec=spec,
        pairs=pairs,
        t_min=t_min,
        t_max=t_max,
        steps=steps,
        out_dir=out_dir,
    )


def load_scenario(path, presets=None) -> Scenario:
    p = Path(path)
    return parse_scenario(p.read_text(encoding="utf-8"), base_dir=p.parent, presets=presets)


# ---------------------------------------------------------------------------
# Transfer-search bounds


BOUNDS_KEYS = {
    "guides", "beta_h", "beta_v", "kappa_h", "kappa_v", "alpha_x", "alpha_y",
    "t_max", "steps", "input_guide",
}


def parse_search_bounds(text: str) -> SearchBounds:
    entries = read_key_value_lines(text)
    seen, _ = _collect_unique(entries, BOUNDS_KEYS)
    if "guides" not in seen:
        raise ConfigParseError("missing required key 'guides'", field="guides")

    def bound(key) -> tuple[float, float]:
        if key not in seen:
            return (-3.0, 3.0)
        values = _parse_floats(seen[key])
        if len(values) != 2:
            raise ConfigParseError(
                "bounds need exactly two numbers (lo hi)",
                line=seen[key].line,
                field=key,
            )
        return (values[0], values[1])

    kwargs = dict(
        num_guides=_parse_int(seen["guides"]),
        beta_h=bound("beta_h"),
        beta_v=bound("beta_v"),
        kappa_h=bound("kappa_h"),
        kappa_v=bound("kappa_v"),
        alpha_x=bound("alpha_x"),
        alpha_y=bound("alpha_y"),
    )
    if "t_max" in seen:
        kwargs["t_max"] = _parse_float(seen["t_max"])
    if "steps" in seen:
        kwargs["scan_steps"] = _parse_int(seen["steps"])
    if "input_guide" in seen:
        kwargs["input_guide"] = _parse_int(seen["input_guide"])
    return SearchBounds(**kwargs)


def load_search_bounds(path) -> SearchBounds:
    return parse_search_bounds(Path(path).read_text(encoding="utf-8"))
