"""Run configuration: a strict line-oriented ``key = value`` format.

Example::

    [model]
    type = additive
    jump = mixture(0.3:N(-3.5,1), 0.7:N(3.5,1))
    noise = N(0,1)
    J = 100000
    seed = 7

    [estimator]
    t1 = 0.5
    t2 = 1
    m = adaptive

Unknown sections or keys are errors. Values are validated before anything
is computed.
"""

from dataclasses import dataclass, field, fields
import math
import re
from typing import Optional

from .fourier import CUTOFF_RULES, KAPPA_FORMS, FourierConfig
from .grids import XGrid
from .laws import Degenerate0, Law, LawSyntaxError, parse_law
from .mellin import THRESHOLD_FORMS, MellinConfig


class ParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ValidationError(ValueError):
    pass


SECTIONS = {
    "model": ("type", "jump", "noise", "j", "n", "delta", "lambda", "times", "seed"),
    "estimator": ("t1", "t2", "m", "kappa", "alpha", "c", "freq_step", "m_search",
                  "x_min", "x_max", "x_step", "kappa_form", "threshold_form", "cutoff_rule"),
    "sweep": ("parameter", "values", "replicates", "adaptive"),
    "output": ("dir", "data", "density", "transform", "sweep"),
}

_SECTION = re.compile(r"^\[\s*([A-Za-z_]+)\s*\]$")


def parse_sections(text):
    """Split text into ``{section: {key: (value, line)}}`` with strict key checks."""
    out = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SECTION.match(line)
        if m:
            current = m.group(1).lower()
            if current not in SECTIONS:
                raise ParseError(f"unknown section [{current}]", lineno)
            if current in out:
                raise ParseError(f"duplicate section [{current}]", lineno)
            out[current] = {}
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        if current is None:
            raise ParseError("key outside of any section", lineno)
        key = key.strip().lower()
        if key not in SECTIONS[current]:
            raise ParseError(f"unknown key {key!r} in [{current}]", lineno)
        if key in out[current]:
            raise ParseError(f"duplicate key {key!r}", lineno)
        out[current][key] = (value.strip(), lineno)
    return out


def parse_values(text):
    """``a,b,c`` or ``grid(start,step,count)``."""
    text = text.strip()
    m = re.fullmatch(r"grid\(\s*([^,]+),\s*([^,]+),\s*([^,)]+)\)", text)
    if m:
        start, step, count = float(m.group(1)), float(m.group(2)), int(m.group(3))
        if count < 1 or step <= 0:
            raise ValueError("grid() needs a positive step and count")
        return tuple(round(start + k * step, 12) for k in range(count))
    return tuple(float(v) for v in text.split(",") if v.strip())


def _fmt_values(values):
    return ",".join(repr(float(v)) for v in values)


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple
    replicates: int = 50
    adaptive: bool = False


@dataclass(frozen=True)
class OutputSpec:
    dir: str = "."
    data: str = "data.csv"
    density: str = "density.csv"
    transform: Optional[str] = None
    sweep: str = "sweep.csv"


@dataclass(frozen=True)
class RunConfig:
    model: str
    jump: Law
    noise: Law = field(default_factory=Degenerate0)
    J: Optional[int] = None
    n: Optional[int] = None
    delta: Optional[float] = None
    lam: float = 1.0
    times: Optional[tuple] = None
    estimator: object = None
    adaptive: bool = False
    cutoff_rule: str = "last"
    sweep: Optional[SweepSpec] = None
    output: OutputSpec = field(default_factory=OutputSpec)
    seed: Optional[int] = None

    @property
    def additive(self):
        return self.model == "additive"

    def observation_times(self):
        if self.times is not None:
            return self.times
        if self.estimator is not None and self.additive:
            return (self.estimator.t1, self.estimator.t2)
        raise ValidationError("no observation times: set 'times' or t1/t2")


def _get(section, key, conv, default=None, required=False, name=None):
    if key not in section:
        if required:
            raise ValidationError(f"missing required key {name or key!r}")
        return default
    value, line = section[key]
    try:
        return conv(value)
    except (ValueError, LawSyntaxError) as exc:
        raise ParseError(f"bad value for {key!r}: {exc}", line) from None


def _int(v):
    f = float(v)
    if not f.is_integer():
        raise ValueError(f"{v!r} is not an integer")
    return int(f)


def _bool(v):
    v = v.lower()
    if v in ("true", "yes", "1", "on"):
        return True
    if v in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"{v!r} is not a boolean")


def config_from_sections(sections):
    if "model" not in sections:
        raise ParseError("missing [model]")
    mod = sections["model"]
    est = sections.get("estimator", {})
    model = _get(mod, "type", str, "additive")
    if model not in ("additive", "multiplicative"):
        raise ValidationError("model type must be 'additive' or 'multiplicative'")
    jump = _get(mod, "jump", parse_law, required=True)
    noise = _get(mod, "noise", parse_law, Degenerate0())
    lam = _get(mod, "lambda", float, 1.0)
    seed = _get(mod, "seed", _int)
    times = _get(mod, "times", parse_values)
    J = _get(mod, "j", _int, name="J")
    n = _get(mod, "n", _int)
    delta = _get(mod, "delta", float)
    m_raw = _get(est, "m", str, None)
    adaptive = m_raw is not None and m_raw.lower() == "adaptive"
    cutoff_rule = _get(est, "cutoff_rule", str, "last")
    if cutoff_rule not in CUTOFF_RULES:
        raise ValidationError(f"cutoff_rule must be one of {CUTOFF_RULES}")
    common = {}
    for key in ("kappa", "alpha", "freq_step", "m_search"):
        v = _get(est, key, float)
        if v is not None:
            common[key] = v
    if m_raw is not None and not adaptive:
        common["m"] = _get(est, "m", float)
    x = [_get(est, k, float) for k in ("x_min", "x_max", "x_step")]

    try:
        if model == "additive":
            if not math.isclose(lam, 1.0):
                raise ValidationError("the Fourier pipeline assumes lambda = 1; remove or set 'lambda = 1'")
            if n is not None or delta is not None:
                raise ValidationError("'n' and 'delta' belong to the multiplicative model")
            if J is None:
                raise ValidationError("missing required key 'J'")
            if J < 2:
                raise ValidationError("J must be at least 2")
            for key in ("c", "threshold_form"):
                if key in est:
                    raise ValidationError(f"{key!r} is a Mellin estimator option")
            kappa_form = _get(est, "kappa_form", str, "definition")
            if kappa_form not in KAPPA_FORMS:
                raise ValidationError(f"kappa_form must be one of {KAPPA_FORMS}")
            t1 = _get(est, "t1", float, times[0] if times else 0.5)
            t2 = _get(est, "t2", float, times[-1] if times and len(times) > 1 else 1.0)
            if not t1 > 0:
                raise ValidationError("t1 must be positive")
            if not t2 > t1:
                raise ValidationError("t2 must exceed t1")
            xg = XGrid(*(d if v is None else v for v, d in zip(x, (-10.0, 10.0, 0.01))))
            estimator = FourierConfig(t1=t1, t2=t2, x_grid=xg, kappa_form=kappa_form, **common)
            if times is not None:
                _check_times(times)
        else:
            if not lam > 0:
                raise ValidationError("lambda must be positive")
            if J is not None or times is not None:
                raise ValidationError("'J' and 'times' belong to the additive model")
            if n is None:
                raise ValidationError("missing required key 'n'")
            if n < 1:
                raise ValidationError("n must be positive")
            delta = 1.0 if delta is None else delta
            if not delta > 0:
                raise ValidationError("delta must be positive")
            if not isinstance(noise, Degenerate0):
                raise ValidationError("the multiplicative model has no additive noise")
            if not jump.positive_support:
                raise ValidationError("multiplicative jumps must be strictly positive")
            for key in ("t1", "t2", "kappa_form"):
                if key in est:
                    raise ValidationError(f"{key!r} is a Fourier estimator option")
            form = _get(est, "threshold_form", str, "additive")
            if form not in THRESHOLD_FORMS:
                raise ValidationError(f"threshold_form must be one of {THRESHOLD_FORMS}")
            xg = XGrid(*(d if v is None else v for v, d in zip(x, (0.002, 1.5, 0.002))))
            estimator = MellinConfig(c=_get(est, "c", float, 1.0), lam=lam, delta=delta, x_grid=xg,
                                     threshold_form=form, **common)
            try:
                estimator.check_law(jump)
            except NotImplementedError:
                pass
            except ValueError as exc:
                raise ValidationError(str(exc)) from None
    except ValidationError:
        raise
    except ValueError as exc:
        raise ValidationError(str(exc)) from None

    sweep = None
    if "sweep" in sections:
        sw = sections["sweep"]
        parameter = _get(sw, "parameter", str, required=True)
        allowed = ("m", "t2", "J") if model == "additive" else ("m", "n")
        if parameter not in allowed and parameter.lower() not in [a.lower() for a in allowed]:
            raise ValidationError(f"sweep parameter must be one of {allowed} for the {model} model")
        parameter = next(a for a in allowed if a.lower() == parameter.lower())
        values = _get(sw, "values", parse_values, required=True)
        if not values:
            raise ValidationError("sweep values are empty")
        if parameter == "t2" and any(v <= estimator.t1 for v in values):
            raise ValidationError("every swept t2 must exceed t1")
        if parameter in ("J", "n") and any(v < 2 or not float(v).is_integer() for v in values):
            raise ValidationError("swept sample sizes must be integers >= 2")
        replicates = _get(sw, "replicates", _int, 50)
        if replicates < 2:
            raise ValidationError("replicates must be at least 2")
        sweep = SweepSpec(parameter, values, replicates, _get(sw, "adaptive", _bool, False))

    out = sections.get("output", {})
    defaults = OutputSpec()
    output = OutputSpec(**{f.name: _get(out, f.name, str, getattr(defaults, f.name)) for f in fields(OutputSpec)})
    return RunConfig(model=model, jump=jump, noise=noise, J=J, n=n,
                     delta=delta if model == "multiplicative" else None, lam=lam, times=times,
                     estimator=estimator, adaptive=adaptive, cutoff_rule=cutoff_rule, sweep=sweep,
                     output=output, seed=seed)


def _check_times(times):
    if not times:
        raise ValidationError("times is empty")
    if any(t <= 0 for t in times):
        raise ValidationError("times must be positive")
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ValidationError("times must be strictly increasing")


def parse_config(text):
    """Parse and validate configuration text into a RunConfig."""
    return config_from_sections(parse_sections(text))


def format_config(cfg: RunConfig):
    """Serialise a RunConfig; ``parse_config(format_config(c)) == c``."""
    lines = ["[model]", f"type = {cfg.model}", f"jump = {cfg.jump.literal()}"]
    if cfg.additive:
        lines.append(f"noise = {cfg.noise.literal()}")
        lines.append(f"J = {cfg.J}")
        if cfg.times is not None:
            lines.append(f"times = {_fmt_values(cfg.times)}")
    else:
        lines += [f"n = {cfg.n}", f"delta = {cfg.delta!r}", f"lambda = {cfg.lam!r}"]
    if cfg.seed is not None:
        lines.append(f"seed = {cfg.seed}")
    e = cfg.estimator
    lines += ["", "[estimator]"]
    if cfg.additive:
        lines += [f"t1 = {e.t1!r}", f"t2 = {e.t2!r}", f"kappa_form = {e.kappa_form}"]
    else:
        lines += [f"c = {e.c!r}", f"threshold_form = {e.threshold_form}"]
    lines.append("m = adaptive" if cfg.adaptive else f"m = {e.m!r}")
    lines += [f"kappa = {e.kappa!r}", f"alpha = {e.alpha!r}", f"cutoff_rule = {cfg.cutoff_rule}"]
    if e.freq_step is not None:
        lines.append(f"freq_step = {e.freq_step!r}")
    if e.m_search is not None:
        lines.append(f"m_search = {e.m_search!r}")
    lines += [f"x_min = {e.x_grid.start!r}", f"x_max = {e.x_grid.stop!r}", f"x_step = {e.x_grid.step!r}"]
    if cfg.sweep is not None:
        s = cfg.sweep
        lines += ["", "[sweep]", f"parameter = {s.parameter}", f"values = {_fmt_values(s.values)}",
                  f"replicates = {s.replicates}", f"adaptive = {str(s.adaptive).lower()}"]
    o = cfg.output
    lines += ["", "[output]"] + [f"{f.name} = {getattr(o, f.name)}" for f in fields(OutputSpec)
                                 if getattr(o, f.name) is not None]
    return "\n".join(lines) + "\n"
