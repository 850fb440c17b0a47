"""Text grammar for model and symbol configuration files.

Model files (key-value lines; `#` comments and blank lines are skipped):

    n 10
    boundary open
    term 1.0 X Y 0

`term COEFF P Q SITE` places COEFF * P(x)Q on sites (SITE, SITE+1) with
P, Q in {I, X, Y, Z}. `boundary` accepts only `open` and may be omitted.

Symbol files are bare `BREAKPOINT VALUE` pairs, one per line, breakpoints
ascending and ending at 2pi; each value applies on the half-open interval
from the previous breakpoint (0 at the start) up to and including the
listed one. A file whose first token parses as a number is a symbol file.

serialize_model() writes the canonical form: terms decomposed in the Pauli
product basis, sorted by (site, P, Q), floats at 17 significant digits.
normalize_model_text() is parse-then-serialize and is idempotent.
"""
import numpy as np

from .errors import ConfigError
from . import chain, fermion


def _fmt(x):
    return f"{float(x):.17g}"


def _tokens_with_columns(line):
    out = []
    pos = 0
    for tok in line.split():
        col = line.index(tok, pos)
        out.append((tok, col + 1))
        pos = col + len(tok)
    return out


def _significant_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield lineno, line


def _is_number(tok):
    try:
        float(tok)
        return True
    except ValueError:
        return False


def _err(name, lineno, col, message):
    raise ConfigError(f"{name}:{lineno}:{col}: {message}")


def parse_model_text(text, name="<config>"):
    """Parse a model or symbol definition; the result type follows the grammar."""
    lines = list(_significant_lines(text))
    if not lines:
        raise ConfigError(f"{name}: empty configuration")
    first_tok = lines[0][1].split()[0]
    if _is_number(first_tok):
        return _parse_symbol(lines, name)
    return _parse_spin(lines, name)


def _parse_spin(lines, name):
    n = None
    entries = []
    for lineno, line in lines:
        toks = _tokens_with_columns(line)
        key, col = toks[0]
        if key == "n":
            if len(toks) != 2 or not toks[1][0].isdigit():
                _err(name, lineno, col, "expected `n INTEGER`")
            if n is not None:
                _err(name, lineno, col, "duplicate n")
            n = int(toks[1][0])
        elif key == "boundary":
            if len(toks) != 2 or toks[1][0] != "open":
                _err(name, lineno, toks[1][1] if len(toks) > 1 else col,
                     "only `boundary open` is supported")
        elif key == "term":
            if len(toks) != 5:
                _err(name, lineno, col, "expected `term COEFF P Q SITE`")
            coeff_tok, coeff_col = toks[1]
            if not _is_number(coeff_tok):
                _err(name, lineno, coeff_col, f"bad coefficient {coeff_tok!r}")
            for tok, tcol in (toks[2], toks[3]):
                if tok not in chain.PAULI:
                    _err(name, lineno, tcol,
                         f"bad Pauli label {tok!r}; expected one of I,X,Y,Z")
            site_tok, site_col = toks[4]
            if not site_tok.lstrip("-").isdigit():
                _err(name, lineno, site_col, f"bad site index {site_tok!r}")
            entries.append((float(coeff_tok), toks[2][0], toks[3][0], int(site_tok)))
        else:
            _err(name, lineno, col, f"unknown key {key!r}")
    if n is None:
        raise ConfigError(f"{name}: missing `n`")
    return chain.build_hamiltonian(entries, n=n)


def _parse_symbol(lines, name):
    breakpoints = [0.0]
    values = []
    for lineno, line in lines:
        toks = _tokens_with_columns(line)
        if len(toks) != 2:
            _err(name, lineno, toks[0][1], "expected `BREAKPOINT VALUE`")
        for tok, col in toks:
            if not _is_number(tok):
                _err(name, lineno, col, f"expected a number, got {tok!r}")
        b, v = float(toks[0][0]), float(toks[1][0])
        if b <= breakpoints[-1]:
            _err(name, lineno, toks[0][1],
                 f"breakpoint {b!r} not increasing past {breakpoints[-1]!r}")
        breakpoints.append(b)
        values.append(v)
    try:
        return fermion.PiecewiseSymbol(tuple(breakpoints), tuple(values))
    except ConfigError as exc:
        raise ConfigError(f"{name}: {exc}") from None


def parse_model(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    return parse_model_text(text, name=str(path))


def _pauli_decomposition(block):
    out = []
    for p in chain.PAULI_ORDER:
        for q in chain.PAULI_ORDER:
            basis = np.kron(chain.PAULI[p], chain.PAULI[q])
            coeff = float(np.trace(basis @ block).real) / 4.0
            if abs(coeff) > 1e-14:
                out.append((p, q, coeff))
    return out


def serialize_model(model):
    """Canonical text form; parse(serialize(parse(f))) reproduces parse(f)."""
    if isinstance(model, chain.LocalHamiltonian):
        lines = [f"n {model.n}", "boundary open"]
        for j, block in enumerate(model.terms):
            for p, q, coeff in _pauli_decomposition(block):
                lines.append(f"term {_fmt(coeff)} {p} {q} {j}")
        return "\n".join(lines) + "\n"
    if isinstance(model, fermion.PiecewiseSymbol):
        lines = [f"{_fmt(b)} {_fmt(v)}"
                 for b, v in zip(model.breakpoints[1:], model.values)]
        return "\n".join(lines) + "\n"
    raise TypeError(f"cannot serialize {type(model).__name__}")


def normalize_model_text(text, name="<config>"):
    return serialize_model(parse_model_text(text, name=name))
