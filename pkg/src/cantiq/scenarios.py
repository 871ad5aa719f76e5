"""Flat key=value scenario files.

Format: one ``key = value`` pair per line, ``#`` starts a comment, blank
lines ignored. Values parse as int, float, bool (true/false), a
comma-separated list of numbers, or a bare string. Key validation is done
by the request schemas; unknown keys are hard errors there.

The single key handled here rather than by the schemas is ``out``, the
output file name used by the command-line client.
"""

from .errors import ConfigError


def _parse_scalar(text):
    low = text.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def parse_config(text):
    """Parse flat key=value text into a dict; raises ConfigError on noise."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got "
                              f"{raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if "," in value:
            try:
                out[key] = [float(v) for v in value.split(",") if v.strip()]
            except ValueError as err:
                raise ConfigError(
                    f"line {lineno}: bad list value for {key!r}") from err
        else:
            out[key] = _parse_scalar(value)
    return out


def load_scenario(path):
    """Read a scenario file; returns (fields, output file name or None)."""
    try:
        with open(path) as fh:
            fields = parse_config(fh.read())
    except OSError as err:
        raise ConfigError(f"cannot read scenario {path}: {err}") from err
    out_name = fields.pop("out", None)
    if out_name is not None and not isinstance(out_name, str):
        raise ConfigError("'out' must be a file name")
    return fields, out_name
