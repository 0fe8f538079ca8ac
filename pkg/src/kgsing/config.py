"""Run options with environment-variable overrides (prefix ``KGSING_``)."""

from dataclasses import dataclass, fields, replace
import os

from .errors import ValidationError

ENV_PREFIX = "KGSING_"


@dataclass(frozen=True)
class Config:
    max_degree: int = 8
    mode: str = "exact"          # exact | approx
    tol: float = 1e-9
    budget: int = 4
    format: str = "text"         # text | structured
    jobs: int = 1

    def validate(self):
        if self.mode not in ("exact", "approx"):
            raise ValidationError(f"mode must be 'exact' or 'approx', not {self.mode!r}")
        if self.format not in ("text", "structured"):
            raise ValidationError(f"format must be 'text' or 'structured', not {self.format!r}")
        if not 0 <= self.budget <= 4:
            raise ValidationError("budget must lie in 0..4")
        if self.max_degree < 2:
            raise ValidationError("max degree must be at least 2")
        if self.tol <= 0:
            raise ValidationError("tolerance must be positive")
        if self.jobs < 1:
            raise ValidationError("jobs must be at least 1")
        return self

    @property
    def numeric_tol(self):
        """Zero-test tolerance: None selects exact rational arithmetic."""
        return None if self.mode == "exact" else self.tol


def load(overrides=None, environ=None):
    """Defaults, then ``KGSING_*`` environment variables, then explicit overrides
    (entries that are None are ignored)."""
    env = os.environ if environ is None else environ
    updates = {}
    for f in fields(Config):
        key = ENV_PREFIX + f.name.upper()
        if key in env:
            try:
                updates[f.name] = type(f.default)(env[key])
            except ValueError:
                raise ValidationError(f"invalid value {env[key]!r} for {key}") from None
    for k, v in (overrides or {}).items():
        if v is not None:
            updates[k] = v
    return replace(Config(), **updates).validate()
