"""
Command-line value parsing and parameter combination checks.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from config.constants import (ALGORITHMS, ANYTIME_ALGORITHMS, DEFAULT_CIC, DEFAULT_EPS0,
                              DEFAULT_RESTART, MAX_EPSILON, RESTART_POLICIES)
from core.errors import UsageError

_TRUE = {'true', '1', 'yes', 'on'}
_FALSE = {'false', '0', 'no', 'off'}


def parse_epsilon(value, name: str = 'epsilon') -> Fraction:
    """Exact bound from '1.5', '7/6' or a number; must lie in [1, MAX_EPSILON]."""
    try:
        eps = Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{name}: '{value}' is not a number")
    if eps < 1:
        raise UsageError(f"{name} must be >= 1, got {value}")
    if eps > MAX_EPSILON:
        raise UsageError(f"{name} must be <= {MAX_EPSILON:g}, got {value}")
    return eps


def parse_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise UsageError(f"expected true or false, got '{value}'")


def parse_restart(value: str) -> str:
    """CLI spelling ('1', '2', 'never') to restart policy name."""
    text = str(value).strip().lower()
    if text in RESTART_POLICIES:
        return RESTART_POLICIES[text]
    if text in RESTART_POLICIES.values():
        return text
    raise UsageError(f"--res must be one of {', '.join(RESTART_POLICIES)}, got '{value}'")


@dataclass(frozen=True)
class SolverParams:
    """A validated algorithm choice with every parameter resolved."""
    algo: str
    eps0: Fraction = Fraction(1)
    eps_high: Fraction = Fraction(1)
    eps_low: Fraction = Fraction(1)
    res: Optional[str] = None
    cic: Optional[bool] = None
    time_limit: Optional[float] = None
    label: Optional[str] = None

    @property
    def is_anytime(self) -> bool:
        return self.algo in ANYTIME_ALGORITHMS

    def as_dict(self) -> dict:
        """Parameters relevant to ``algo``, for event logs and curve grouping."""
        if self.algo == 'cbs':
            params = {}
        elif self.algo == 'bcbs':
            params = {'eps_high': str(self.eps_high), 'eps_low': str(self.eps_low)}
        elif self.algo == 'ecbs':
            params = {'eps': str(self.eps0)}
        elif self.algo == 'abcbs':
            params = {'eps0': str(self.eps0), 'res': self.res}
        else:
            params = {'eps0': str(self.eps0), 'res': self.res, 'cic': self.cic}
        params['time_limit'] = self.time_limit
        return params


def validate_solver_params(algo: str, eps0=None, eps_high=None, eps_low=None,
                           res=None, cic=None, time_limit=None,
                           label: Optional[str] = None) -> SolverParams:
    """
    Resolve defaults for ``algo`` and reject flags that do not apply to it.
    ``None`` means the flag was not given.
    """
    if algo not in ALGORITHMS:
        raise UsageError(f"unknown algorithm '{algo}'; choose from {', '.join(ALGORITHMS)}")
    if cic is not None and algo != 'aecbs':
        raise UsageError("--cic is only valid with --algo aecbs")
    if res is not None and algo not in ANYTIME_ALGORITHMS:
        raise UsageError("--res is only valid with --algo abcbs or aecbs")
    if (eps_high is not None or eps_low is not None) and algo != 'bcbs':
        raise UsageError("--eps-high/--eps-low are only valid with --algo bcbs")
    if eps0 is not None and algo == 'cbs':
        raise UsageError("cbs is optimal and takes no --eps0")
    if time_limit is not None and time_limit <= 0:
        raise UsageError(f"--time-limit must be positive, got {time_limit}")

    eps = parse_epsilon(eps0, '--eps0') if eps0 is not None else Fraction(DEFAULT_EPS0)
    if algo == 'cbs':
        return SolverParams(algo, time_limit=time_limit, label=label)
    if algo == 'bcbs':
        high = parse_epsilon(eps_high, '--eps-high') if eps_high is not None else eps
        low = parse_epsilon(eps_low, '--eps-low') if eps_low is not None else Fraction(1)
        return SolverParams(algo, eps0=high, eps_high=high, eps_low=low,
                            time_limit=time_limit, label=label)
    if algo == 'ecbs':
        return SolverParams(algo, eps0=eps, eps_high=eps, eps_low=eps,
                            time_limit=time_limit, label=label)

    policy = parse_restart(res if res is not None else DEFAULT_RESTART[algo])
    if algo == 'abcbs':
        return SolverParams(algo, eps0=eps, res=policy, time_limit=time_limit, label=label)
    use_cic = parse_bool(cic) if cic is not None else DEFAULT_CIC
    if policy == 'every' and not use_cic:
        raise UsageError("--cic false has no effect with --res 1 (every iteration restarts)")
    return SolverParams(algo, eps0=eps, res=policy, cic=use_cic, time_limit=time_limit,
                        label=label)


def validate_agent_range(agents_min: int, agents_max: int, step: int) -> List[int]:
    if agents_min < 1:
        raise UsageError(f"--agents-min must be >= 1, got {agents_min}")
    if agents_max < agents_min:
        raise UsageError(f"--agents-max ({agents_max}) is below --agents-min ({agents_min})")
    if step < 1:
        raise UsageError(f"--agent-step must be >= 1, got {step}")
    return list(range(agents_min, agents_max + 1, step))


def params_from_profile(profile: dict, time_limit: Optional[float] = None) -> SolverParams:
    """
    Solver parameters from a validated bench profile. Profile fields that do not
    apply to the profile's algorithm are ignored; ``time_limit`` overrides the profile.
    """
    algo = profile['algo']
    kwargs = {'time_limit': time_limit if time_limit is not None else profile.get('time_limit'),
              'label': profile.get('label')}
    if algo != 'cbs':
        kwargs['eps0'] = profile.get('eps0')
    if algo == 'bcbs':
        kwargs['eps_high'] = profile.get('eps_high')
        kwargs['eps_low'] = profile.get('eps_low')
    if algo in ANYTIME_ALGORITHMS:
        kwargs['res'] = profile.get('res')
    if algo == 'aecbs':
        kwargs['cic'] = profile.get('cic')
    return validate_solver_params(algo, **kwargs)
