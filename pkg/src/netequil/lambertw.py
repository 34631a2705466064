"""Principal-branch Lambert W function and a large-argument companion.

``lambert_w(x)`` inverts w * exp(w) = x for x >= -1/e by Halley iteration.
Starting points depend on the regime: a branch-point series in
p = sqrt(2*(e*x + 1)) near -1/e, a truncated Maclaurin series on
[-0.25, 1], and log(x) - log(log(x)) for x > 1.  Convergence is declared
at |dw| <= 1e-15 * (1 + |w|), which the cubic rate of Halley turns into
a residual |w*exp(w) - x| of a few ulp.

``lambert_w_exp(z)`` evaluates W(exp(z)) for any real z.  When exp(z)
would overflow it instead solves w + log(w) = z by Newton iteration;
the capacity resolvents route through it so that transiently huge
arguments inside the solver loop stay finite.
"""

import math

_BRANCH_POINT = -math.exp(-1.0)
# beyond this, form W(exp(z)) without evaluating exp(z)
_EXP_SWITCH = 700.0 * math.log(2.0)


def lambert_w(x):
    """Principal branch W(x), defined for x >= -1/e; W(x) >= -1.

    Raises ValueError below the branch point (a couple of ulp of slack
    absorbs rounding in arguments meant to sit exactly on it).
    """
    x = float(x)
    if math.isnan(x):
        raise ValueError("lambert_w: argument is nan")
    if x < _BRANCH_POINT:
        if _BRANCH_POINT - x <= 4.0 * math.ulp(_BRANCH_POINT):
            x = _BRANCH_POINT
        else:
            raise ValueError(f"lambert_w: argument {x!r} is below -1/e")

    if x < -0.25:
        p = math.sqrt(max(2.0 * (math.e * x + 1.0), 0.0))
        w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)))
    elif x <= 1.0:
        w = x * (1.0 + x * (-1.0 + x * 1.5))
    else:
        log_x = math.log(x)
        w = log_x - math.log(log_x) if log_x > 0.0 else log_x

    for _ in range(50):
        ew = math.exp(w)
        f = w * ew - x
        if f == 0.0:
            break
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= dw
        if abs(dw) <= 1e-15 * (1.0 + abs(w)):
            break
    return w


def lambert_w_exp(z):
    """W(exp(z)) for any real z, overflow-free.

    For large z this is the root of w + log(w) = z, found by Newton
    steps w <- w * (1 + z - log(w)) / (1 + w) from w0 = z - log(z).
    """
    z = float(z)
    if z <= _EXP_SWITCH:
        return lambert_w(math.exp(z))
    w = z - math.log(z)
    for _ in range(50):
        w_next = w * (1.0 + z - math.log(w)) / (1.0 + w)
        done = abs(w_next - w) <= 1e-15 * (1.0 + abs(w_next))
        w = w_next
        if done:
            break
    return w
