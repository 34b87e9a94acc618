import numpy as np

METRIC_DIGITS = 15


def get_readable_time(seconds, full_time=False):
    periods = [
        ("day", 86400),
        ("hour", 3600),
        ("minute", 60),
        ("second", 1),
    ]
    if seconds < 1:
        return f"{seconds * 1000:.0f} ms"
    result = ""
    for period_name, period_seconds in periods:
        if seconds >= period_seconds:
            period_value, seconds = divmod(seconds, period_seconds)
            plural_suffix = "s" if period_value > 1 else ""
            result += f"{int(period_value)} {period_name}{plural_suffix} "
            if not full_time:
                break
    return result.strip()


def format_metric(value):
    return f"{float(value):.{METRIC_DIGITS - 1}e}"


def format_complex(value):
    value = complex(value)
    if value.imag == 0:
        return repr(value.real)
    return f"{value.real!r}{'+' if value.imag >= 0 else '-'}{abs(value.imag)!r}j"


def format_point(point):
    return f"({','.join(format_complex(z) for z in point)})"


def format_orders(counts):
    return f"({','.join(str(int(n) - 1) for n in counts)})"


def iteration_line(iteration, point, rel_error, node_counts, n_interp):
    return (
        f"iter={iteration} point={format_point(point)} "
        f"relerr={format_metric(rel_error)} orders={format_orders(node_counts)} "
        f"|I|={n_interp}"
    )


def as_complex_vector(values):
    return np.asarray(values, dtype=np.complex128).reshape(-1)

