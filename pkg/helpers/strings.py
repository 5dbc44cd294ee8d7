import math


def format_number(value: float) -> str:
    """17 significant digits, the fixed output format of every report."""
    return "%.17g" % value


def truncate_text(text: str, length: int, replacement: str = "...") -> str:
    if len(text) <= length:
        return text
    return text[:length] + replacement


def finite_or_max(value: float) -> float:
    """Map nan and inf to the largest float so reports stay valid JSON."""
    value = float(value)
    return value if math.isfinite(value) else 1.7976931348623157e308
