from decimal import Decimal, localcontext
from fractions import Fraction

from errors import InvalidThreshold

# Significant digits used when a rational is rendered as a decimal string
DECIMAL_DIGITS = 12


def parse_rational(text, name="value"):
    """Parse a decimal or fraction string ("0.2", "1/5") into an exact Fraction"""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        # floats are taken by their shortest repr, never by their binary value
        text = repr(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise InvalidThreshold(f"{name} is not a number: {text!r}") from None


def format_rational(value):
    """Render a Fraction as a plain decimal string with up to 12 significant digits"""
    if value is None:
        return None

    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        quotient = Decimal(value.numerator) / Decimal(value.denominator)

    quotient = quotient.normalize()
    if quotient == 0:
        return "0"
    return format(quotient, "f")


def rational_payload(value):
    """Lossless JSON form of a Fraction: decimal rendering plus numerator/denominator"""
    if value is None:
        return None
    return {
        'value': format_rational(value),
        'num': value.numerator,
        'den': value.denominator,
    }


def rational_from_payload(payload):
    """Inverse of rational_payload"""
    if payload is None:
        return None
    return Fraction(int(payload['num']), int(payload['den']))


def format_duration(seconds):
    """Format a stage duration in seconds to a short human readable string"""
    if seconds is None:
        return "N/A"

    if seconds < 1e-3:
        return f"{seconds * 1e6:.0f}us"
    elif seconds < 1:
        return f"{seconds * 1e3:.1f}ms"
    elif seconds < 60:
        return f"{seconds:.2f}s"
    else:
        minutes, rest = divmod(seconds, 60)
        return f"{int(minutes):02d}:{rest:05.2f}"
