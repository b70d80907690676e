"""covertower: exact tools for congruence covers of twist-knot orbifolds,
the quaternion-order unit tower over Q(sqrt(-2)), and p-quotient analysis
of finitely presented groups."""

__version__ = "0.1.0"
