"""Level-raising congruences for algebraic modular forms on definite quaternion algebras."""

__version__ = "0.1.0"
