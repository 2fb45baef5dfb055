"""Definite quaternion algebras over Q: maximal orders, ideal classes and Brandt matrices."""
