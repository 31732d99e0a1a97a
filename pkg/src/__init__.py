"""Exact word maps on finite metacyclic p-groups."""
