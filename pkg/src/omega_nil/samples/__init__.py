"""Bundled sample substitutions and endomorphisms."""
