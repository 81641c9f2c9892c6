"""Parses fine but claims the input is irreducible with the wrong content."""
import sys

sys.stdin.read()
print("1")
print("x+t")
