"""Einstein, nilsoliton and solsoliton metrics on solvable Lie groups."""

__version__ = "0.1.0"
