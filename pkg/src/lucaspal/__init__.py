"""Computer-assisted verification that no Lucas number is a palindromic
concatenation of two distinct repdigits."""

__version__ = "0.1.0"
