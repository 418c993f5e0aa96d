"""Twisted current algebras, their Weyl and Demazure modules, and global modules.

Modules are finite-dimensional graded modules with exact action tables over Q.
"""

__version__ = "0.1.0"
