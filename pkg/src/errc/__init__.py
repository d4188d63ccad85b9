"""Classify research papers as RE / non-RE and empirical / non-empirical.

Two feature methods are provided: counts of a small keyword set (baseline)
and each paper's ten most frequent stems (ERRC). Both feed ZeroR, naive Bayes
and C4.5-style tree classifiers under repeated k-fold cross-validation, and the
methods are compared with one-tailed t-tests.
"""

__version__ = "0.1.0"
