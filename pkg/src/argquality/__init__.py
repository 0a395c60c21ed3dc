"""Argument-quality assessment from text alone.

Eight feature families over linguistic primitives, per-dimension linear
epsilon-SVR trained by dual coordinate descent, and a leave-one-topic-out
benchmark harness with MAE tables and significance marks.
"""

__version__ = "0.1.0"
