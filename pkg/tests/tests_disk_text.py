"""Shared fixture text: the reflection disk (cone on the reflection circle)."""

DISK_TEXT = """
gcw reflection_disk
group z2
dim 2
cells 0: a iso={0,1}; b iso={0,1}
cells 1: e iso={0}; d iso={0,1}
cells 2: f iso={0}
boundary e = 1*(b, 0) - 1*(a, 0)
boundary d = 1*(b, 0) - 1*(a, 0)
boundary f = 1*(e, 0) - 1*(d, 0)
"""
