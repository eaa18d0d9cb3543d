"""
This init file contains input data for the unit tests of data_processing.py
"""

from typing import List

#  steady-state per-user throughput (Mbps) of a batch of runs, in no particular order

THROUGHPUT_LIST: List[float] = [12.5, 3.0, 7.5, 10.0, 5.0]
