"""
#### qrac_entropy

Classical and quantum bounds on the n→1 quantum random access code witness,
semi-device independent min-entropy certification as a function of the observed
witness value, the explicit optimal 3→1 code, and finite-statistics simulation
of protocol runs.
"""

__version__ = "0.1.0"
__author__ = "qrac_entropy developers"
