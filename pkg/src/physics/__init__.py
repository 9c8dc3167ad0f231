"""
Numerical modules: potential, instanton, fluctuation, dilute gas and the grid oracle.
"""
