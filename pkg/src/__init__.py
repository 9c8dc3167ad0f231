"""
Triwell - instanton analysis of the symmetric triple-well potential
"""

__version__ = "1.0.0"
__author__ = "Triwell Contributors"
__description__ = "Instanton method, dilute gas and grid oracle for V(x) = αx²(x²-β²)²"
