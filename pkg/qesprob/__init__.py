# qesprob: separability probabilities of random two-qubit states

__version__ = "1.0.0"
