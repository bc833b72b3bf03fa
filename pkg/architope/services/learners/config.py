"""
Learner Configuration

Numerical constants for the base model classes.
"""

# Training is aborted once the loss exceeds this or turns non-finite
DIVERGENCE_LOSS = 1e6

# Adam moments
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8

# Loss is logged at DEBUG every this many epochs
LOG_EVERY = 250

# Finite-difference steps accepted by the gradient check
GRADIENT_CHECK_STEPS = (1e-6, 1e-4)

# Entries smaller than this fraction of the largest gradient are compared
# against that floor instead of their own magnitude
GRADIENT_CHECK_FLOOR = 1e-2
