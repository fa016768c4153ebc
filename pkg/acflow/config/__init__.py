# Config package for acflow
