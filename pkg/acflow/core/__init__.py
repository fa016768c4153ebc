# Core package for acflow: exception hierarchy shared by all sub-packages
