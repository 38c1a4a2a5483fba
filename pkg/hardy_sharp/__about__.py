"""
    .. Copyright:
        Copyright 2026 Hardy Sharp contributors licensed under Apache License, Version 2.0
        See file LICENSE for full license details.
"""

__author__ = "Hardy Sharp contributors"
__author_email__ = "hardy-sharp@users.noreply.github.com"
__classifiers__ = [
    "Development Status :: 4 - Beta",
    "Intended Audience :: Science/Research",
    "License :: OSI Approved :: Apache Software License",
    "Topic :: Scientific/Engineering :: Mathematics",
    "Programming Language :: Python :: 3",
]
__copyright__ = "2026 Hardy Sharp contributors"
__description__ = "Numerical verification laboratory for the sharp Riesz-Fejer inequality on harmonic Hardy spaces."
__license__ = "Apache-2"
__pkg_name__ = "hardy_sharp"
__title__ = "Hardy Sharp"
__url__ = "https://github.com/hardy-sharp/hardy-sharp"
__version__ = "v0.0.dev0"
__keywords__ = "harmonic hardy spaces riesz-fejer schur test quadrature"
