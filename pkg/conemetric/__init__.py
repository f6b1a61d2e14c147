from .cones import *  # noqa: F401,F403

del cones  # noqa: 821
