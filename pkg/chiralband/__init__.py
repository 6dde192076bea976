from . import intlat, graph, floquet, spectrum, asymptotics, iso

__version__ = "0.1.0"
