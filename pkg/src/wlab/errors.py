class WlabError(Exception):
    pass


class InvalidInput(WlabError, ValueError):
    pass


class DegenerateLattice(WlabError):
    pass


class PoleError(WlabError):
    def __init__(self, z, lattice_point):
        super().__init__(f"{z} lies within the pole radius of lattice point {lattice_point}")
        self.z = z
        self.lattice_point = lattice_point


class PreconditionError(WlabError):
    pass


class DegenerateConfiguration(WlabError):
    pass


class MapPoleError(WlabError):
    pass


class PathError(WlabError):
    pass


class QuadratureError(WlabError):
    pass


class NonIntegral(WlabError, ValueError):
    pass
