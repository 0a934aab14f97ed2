"""Concrete symmetric sequence spaces: l_p, l_{p,q}, Lorentz, Orlicz."""

from .descriptor import (FAMILIES, SpaceDescriptor, SpaceParseError, lorentz,
                         lp, lpq, orlicz, parse_space)
from .norms import kothe_dual, l1_norm, norm, norm_rows, sup_norm
from .orlicz import (OrliczGenerator, luxemburg_norm, luxemburg_rows,
                     young_conjugate)
from .weights import WeightGenerator, fmt_num

__all__ = [
    "FAMILIES", "OrliczGenerator", "SpaceDescriptor", "SpaceParseError",
    "WeightGenerator", "fmt_num", "kothe_dual", "l1_norm", "lorentz", "lp",
    "lpq", "luxemburg_norm", "luxemburg_rows", "norm", "norm_rows", "orlicz",
    "parse_space", "sup_norm", "young_conjugate",
]
