"""Construction and exact verification of three-term-progression-free sets in Z_m^n."""
from .geometry import (
    UnitPoint,
    area_T,
    g,
    in_T,
    in_T1,
    in_T2,
    parse_rational,
    phi,
    phi_preimage_T,
    reduce_mod1,
)
from .lifting import LiftSpec, certify_lift, enumerate_lift, lift_bounds, lift_size
from .reducibility import (
    PeelCertificate,
    exhaustive_reducibility_oracle,
    greedy_peel,
    is_reducible,
    non_mid_points,
    relaxed_peel,
    select_mu_nu_point,
    verify_certificate,
)
from .search import box_set, bounds_table, grid_search_alpha_beta, salem_spencer_digits
from .zm import (
    SiteSet,
    find_three_term_progression,
    is_cousin,
    is_three_term_progression,
)

__version__ = "0.1.0"
