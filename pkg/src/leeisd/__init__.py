"""Lee-metric information set decoding over Z_4.

Exact Z_4 linear algebra, Stern's algorithm over F_2 and Z_4, a bit-operation
cost model with parameter search, and desk-scale quaternary McEliece and
Niederreiter.
"""

from ._accel import backend_name
from .complexity import (
    COST_MODELS,
    CostEstimate,
    ParamChoice,
    cost_stern_f2,
    cost_stern_z4,
    key_size_binary,
    key_size_quaternary,
    optimize_params,
    table_scan,
)
from .crypto import (
    attack_self_test,
    gen_secret_code,
    mceliece_decrypt,
    mceliece_encrypt,
    mceliece_keygen,
    niederreiter_decrypt,
    niederreiter_encrypt,
    niederreiter_keygen,
)
from .errors import (
    BudgetExceeded,
    DecryptionFailure,
    FormatError,
    InfeasibleParams,
    LeeIsdError,
    RetrySelection,
    SingularMatrixError,
)
from .isd import IsdInstance, IsdResult, brute_force_decode, plant_instance, stern_f2, stern_z4
from .lee import count_lee, gray_inverse, gray_map, gv_dimension, lee_distance, lee_weight, rate, singleton_bound
from .params import IsdParams
from .ring import (
    CodeType,
    SystematicGenerator,
    SystematicParityCheck,
    find_transform,
    parity_from_generator,
    quaternary_systematic_form,
)

__version__ = "0.1.0"
