from .diagnostics import assess_variation_impact
from .diagnostics import VariationAdvice
from .iev import iev
from .iev import iev_from_double_eval
from .iev import IevSample
from .iev import mean_iev
from .iev import noise_baseline
from .iev import rank_fitness
from .iev import Ranking
from .iev import snr
from .iev import snr_exact
