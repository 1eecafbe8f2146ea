from .evaluation import evaluate
from .evaluation import EvaluationRecord
from .evaluation import run_episode
from .plan import CONDITION_PRESETS
from .plan import EPISODE_COUNT_GRID
from .plan import Modality
from .plan import NoiseFamily
from .plan import peak_sigma_act
from .plan import plan_with_preset
from .plan import sigma_act_at
from .plan import VariationPlan
