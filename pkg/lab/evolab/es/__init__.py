from .config import EsConfig
from .logbook import GenerationLog
from .logbook import read_generation_log
from .logbook import write_generation_log
from .operators import adam_ascend
from .operators import AdamState
from .operators import apply_weight_decay
from .operators import centered_ranks
from .operators import es_update
from .operators import gradient_estimate
from .operators import sample_perturbations
from .strategy import evolve
from .strategy import EvolutionResult
