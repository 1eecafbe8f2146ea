from .io import load_checkpoint
from .io import save_checkpoint
from .mlp import as_parameter_vector
from .mlp import Controller
from .mlp import forward
from .mlp import MlpSpec
from .mlp import ObsNormalizer
from .mlp import param_count
from .mlp import ParameterVector
from .normalizer import build_normalizer
