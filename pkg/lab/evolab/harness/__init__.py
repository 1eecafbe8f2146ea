from .config import dump_run_config
from .config import load_run_config
from .config import PolicyConfig
from .config import RunConfig
from .plotdata import cmd_plotdata
from .posteval import cmd_posteval
from .posteval import make_protocol
from .posteval import PostEvalProtocol
from .report import cmd_iev_report
from .runner import cmd_evolve
from .runner import run_experiment
from .sweep import cmd_sweep
from .sweep import Condition
from .sweep import Sweep
