from .es import evolve
from .metrics import iev
from .metrics import snr
