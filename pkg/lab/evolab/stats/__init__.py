from .kruskal import chi2_sf
from .kruskal import format_p
from .kruskal import kruskal_wallis
from .kruskal import KwResult
from .kruskal import summarize
from .kruskal import Summary
