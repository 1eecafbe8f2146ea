from colorama import Fore
from colorama import Style


def fancy_print(message: str) -> None:
    """
    Displays a fancy print message.

    Args:
        message (str): The message to display.
    """
    print(Style.BRIGHT + Fore.CYAN + f"\n{'=' * 50}")
    print(Fore.MAGENTA + f"{message}")
    print(Style.BRIGHT + Fore.CYAN + f"{'=' * 50}\n" + Style.RESET_ALL)


def fancy_step_tracker(step: int, total_steps: int, label: str = "GENERATION") -> None:
    """
    Displays a fancy step tracker for each iteration of a loop.

    Args:
        step (int): The current (0-based) step in the loop.
        total_steps (int): The total number of steps in the loop.
        label (str, optional): What a step is called. Defaults to "GENERATION".
    """
    fancy_print(f"{label} {step + 1}/{total_steps}")


def log_generation(log, verbose: int = 0) -> None:
    """
    Prints one coloured line summarising a GenerationLog.

    Args:
        log (GenerationLog): The record to display.
        verbose (int, optional): Nothing is printed unless verbose > 0.
    """
    if verbose <= 0:
        return

    line = (
        Fore.BLUE
        + f"gen {log.generation:4d}  best {log.best_fitness:12.4f}"
        + f"  mean {log.mean_fitness:12.4f}  center {log.center_eval_fitness:12.4f}"
    )
    if log.iev is not None:
        line += Fore.GREEN + f"  iev {log.iev:.4f}  snr {log.snr:+.4f}"
    line += Fore.MAGENTA + f"  sigma_act {log.sigma_act_effective:.3f}"
    print(line + Style.RESET_ALL)


def log_warning(message: str, verbose: int = 0) -> None:
    """
    Prints a red warning or advisory line.

    Args:
        message (str): The text to display.
        verbose (int, optional): Nothing is printed unless verbose > 0.
    """
    if verbose > 0:
        print(Fore.RED + message + Style.RESET_ALL)
