from .commands import COMMANDS, Experiment, prepare

__all__ = ["COMMANDS", "Experiment", "prepare"]
