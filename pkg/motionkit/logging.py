import logging
from timeit import default_timer

from .utils import json

LOG_LEVELS = {
    "critical": logging.CRITICAL,
    "error": logging.ERROR,
    "warning": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG
}

STEP_FIELDS = ("step", "l_flow", "l_kl", "l_hm", "l_nrm", "l_expr", "total",
               "wallclock")

logger = logging.getLogger('motionkit')
training_logger = logging.getLogger('motionkit.training')
data_logger = logging.getLogger('motionkit.data')
sampling_logger = logging.getLogger('motionkit.sampling')


def set_logging(level, handler=None):
    """
    Set level of logging, and choose where to display/save logs
    (file or standard output).
    """
    if not handler:
        handler = logging.StreamHandler()

    loglevel = LOG_LEVELS.get(level, logging.INFO)
    logger.setLevel(loglevel)
    format = r"%(asctime)s [%(process)d] [%(levelname)s] %(message)s"
    datefmt = r"%Y-%m-%d %H:%M:%S"

    handler.setFormatter(logging.Formatter(format, datefmt))
    logger.addHandler(handler)


class StepRecordFormatter(logging.Formatter):
    """Render the `extra` fields of a training step record as one JSON line.
    Records without a `step` attribute fall back to the plain message."""

    def __init__(self, fields=STEP_FIELDS):
        super(StepRecordFormatter, self).__init__()
        self.fields = fields

    def format(self, record):
        if not hasattr(record, "step"):
            return record.getMessage()
        return json.dumps(dict(
            (name, getattr(record, name, None)) for name in self.fields))


def log_step(info, logger=training_logger):
    """Emit one training step. Metrics in `info` are available to
    handlers as record attributes (step, total, l_flow, ...)."""
    logger.info(
        'step %(step)d total %(total).5f flow %(l_flow).5f took %(wallclock).2fs',
        info,
        extra=info,
    )


def install_step_log(path, logger=training_logger):
    """Install step log

    Training steps logged to `motionkit.training` are appended to `path`
    as newline-delimited JSON records with the fields

    - step
    - l_flow, l_kl, l_hm, l_nrm, l_expr
    - total
    - wallclock

    Returns a function that uninstalls the handler when called.
    """
    handler = logging.FileHandler(path, mode="a", encoding="utf-8")
    handler.setFormatter(StepRecordFormatter())
    handler.setLevel(logging.INFO)
    original_level = logger.level
    if logger.getEffectiveLevel() > logging.INFO:
        logger.setLevel(logging.INFO)
    logger.addHandler(handler)

    def uninstall():
        logger.removeHandler(handler)
        logger.setLevel(original_level)
        handler.close()

    return uninstall


class Stopwatch(object):
    """ wallclock seconds since construction or the last `restart` """

    def __init__(self):
        self.start = default_timer()

    def elapsed(self):
        return default_timer() - self.start

    def restart(self):
        elapsed = self.elapsed()
        self.start = default_timer()
        return elapsed
