# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Command-line entry points.

Every command is a `Command` class in its own module with a `help` text,
an `add_arguments(parser)` hook and a `handle(**options)` method. Every
command that reads a config also accepts each Config field as a flag:
`lambda_kl` is `--lambda-kl`.
"""
import argparse
import sys

from ..checkpoint import load_checkpoint, load_into
from ..exceptions import CheckpointFormatError, UnknownVariantError
from ..logging import set_logging
from ..motionprior import MotionPrior, split_prior_state
from ..nn.model import MotionModel
from ..schema import Config
from ..utils import load_class

__all__ = ['BaseCommand', 'COMMANDS', 'load_command_class', 'main']

COMMANDS = {
    "gen-data": "motionkit.commands.gen_data.Command",
    "train": "motionkit.commands.train.Command",
    "train-prior": "motionkit.commands.train_prior.Command",
    "infer": "motionkit.commands.infer.Command",
    "eval": "motionkit.commands.evaluate.Command",
    "outpaint": "motionkit.commands.outpaint.Command",
    "selftest": "motionkit.commands.selftest.Command",
}


def load_command_class(uri):
    if uri in COMMANDS:
        uri = COMMANDS[uri]
    try:
        return load_class(uri)
    except (ImportError, AttributeError, ValueError):
        raise UnknownVariantError("unknown command %r" % uri)


def _boolean(text):
    value = text.lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError("expected a boolean, got %r" % text)


def add_config_arguments(parser):
    group = parser.add_argument_group("config fields")
    group.add_argument("--config", help="json config file")
    for name, default in Config.field_defaults():
        if isinstance(default, bool):
            kind = _boolean
        elif isinstance(default, int):
            kind = int
        elif isinstance(default, float):
            kind = float
        else:
            kind = str
        group.add_argument("--" + name.replace("_", "-"), dest=name, type=kind,
                           default=None, metavar=type(default).__name__.upper(),
                           help="default: %r" % (default,))


class BaseCommand(object):
    help = ''
    uses_config = True

    def add_arguments(self, parser):
        pass

    def config(self, options, base=None):
        """ the run's Config: `base` (or --config, or the defaults) with
        every given field flag applied """
        overrides = dict((name, options.get(name))
                         for name, _ in Config.field_defaults()
                         if options.get(name) is not None)
        if options.get("config"):
            return Config.from_file(options["config"], **overrides)
        base = base if base is not None else Config()
        return base.replace(**overrides)

    def load(self, path, prior=False):
        """ (model, prior or None, config) from a checkpoint; `prior`
        requires a combined checkpoint written by train-prior """
        params, config = load_checkpoint(path)
        params, prior_params = split_prior_state(params)
        model = MotionModel(config)
        load_into(model, params)
        model.eval()
        if not prior:
            return model, None, config
        if not prior_params:
            raise CheckpointFormatError("%s holds no motion prior" % path)
        motion_prior = MotionPrior(config)
        load_into(motion_prior, prior_params)
        return model, motion_prior, config

    def handle(self, **options):
        raise NotImplementedError

    def write(self, text):
        sys.stdout.write(text + "\n")


def build_parser():
    parser = argparse.ArgumentParser(prog="motionkit")
    parser.add_argument("--log-level", default="info",
                        choices=["critical", "error", "warning", "info", "debug"])
    sub = parser.add_subparsers(dest="command")
    for name in sorted(COMMANDS):
        command = load_command_class(name)()
        p = sub.add_parser(name, help=command.help, description=command.help)
        command.add_arguments(p)
        if command.uses_config:
            add_config_arguments(p)
        p.set_defaults(handler=command)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return 2
    set_logging(args.log_level)
    options = vars(args)
    handler = options.pop("handler")
    result = handler.handle(**options)
    return result or 0
