"""Lead-lag structure analysis of time series panels.

Every subcommand writes a CSV or JSON file that echoes the resolved
configuration.  The exit status is 0 on success, 1 for usage and
configuration problems, 2 for problems with the data, and 3 for numerical
failures or failed validation checks.
"""

# Copyright 2026, lagstruct developers.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
# SPDX-License-Identifier: Apache-2.0
#
# Reuse is permitted under the terms of the license.
# The AUTHORS file and the LICENSE file are at the
# top level of this library.

import argparse
import logging

from lagstruct import util
from lagstruct.cli.compare import add_parser as compare_ap
from lagstruct.cli.granger import add_parser as granger_ap
from lagstruct.cli.indicator import add_parser as indicator_ap
from lagstruct.cli.simulate import add_parser as simulate_ap
from lagstruct.cli.twtable import add_parser as twtable_ap
from lagstruct.cli.validate_rmt import add_parser as validate_rmt_ap
from lagstruct.errors import ConfigError, DataError, NumericalError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


def arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lagstruct", description=__doc__, parents=[util.parent_parser()]
    )
    subparsers = parser.add_subparsers(
        title="subcommands",
        description="valid subcommands",
        help="additional help available via '%(prog)s subcommand -h'",
    )
    twtable_ap(subparsers)
    validate_rmt_ap(subparsers)
    simulate_ap(subparsers)
    indicator_ap(subparsers)
    granger_ap(subparsers)
    compare_ap(subparsers)
    return parser


def main(argv=None) -> int:
    parser = arg_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_usage()
        return EXIT_USAGE

    util.set_logger(args.verbose)

    # DataError and ConfigError are also ValueErrors, so order matters.
    try:
        return args.func(args)
    except DataError as err:
        logger.error(err)
        return EXIT_DATA
    except NumericalError as err:
        logger.error(err)
        return EXIT_NUMERIC
    except (ConfigError, ValueError) as err:
        logger.error(err)
        return EXIT_USAGE
    except OSError as err:
        logger.error(err)
        return EXIT_DATA
